"""Sweep-result serialization: a fixed-schema CSV and a metadata-carrying JSON form.

Floats are rendered with ``repr``, the shortest decimal string that
parses back to the identical binary value, so re-running an identical
configuration yields byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import IO, Any, Optional

import numpy as np

from .errors import ValidationError
from .quantum import variance_to_db
from .sweep import SweepResult

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "detuning_hz",
    "detuning_fsr",
    "phi1_rad",
    "phi2_rad",
    "rho_plus",
    "theta_plus_rad",
    "rho_minus",
    "theta_minus_rad",
    "intensity",
    "var_x",
    "var_y",
    "var_x_db",
    "var_y_db",
)


def _db(values: np.ndarray) -> np.ndarray:
    out = np.full(values.shape, -math.inf)
    positive = values > 0.0
    out[positive] = 10.0 * np.log10(values[positive])
    return out


def _columns(result: SweepResult) -> dict[str, np.ndarray]:
    return {
        "detuning_hz": result.detuning,
        "detuning_fsr": result.detuning_fsr,
        "phi1_rad": result.phi1,
        "phi2_rad": result.phi2,
        "rho_plus": result.rho_plus,
        "theta_plus_rad": result.theta_plus,
        "rho_minus": result.rho_minus,
        "theta_minus_rad": result.theta_minus,
        "intensity": result.intensity,
        "var_x": result.var_x,
        "var_y": result.var_y,
        "var_x_db": _db(result.var_x),
        "var_y_db": _db(result.var_y),
    }


def result_metadata(result: SweepResult) -> dict[str, Any]:
    """Everything needed to reproduce the sweep, echoed into JSON output."""
    config = result.config
    detection = result.detection
    return {
        "kind": result.kind,
        "cavity": {
            "r0": config.r0,
            "r1": config.r1,
            "r2": config.r2,
            "t1": config.t1,
            "t2": config.t2,
            "length1_m": config.length1,
            "length2_m": config.length2,
            "n1": config.n1,
            "n2": config.n2,
            "variant": config.variant.value,
            "single_cavity": config.single_cavity,
            "phi1_offset_rad": config.phi1_offset,
            "phi2_offset_rad": config.phi2_offset,
            "fsr1_hz": config.fsr1,
            "fsr2_hz": config.fsr2,
        },
        "input": {
            "var_x": result.input_state.var_x,
            "var_y": result.input_state.var_y,
        },
        "omega_hz": result.omega,
        "detection": None
        if detection is None
        else {"eta": detection.eta, "lo_phase_rad": detection.lo_phase},
        "scan": {
            "mode": result.scan.mode.value,
            "span": result.scan.span,
            "points": result.scan.points,
            "gain_ratio": result.scan.gain_ratio,
            "wavelength_m": result.scan.wavelength,
        },
    }


def write_csv(result: SweepResult, stream: IO[str]) -> None:
    cols = _columns(result)
    stream.write(",".join(CSV_COLUMNS))
    stream.write("\n")
    for row in zip(*(cols[name] for name in CSV_COLUMNS)):
        stream.write(",".join(repr(float(v)) for v in row))
        stream.write("\n")


def write_json(result: SweepResult, stream: IO[str]) -> None:
    cols = _columns(result)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "metadata": result_metadata(result),
        "records": [
            {name: float(v) for name, v in zip(CSV_COLUMNS, row)}
            for row in zip(*(cols[name] for name in CSV_COLUMNS))
        ],
    }
    json.dump(payload, stream, indent=1)
    stream.write("\n")


def write_result(result: SweepResult, format: str, path: str) -> None:
    """Write to ``path`` in ``format`` ('csv' or 'json')."""
    if format not in ("csv", "json"):
        raise ValidationError(f"format must be 'csv' or 'json', got {format!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as stream:
        if format == "csv":
            write_csv(result, stream)
        else:
            write_json(result, stream)


def render_result(result: SweepResult, format: str) -> str:
    """Serialize to a string (the CLI's stdout path)."""
    import io as _io

    buf = _io.StringIO()
    if format == "csv":
        write_csv(result, buf)
    elif format == "json":
        write_json(result, buf)
    else:
        raise ValidationError(f"format must be 'csv' or 'json', got {format!r}")
    return buf.getvalue()


def read_csv(path: str) -> dict[str, np.ndarray]:
    """Read a CSV produced by :func:`write_csv` back into column arrays.

    Column order is not required to match; unknown headers are rejected.
    """
    with open(path, "r", encoding="utf-8") as stream:
        header_line = stream.readline().strip()
        if not header_line:
            raise ValidationError(f"{path}: empty CSV file")
        header = header_line.split(",")
        unknown = [h for h in header if h not in CSV_COLUMNS]
        if unknown:
            raise ValidationError(f"{path}: unknown CSV columns {unknown}")
        rows = []
        for lineno, line in enumerate(stream, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise ValidationError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: non-numeric field") from None
    if not rows:
        raise ValidationError(f"{path}: CSV contains no data rows")
    data = np.asarray(rows, dtype=np.float64)
    return {name: data[:, i] for i, name in enumerate(header)}


def read_json(path: str) -> dict[str, Any]:
    """Read a JSON document produced by :func:`write_json`."""
    with open(path, "r", encoding="utf-8") as stream:
        payload = json.load(stream)
    if not isinstance(payload, dict) or "records" not in payload:
        raise ValidationError(f"{path}: not a sweep-result JSON document")
    return payload
