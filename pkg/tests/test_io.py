"""CSV/JSON serialization of sweep results and round-trip fidelity."""

from __future__ import annotations

import dataclasses
import json

import numpy as np
import pytest

from critsim import ValidationError, read_csv
from critsim.config import preset
from critsim.output import (
    CSV_COLUMNS,
    SCHEMA_VERSION,
    read_json,
    render_result,
    result_metadata,
    write_result,
)
from critsim.sweep import frequency_scan


EXPECTED_HEADER = (
    "detuning_hz,detuning_fsr,phi1_rad,phi2_rad,rho_plus,theta_plus_rad,"
    "rho_minus,theta_minus_rad,intensity,var_x,var_y,var_x_db,var_y_db"
)


def _result(points=5, name="figS2"):
    run = preset(name).build()
    spec = dataclasses.replace(run.scan, points=points)
    return frequency_scan(run.config, run.input_state, run.omega, spec, run.detection)


def test_csv_column_set_is_exact():
    assert ",".join(CSV_COLUMNS) == EXPECTED_HEADER
    assert len(CSV_COLUMNS) == 13


def test_csv_layout_header_plus_one_line_per_point():
    res = _result(points=5)
    lines = render_result(res, "csv").splitlines()
    assert len(lines) == 6
    assert lines[0] == EXPECTED_HEADER
    for line in lines[1:]:
        assert len(line.split(",")) == 13


def test_rendering_is_byte_deterministic():
    a = render_result(_result(), "csv")
    b = render_result(_result(), "csv")
    assert a == b
    ja = render_result(_result(), "json")
    jb = render_result(_result(), "json")
    assert ja == jb


def test_csv_floats_round_trip_exactly(tmp_path):
    res = _result(points=11)
    path = tmp_path / "sweep.csv"
    write_result(res, "csv", str(path))
    cols = read_csv(str(path))
    assert set(cols) == set(CSV_COLUMNS)
    np.testing.assert_array_equal(cols["detuning_hz"], res.detuning)
    np.testing.assert_array_equal(cols["rho_plus"], res.rho_plus)
    np.testing.assert_array_equal(cols["var_x"], res.var_x)
    np.testing.assert_array_equal(cols["var_y"], res.var_y)
    np.testing.assert_array_equal(cols["intensity"], res.intensity)


def test_csv_decibel_columns_match_linear_columns():
    res = _result(points=7)
    text = render_result(res, "csv")
    rows = [line.split(",") for line in text.splitlines()[1:]]
    var_x = np.array([float(r[9]) for r in rows])
    var_x_db = np.array([float(r[11]) for r in rows])
    np.testing.assert_allclose(var_x_db, 10.0 * np.log10(var_x), atol=1e-12)


def test_shortest_round_trip_float_rendering():
    res = _result(points=5)
    text = render_result(res, "csv")
    for token in text.splitlines()[1].split(","):
        value = float(token)
        assert repr(value) == token or format(value, ".17g") == token or str(value) == token
        # Re-rendering the parsed value must reproduce the token exactly.
        assert float(token) == value


def test_json_document_structure_and_round_trip(tmp_path):
    res = _result(points=5)
    doc = json.loads(render_result(res, "json"))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["metadata"] == result_metadata(res)
    assert len(doc["records"]) == 5
    for rec in doc["records"]:
        assert set(rec) == set(CSV_COLUMNS)

    path = tmp_path / "sweep.json"
    write_result(res, "json", str(path))
    loaded = read_json(str(path))
    assert loaded == doc
    got = np.array([rec["var_x"] for rec in loaded["records"]])
    np.testing.assert_array_equal(got, res.var_x)


def test_json_metadata_echoes_configuration():
    res = _result(points=5)
    meta = result_metadata(res)
    assert meta["kind"] == "frequency"
    assert meta["cavity"]["r1"] ** 2 == pytest.approx(0.999, rel=1e-12)
    assert meta["cavity"]["variant"] == "symmetric"
    assert meta["omega_hz"] == pytest.approx(res.omega, rel=1e-15)
    assert meta["scan"]["points"] == 5
    assert meta["input"]["var_x"] == pytest.approx(res.input_state.var_x)
    assert meta["detection"] == {"eta": 1.0, "lo_phase_rad": 0.0}


def test_write_result_rejects_unknown_format(tmp_path):
    res = _result(points=5)
    with pytest.raises(ValidationError, match="format"):
        write_result(res, "yaml", str(tmp_path / "x.yaml"))


def test_read_csv_rejects_unknown_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,value\n0,1\n")
    with pytest.raises(ValidationError, match="unknown CSV columns"):
        read_csv(str(path))


def test_read_csv_reports_malformed_line_number(tmp_path):
    res = _result(points=5)
    path = tmp_path / "sweep.csv"
    write_result(res, "csv", str(path))
    lines = path.read_text().splitlines()
    lines[3] = lines[3].rsplit(",", 1)[0]  # drop one field from data line 3
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValidationError, match="4"):
        read_csv(str(path))


def test_read_csv_rejects_non_numeric_values(tmp_path):
    res = _result(points=5)
    path = tmp_path / "sweep.csv"
    write_result(res, "csv", str(path))
    text = path.read_text().replace("0.02", "abc", 1)
    path.write_text(text)
    with pytest.raises(ValidationError):
        read_csv(str(path))
