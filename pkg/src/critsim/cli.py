"""Command-line interface: sweeps, classification, fitting, presets, validation.

Exit codes: 0 success, 1 usage error, 2 configuration/validation error,
3 runtime or numerical error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from .analysis import classify_profile, window_metrics
from .config import RunConfig, BuiltRun, PRESET_NAMES, load_config, preset
from .errors import DegenerateCavityError, UsageError, ValidationError
from .fit import (
    DEFAULT_BOUNDS,
    FitProblem,
    ObjectiveDomain,
    ObservedSpectrum,
    fit_parameters,
)
from .output import read_csv, render_result, write_result
from .sweep import ScanMode, SweepResult, frequency_scan, intensity_scan, mirror_scan
from .validate import run_validation


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="configuration document (INI or JSON)")
    common.add_argument("--preset", metavar="NAME", help="named base configuration")
    common.add_argument("--output", metavar="PATH", help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="output format for sweep data")
    common.add_argument("--points", type=int, metavar="N", help="override grid size")
    common.add_argument(
        "--span", type=float, metavar="VALUE", help="override scan span (in the active span style)"
    )

    parser = _Parser(prog="critsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    sub.add_parser("reflectivity", parents=[common], help="classical carrier intensity sweep")
    sub.add_parser("spectrum", parents=[common], help="quadrature noise spectrum sweep")
    sub.add_parser(
        "classify", parents=[common], help="sweep + line-shape labels and window metrics (JSON)"
    )

    fit_cmd = sub.add_parser("fit", parents=[common], help="fit model parameters to spectrum data")
    fit_cmd.add_argument("--data", required=True, metavar="CSV", help="observed spectrum file")
    fit_cmd.add_argument(
        "--free",
        action="append",
        default=[],
        metavar="NAME[=LO:HI]",
        help="free parameter, repeatable or comma-separated; optional bounds",
    )
    fit_cmd.add_argument(
        "--channels",
        default=None,
        metavar="LIST",
        help="comma list from var_x, var_y, intensity (default: whichever are present)",
    )
    fit_cmd.add_argument("--max-evals", type=int, default=10_000, metavar="N")
    fit_cmd.add_argument(
        "--domain", choices=("linear", "decibel"), default="decibel", help="objective domain"
    )

    sub.add_parser("presets", parents=[common], help="list preset names")
    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    rc = preset(args.preset) if args.preset else RunConfig()
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ValidationError(f"cannot read config {args.config!r}: {exc}") from None
        rc = load_config(text, base=rc)
    scan_updates: dict[str, object] = {}
    if args.points is not None:
        scan_updates["points"] = args.points
    if args.span is not None:
        key = rc.active_span_key()
        scan_updates.update({"span_hz": None, "span_fsr": None, "span_m": None, key: args.span})
    if scan_updates:
        rc = dataclasses.replace(rc, scan=dataclasses.replace(rc.scan, **scan_updates))
    output_updates: dict[str, object] = {}
    if args.output is not None:
        output_updates["path"] = args.output
    if args.format is not None:
        output_updates["format"] = args.format
    if output_updates:
        rc = dataclasses.replace(rc, output=dataclasses.replace(rc.output, **output_updates))
    return rc


def _run_sweep(run: BuiltRun) -> SweepResult:
    if run.scan.mode is ScanMode.MIRROR:
        return mirror_scan(run.config, run.input_state, run.omega, run.scan, run.detection)
    return frequency_scan(run.config, run.input_state, run.omega, run.scan, run.detection)


def _emit_result(result: SweepResult, run: BuiltRun) -> None:
    if run.output_path:
        write_result(result, run.output_format, run.output_path)
    else:
        sys.stdout.write(render_result(result, run.output_format))


def _emit_text(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_reflectivity(args: argparse.Namespace) -> int:
    run = _resolve_config(args).build()
    _emit_result(intensity_scan(run.config, run.scan), run)
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    run = _resolve_config(args).build()
    _emit_result(_run_sweep(run), run)
    return 0


def _series_report(detuning, values) -> dict:
    label = classify_profile(detuning, values)
    metrics = window_metrics(detuning, values)
    return {
        "label": label.label.value,
        "signature": label.signature,
        "window_metrics": {
            "window_height": metrics.window_height,
            "window_fwhm_hz": metrics.window_fwhm,
            "envelope_fwhm_hz": metrics.envelope_fwhm,
            "splitting_hz": metrics.splitting,
        },
    }


def _cmd_classify(args: argparse.Namespace) -> int:
    run = _resolve_config(args).build()
    result = _run_sweep(run)
    payload = {
        "var_x": _series_report(result.detuning, result.var_x),
        "var_y": _series_report(result.detuning, result.var_y),
        "intensity": _series_report(result.detuning, result.intensity),
    }
    _emit_text(json.dumps(payload, indent=1) + "\n", run.output_path)
    return 0


def _parse_free(items: Sequence[str]) -> dict[str, Optional[tuple[float, float]]]:
    free: dict[str, Optional[tuple[float, float]]] = {}
    for item in items:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            name, eq, bounds_text = part.partition("=")
            name = name.strip()
            if not eq:
                free[name] = None
                continue
            lo_text, sep, hi_text = bounds_text.partition(":")
            if not sep:
                raise UsageError(f"--free {part!r}: bounds must be LO:HI")
            try:
                free[name] = (float(lo_text), float(hi_text))
            except ValueError:
                raise UsageError(f"--free {part!r}: bounds must be numbers") from None
    if not free:
        raise UsageError("fit requires at least one --free parameter")
    return free


def _initial_guess(run: BuiltRun, free: dict) -> dict[str, float]:
    base = {
        "r0_sq": run.config.r0 ** 2,
        "r1_sq": run.config.r1 ** 2,
        "r2_sq": run.config.r2 ** 2,
        "t1": run.config.t1,
        "t2": run.config.t2,
        "var_x_in": run.input_state.var_x,
        "var_y_in": run.input_state.var_y,
        "eta": run.detection.eta,
        "detuning_offset": 0.0,
        "scale": 1.0,
    }
    guess = {}
    for name, bound in free.items():
        lo, hi = DEFAULT_BOUNDS.get(name, (0.0, 1.0)) if bound is None else bound
        width = hi - lo
        value = base.get(name, 0.5 * (lo + hi))
        guess[name] = min(max(value, lo + 1e-9 * width), hi - 1e-9 * width)
    return guess


def _cmd_fit(args: argparse.Namespace) -> int:
    run = _resolve_config(args).build()
    free = _parse_free(args.free)
    columns = read_csv(args.data)
    channels = None
    if args.channels:
        channels = tuple(c.strip() for c in args.channels.split(",") if c.strip())
    observed = ObservedSpectrum.from_columns(columns, channels)
    problem = FitProblem(
        observed=observed,
        config=run.config,
        input_state=run.input_state,
        omega=run.omega,
        free=free,
        detection=run.detection,
        domain=ObjectiveDomain(args.domain),
    )
    result = fit_parameters(problem, _initial_guess(run, dict(problem.free)), args.max_evals)
    payload = {
        "params": result.params,
        "residual_rms": result.residual_rms,
        "n_evals": result.n_evals,
        "converged": result.converged,
    }
    _emit_text(json.dumps(payload, indent=1) + "\n", run.output_path)
    return 0


def _cmd_presets(args: argparse.Namespace) -> int:
    _emit_text("".join(f"{name}\n" for name in PRESET_NAMES), args.output)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    failures = run_validation()
    return 0 if failures == 0 else 3


_COMMANDS = {
    "reflectivity": _cmd_reflectivity,
    "spectrum": _cmd_spectrum,
    "classify": _cmd_classify,
    "fit": _cmd_fit,
    "presets": _cmd_presets,
    "validate": _cmd_validate,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command (try --help)")
        return _COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DegenerateCavityError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ArithmeticError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
