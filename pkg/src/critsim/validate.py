"""Self-contained invariant suite: physics and plumbing checks on random inputs.

Every check returns (name, passed, detail).  The suite is seeded and
deterministic; it is what the ``validate`` CLI subcommand runs.
"""

from __future__ import annotations

import dataclasses
import io
import math
from typing import Callable

import numpy as np

from . import _kernels
from .cavity import (
    CoupledCavityConfig,
    PhasePair,
    Variant,
    coupled_reflectivity,
    inner_reflectivity,
)
from .config import PRESET_NAMES, load_config, preset, serialize_config
from .covariance import variance_via_covariance
from .output import render_result
from .quantum import (
    InputGaussianState,
    SidebandResponsePair,
    sideband_pair,
    variance_at_angle,
    variance_x,
    variance_y,
)
from .sweep import ScanMode, ScanSpec, frequency_scan, mirror_scan

_SEED = 20240917


def _random_config(rng: np.random.Generator) -> CoupledCavityConfig:
    return CoupledCavityConfig(
        r0=rng.uniform(0.0, 1.0),
        r1=rng.uniform(0.0, 1.0),
        r2=rng.uniform(0.0, 1.0),
        t1=rng.uniform(0.5, 1.0),
        t2=rng.uniform(0.5, 1.0),
    )


def check_passivity() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED)
    phi = np.linspace(-math.pi, math.pi, 10_000)
    worst = 0.0
    for _ in range(1000):
        config = _random_config(rng)
        grid = _kernels.reflection_grid(
            phi, phi, config.r0, config.r1, config.r2, config.t1, config.t2, True, False
        )
        worst = max(worst, float(np.max(np.abs(grid))))
    return worst <= 1.0 + 1e-12, f"max |R| = {worst!r}"


def check_lossless_unitarity() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 1)
    phi = np.linspace(-math.pi, math.pi, 2001)
    worst = 0.0
    for _ in range(200):
        config = CoupledCavityConfig(
            r0=1.0, r1=rng.uniform(0.0, 0.999), r2=rng.uniform(0.0, 1.0), t1=1.0
        )
        for variant in Variant:
            cfg = dataclasses.replace(config, variant=variant)
            mags = np.array([abs(inner_reflectivity(cfg, p)) for p in phi[::40]])
            worst = max(worst, float(np.max(np.abs(mags - 1.0))))
    return worst <= 1e-12, f"max | |R1| - 1 | = {worst!r}"


def check_conjugate_symmetry() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 2)
    worst = 0.0
    for _ in range(300):
        config = _random_config(rng)
        phi = rng.uniform(-math.pi, math.pi)
        fwd = coupled_reflectivity(config, PhasePair(phi, phi))
        rev = coupled_reflectivity(config, PhasePair(-phi, -phi))
        worst = max(worst, abs(rev - fwd.conjugate()))
    return worst <= 1e-12, f"max |R(-phi) - conj R(phi)| = {worst!r}"


def check_periodicity() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 3)
    worst = 0.0
    two_pi = 2.0 * math.pi
    for _ in range(300):
        config = _random_config(rng)
        phi = rng.uniform(-math.pi, math.pi)
        a = coupled_reflectivity(config, PhasePair(phi, phi))
        b = coupled_reflectivity(config, PhasePair(phi + two_pi, phi + two_pi))
        worst = max(worst, abs(a - b))
    return worst <= 1e-12, f"max |R(phi+2pi) - R(phi)| = {worst!r}"


def check_decoupling() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 4)
    worst = 0.0
    for _ in range(200):
        r2 = rng.uniform(0.0, 1.0)
        t2 = rng.uniform(0.5, 1.0)
        phi2 = rng.uniform(-math.pi, math.pi)
        base = None
        for _ in range(5):
            config = CoupledCavityConfig(
                r0=rng.uniform(0.0, 1.0),
                r1=1.0,
                r2=r2,
                t1=rng.uniform(0.5, 1.0),
                t2=t2,
            )
            phi1 = rng.uniform(-math.pi, math.pi)
            value = coupled_reflectivity(config, PhasePair(phi1, phi2))
            if base is None:
                base = value
            worst = max(worst, abs(value - base))
    return worst <= 1e-12, f"max variation under (r0, t1, phi1) = {worst!r}"


def check_vacuum_preservation() -> tuple[bool, str]:
    run = load_config("[input]\ns = 0.0\n", base=preset("figS2")).build()
    result = frequency_scan(run.config, run.input_state, run.omega, run.scan)
    worst = max(
        float(np.max(np.abs(result.var_x - 1.0))), float(np.max(np.abs(result.var_y - 1.0)))
    )
    return worst <= 1e-12, f"max |var - 1| = {worst!r}"


def _random_pair(rng: np.random.Generator) -> SidebandResponsePair:
    config = _random_config(rng)
    detuning = rng.uniform(-0.5, 0.5) * config.fsr2
    omega = rng.uniform(0.0, 0.01) * config.fsr2
    return sideband_pair(config, detuning, omega)


def check_uncertainty_bound() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 5)
    worst = math.inf
    for _ in range(10_000):
        pair = _random_pair(rng)
        s = rng.uniform(-1.0, 1.0)
        state = InputGaussianState(math.exp(-2.0 * s), math.exp(2.0 * s))
        worst = min(worst, variance_x(pair, state) * variance_y(pair, state))
    return worst >= 1.0 - 1e-9, f"min var_x*var_y = {worst!r}"


def check_covariance_oracle() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 6)
    worst = 0.0
    for _ in range(1000):
        pair = _random_pair(rng)
        state = InputGaussianState.unchecked(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0))
        angle = rng.uniform(-math.pi, math.pi)
        direct = (
            variance_x(pair, state),
            variance_y(pair, state),
            variance_at_angle(pair, state, angle),
        )
        oracle = (
            variance_via_covariance(pair, state, 0.0),
            variance_via_covariance(pair, state, math.pi / 2.0),
            variance_via_covariance(pair, state, angle),
        )
        worst = max(worst, max(abs(d - o) for d, o in zip(direct, oracle)))
    return worst <= 1e-10, f"max |direct - covariance oracle| = {worst!r}"


def check_beam_splitter_reduction() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 7)
    from .cavity import PolarResponse

    worst = 0.0
    for _ in range(500):
        rho = rng.uniform(0.0, 1.0)
        state = InputGaussianState.unchecked(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0))
        pair = SidebandResponsePair(
            plus=PolarResponse(rho, 0.0),
            minus=PolarResponse(rho, 0.0),
            omega=0.0,
            detuning=0.0,
        )
        expected_x = rho * rho * state.var_x + (1.0 - rho * rho)
        expected_y = rho * rho * state.var_y + (1.0 - rho * rho)
        worst = max(
            worst,
            abs(variance_x(pair, state) - expected_x),
            abs(variance_y(pair, state) - expected_y),
        )
    return worst <= 1e-12, f"max beam-splitter deviation = {worst!r}"


def check_mirror_symmetry() -> tuple[bool, str]:
    run = preset("figS2").build()
    result = frequency_scan(run.config, run.input_state, run.omega, run.scan)
    worst = max(
        float(np.max(np.abs(result.var_x - result.var_x[::-1]))),
        float(np.max(np.abs(result.var_y - result.var_y[::-1]))),
        float(np.max(np.abs(result.intensity - result.intensity[::-1]))),
    )
    return worst <= 1e-10, f"max |f(detuning) - f(-detuning)| = {worst!r}"


def check_scan_equivalence() -> tuple[bool, str]:
    run = preset("figS2").build()
    freq = frequency_scan(run.config, run.input_state, run.omega, run.scan)
    wavelength = 1.064e-6
    span_m = run.scan.span / run.config.fsr2 * wavelength / 2.0
    mirror_spec = ScanSpec(
        mode=ScanMode.MIRROR,
        span=span_m,
        points=run.scan.points,
        gain_ratio=2.0,
        wavelength=wavelength,
    )
    mirr = mirror_scan(run.config, run.input_state, run.omega, mirror_spec)
    scale = max(1.0, float(np.max(np.abs(freq.detuning))))
    worst = max(
        float(np.max(np.abs(freq.var_x - mirr.var_x))),
        float(np.max(np.abs(freq.var_y - mirr.var_y))),
        float(np.max(np.abs(freq.intensity - mirr.intensity))),
        float(np.max(np.abs(freq.detuning - mirr.detuning))) / scale,
    )
    return worst <= 1e-10, f"max record difference = {worst!r}"


def check_determinism() -> tuple[bool, str]:
    run = preset("figS2").build()
    first = render_result(
        frequency_scan(run.config, run.input_state, run.omega, run.scan), "csv"
    )
    second = render_result(
        frequency_scan(run.config, run.input_state, run.omega, run.scan), "csv"
    )
    return first == second, f"{len(first)} bytes, identical = {first == second}"


def check_config_round_trip() -> tuple[bool, str]:
    failures = []
    for name in PRESET_NAMES:
        rc = preset(name)
        if load_config(serialize_config(rc)) != rc:
            failures.append(name)
    return not failures, f"failed presets: {failures}" if failures else "all presets round-trip"


def check_preset_integrity() -> tuple[bool, str]:
    failures = []
    for name in PRESET_NAMES:
        try:
            preset(name).build()
        except Exception as exc:  # noqa: BLE001 - report, don't crash the suite
            failures.append(f"{name}: {exc}")
    return not failures, f"failures: {failures}" if failures else "all presets build"


CHECKS: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("passivity", check_passivity),
    ("lossless-unitarity", check_lossless_unitarity),
    ("conjugate-symmetry", check_conjugate_symmetry),
    ("periodicity", check_periodicity),
    ("decoupling", check_decoupling),
    ("vacuum-preservation", check_vacuum_preservation),
    ("uncertainty-bound", check_uncertainty_bound),
    ("covariance-oracle", check_covariance_oracle),
    ("beam-splitter-reduction", check_beam_splitter_reduction),
    ("detuning-mirror-symmetry", check_mirror_symmetry),
    ("scan-equivalence", check_scan_equivalence),
    ("determinism", check_determinism),
    ("config-round-trip", check_config_round_trip),
    ("preset-integrity", check_preset_integrity),
)


def run_validation(stream=None) -> int:
    """Run every check, print one PASS/FAIL line each, return the failure count."""
    failures = 0
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except Exception as exc:  # noqa: BLE001 - a crashing check is a failing check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        if not passed:
            failures += 1
        line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
        print(line, file=stream)
    total = len(CHECKS)
    print(f"{total - failures}/{total} checks passed", file=stream)
    return failures
