"""Quadrature-noise propagation through the two-sideband reflection channel.

A reflected quantum field at analysis frequency Omega mixes the upper and
lower sidebands of the carrier: each sideband is scaled by the complex
reflection coefficient at its own optical frequency, and the reflection
deficit couples in vacuum.  This module computes the resulting output
quadrature variances for Gaussian inputs (vacuum normalized to 1), at the
canonical amplitude/phase quadratures or at an arbitrary homodyne angle,
optionally degraded by finite detection efficiency.

Only second moments are tracked; inputs are zero-mean with uncorrelated
amplitude/phase quadratures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .cavity import (
    CoupledCavityConfig,
    PolarResponse,
    coupled_reflectivity,
    round_trip_phase,
    to_polar,
)
from .errors import ValidationError

_RHO_TOL = 1e-12
_UNCERTAINTY_TOL = 1e-9


@dataclass(frozen=True)
class InputGaussianState:
    """Quadrature variances of the injected field, in shot-noise units.

    ``var_x`` is the amplitude quadrature, ``var_y`` the phase quadrature;
    vacuum is (1, 1).  The two variances are independent so that impure
    measured states (squeezing weaker than antisqueezing) can be
    represented; the product must still satisfy the uncertainty bound.
    """

    var_x: float
    var_y: float

    def __post_init__(self) -> None:
        for name in ("var_x", "var_y"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValidationError(f"{name} must be positive, got {v}")
        if self.var_x * self.var_y < 1.0 - _UNCERTAINTY_TOL:
            raise ValidationError(
                f"uncertainty violation: var_x*var_y = {self.var_x * self.var_y} < 1"
            )

    @classmethod
    def vacuum(cls) -> "InputGaussianState":
        return cls(1.0, 1.0)

    @classmethod
    def unchecked(cls, var_x: float, var_y: float) -> "InputGaussianState":
        """Bypass the uncertainty check (optimizer trial points only)."""
        state = object.__new__(cls)
        object.__setattr__(state, "var_x", float(var_x))
        object.__setattr__(state, "var_y", float(var_y))
        return state


def input_from_squeeze_factor(s: float) -> InputGaussianState:
    """Pure squeezed vacuum: variances (e^{-2s}, e^{+2s}); s = 0 is vacuum."""
    if not math.isfinite(s):
        raise ValidationError(f"squeeze factor must be finite, got {s}")
    return InputGaussianState(math.exp(-2.0 * s), math.exp(2.0 * s))


def input_from_db(squeeze_db: float, antisqueeze_db: float) -> InputGaussianState:
    """Measured squeezing levels in dB below / above shot noise (both >= 0)."""
    if not (math.isfinite(squeeze_db) and squeeze_db >= 0.0):
        raise ValidationError(f"squeeze_db must be >= 0, got {squeeze_db}")
    if not (math.isfinite(antisqueeze_db) and antisqueeze_db >= 0.0):
        raise ValidationError(f"antisqueeze_db must be >= 0, got {antisqueeze_db}")
    return InputGaussianState(
        10.0 ** (-squeeze_db / 10.0), 10.0 ** (antisqueeze_db / 10.0)
    )


def variance_to_db(v: float) -> float:
    """Shot-noise-relative variance in decibels; inverse of the dB constructors."""
    if not (math.isfinite(v) and v > 0.0):
        raise ValidationError(f"variance must be positive, got {v}")
    return 10.0 * math.log10(v)


@dataclass(frozen=True)
class SidebandResponsePair:
    """Reflection magnitude/phase at the two sidebands of one carrier detuning."""

    plus: PolarResponse
    minus: PolarResponse
    omega: float
    detuning: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega) and self.omega >= 0.0):
            raise ValidationError(f"omega must be >= 0, got {self.omega}")
        for name, resp in (("plus", self.plus), ("minus", self.minus)):
            if not (0.0 <= resp.rho <= 1.0 + _RHO_TOL):
                raise ValidationError(
                    f"{name} sideband magnitude {resp.rho} outside [0, 1]"
                )


@dataclass(frozen=True)
class DetectionModel:
    """Homodyne efficiency and local-oscillator phase."""

    eta: float = 1.0
    lo_phase: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eta) and 0.0 < self.eta <= 1.0):
            raise ValidationError(f"eta must be in (0, 1], got {self.eta}")
        if not math.isfinite(self.lo_phase):
            raise ValidationError("lo_phase must be finite")

    @classmethod
    def from_visibility(cls, visibility: float, lo_phase: float = 0.0) -> "DetectionModel":
        """eta = visibility**2 (fringe-visibility model of mode mismatch)."""
        if not (math.isfinite(visibility) and 0.0 < visibility <= 1.0):
            raise ValidationError(f"visibility must be in (0, 1], got {visibility}")
        return cls(visibility * visibility, lo_phase)


def sideband_pair(
    config: CoupledCavityConfig, detuning: float, omega: float
) -> SidebandResponsePair:
    """Polar reflection response at carrier detuning +/- omega (co-scanned phases)."""
    if not (math.isfinite(omega) and omega >= 0.0):
        raise ValidationError(f"omega must be >= 0, got {omega}")
    plus = to_polar(coupled_reflectivity(config, round_trip_phase(config, detuning + omega)))
    minus = to_polar(coupled_reflectivity(config, round_trip_phase(config, detuning - omega)))
    return SidebandResponsePair(plus=plus, minus=minus, omega=omega, detuning=detuning)


def _vacuum_couplings(pair: SidebandResponsePair) -> tuple[float, float]:
    # magnitudes marginally above 1 are clamped before the square root
    u = math.sqrt(max(0.0, 1.0 - pair.plus.rho**2))
    v = math.sqrt(max(0.0, 1.0 - pair.minus.rho**2))
    return u, v


def variance_x(pair: SidebandResponsePair, state: InputGaussianState) -> float:
    """Amplitude-quadrature variance of the reflected field, shot-noise units."""
    a = pair.plus.rho * cmath.exp(1j * pair.plus.theta)
    b = pair.minus.rho * cmath.exp(-1j * pair.minus.theta)
    u, v = _vacuum_couplings(pair)
    return (
        0.25 * abs(a + b) ** 2 * state.var_x
        + 0.25 * abs(a - b) ** 2 * state.var_y
        + 0.25 * (u + v) ** 2
        + 0.25 * (u - v) ** 2
    )


def variance_y(pair: SidebandResponsePair, state: InputGaussianState) -> float:
    """Phase-quadrature variance of the reflected field, shot-noise units."""
    a = pair.plus.rho * cmath.exp(1j * pair.plus.theta)
    b = pair.minus.rho * cmath.exp(-1j * pair.minus.theta)
    u, v = _vacuum_couplings(pair)
    return (
        0.25 * abs(-a + b) ** 2 * state.var_x
        + 0.25 * abs(a + b) ** 2 * state.var_y
        + 0.25 * (-u + v) ** 2
        + 0.25 * (u + v) ** 2
    )


def variance_at_angle(
    pair: SidebandResponsePair, state: InputGaussianState, lo_phase: float
) -> float:
    """Variance of the rotated quadrature X*cos(lo_phase) + Y*sin(lo_phase).

    lo_phase = 0 reproduces :func:`variance_x`, pi/2 reproduces
    :func:`variance_y`.
    """
    if not math.isfinite(lo_phase):
        raise ValidationError("lo_phase must be finite")
    c = math.cos(lo_phase)
    s = math.sin(lo_phase)
    a = pair.plus.rho * cmath.exp(1j * pair.plus.theta)
    b = pair.minus.rho * cmath.exp(-1j * pair.minus.theta)
    sig_sum = 0.5 * (a + b)
    sig_dif = 0.5 * (a - b)
    u, v = _vacuum_couplings(pair)
    vac_sum = 0.5 * (u + v)
    vac_dif = 0.5 * (u - v)
    cx = c * sig_sum - 1j * (s * sig_dif)
    cy = 1j * (c * sig_dif) + s * sig_sum
    dx = c * vac_sum - 1j * (s * vac_dif)
    dy = 1j * (c * vac_dif) + s * vac_sum
    return (
        abs(cx) ** 2 * state.var_x
        + abs(cy) ** 2 * state.var_y
        + abs(dx) ** 2
        + abs(dy) ** 2
    )


def apply_detection(v: float, det: DetectionModel) -> float:
    """Mix a measured variance with vacuum per the detection efficiency."""
    return det.eta * v + (1.0 - det.eta)
