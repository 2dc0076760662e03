"""Complex reflection response of a single cavity and of two coupled cavities.

Two standing-wave cavities share a partially reflective middle mirror:

    M0 ]----- cavity 1 -----[ M1 ]----- cavity 2 -----[ M2   <-- input

The field enters through M2.  The back cavity (M0/M1) acts on the input
cavity as an effective frequency-dependent mirror, which is what produces
the induced-transparency window and, at strong coupling, mode splitting.

All reflectivities are amplitude quantities; configs built from power
values take their square root at the boundary (see :mod:`critsim.config`).
Round-trip phases are measured relative to co-resonance, so one free
spectral range of detuning is exactly 2*pi.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateCavityError, ValidationError

SPEED_OF_LIGHT = 299792458.0  # m/s

#: Denominator magnitudes below this are treated as degenerate.
_DEGENERATE_EPS = 1e-15

ComplexAmplitude = complex


class Variant(enum.Enum):
    """Back-cavity reflection model.

    SYMMETRIC_NUMERATOR (default) uses (r1 - r0*t1*e^{i*phi1}) in the
    numerator, which satisfies the decoupling limit: a perfect middle
    mirror (r1 = 1) gives unit reflection regardless of the back cavity.
    AS_PRINTED keeps the r0-free numerator (r1 - t1*e^{i*phi1}); it is
    retained for literal reproduction and is not passive for r0 < 1.
    """

    AS_PRINTED = "as_printed"
    SYMMETRIC_NUMERATOR = "symmetric"


class PhasePair(NamedTuple):
    """Round-trip phases of the back cavity (phi1) and input cavity (phi2), radians."""

    phi1: float
    phi2: float


class PolarResponse(NamedTuple):
    """Reflection magnitude and principal-branch phase at one optical frequency."""

    rho: float
    theta: float


@dataclass(frozen=True)
class CoupledCavityConfig:
    """Mirrors, losses and geometry of the two-cavity system.

    Parameters
    ----------
    r0, r1, r2 : float
        Amplitude reflectivities of the end, middle and input mirrors,
        each in [0, 1].
    t1, t2 : float
        Round-trip amplitude transmission of each cavity in (0, 1];
        1 means lossless.
    length1, length2 : float
        Cavity lengths in meters, strictly positive.
    n1, n2 : float
        Refractive indices, >= 1.
    variant : Variant
        Back-cavity numerator convention, see :class:`Variant`.
    single_cavity : bool
        When True the back cavity is blocked and the response is that of
        the input cavity alone (input mirror r2, back mirror r1).
    phi1_offset, phi2_offset : float
        Static round-trip phase offsets in radians (cavity mis-tuning),
        added on top of the scanned phase.  Default 0 (co-resonant).
    """

    r0: float
    r1: float
    r2: float
    t1: float = 1.0
    t2: float = 1.0
    length1: float = 0.0295
    length2: float = 0.0295
    n1: float = 1.0
    n2: float = 1.0
    variant: Variant = Variant.SYMMETRIC_NUMERATOR
    single_cavity: bool = False
    phi1_offset: float = 0.0
    phi2_offset: float = 0.0

    def __post_init__(self) -> None:
        for name in ("r0", "r1", "r2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must be in [0, 1], got {v}")
        for name in ("t1", "t2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 < v <= 1.0):
                raise ValidationError(f"{name} must be in (0, 1], got {v}")
        for name in ("length1", "length2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValidationError(f"{name} must be positive, got {v}")
        for name in ("n1", "n2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 1.0):
                raise ValidationError(f"{name} must be >= 1, got {v}")
        for name in ("phi1_offset", "phi2_offset"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")

    @property
    def fsr1(self) -> float:
        """Free spectral range of the back cavity, Hz."""
        return SPEED_OF_LIGHT / (2.0 * self.length1 * self.n1)

    @property
    def fsr2(self) -> float:
        """Free spectral range of the input cavity, Hz (the detuning reference)."""
        return SPEED_OF_LIGHT / (2.0 * self.length2 * self.n2)


def round_trip_phase(config: CoupledCavityConfig, detuning: float) -> PhasePair:
    """Round-trip phases at a laser detuning (Hz) from co-resonance.

    One FSR of detuning adds exactly 2*pi to the corresponding phase.
    Static config offsets are added on top.
    """
    if not math.isfinite(detuning):
        raise ValidationError(f"detuning must be finite, got {detuning}")
    return PhasePair(
        2.0 * math.pi * detuning / config.fsr1 + config.phi1_offset,
        2.0 * math.pi * detuning / config.fsr2 + config.phi2_offset,
    )


def _moebius(r_front: float, back: complex) -> complex:
    """(r_front - back) / (1 - r_front*back), guarding the degenerate denominator."""
    den = 1.0 - r_front * back
    if abs(den) < _DEGENERATE_EPS:
        raise DegenerateCavityError(
            f"reflection denominator magnitude {abs(den):.3e} below {_DEGENERATE_EPS}"
        )
    return (r_front - back) / den


def inner_reflectivity(config: CoupledCavityConfig, phi1: float) -> ComplexAmplitude:
    """Complex reflectivity of the back cavity seen from the input cavity."""
    phase = config.t1 * cmath.exp(1j * phi1)
    if config.variant is Variant.SYMMETRIC_NUMERATOR:
        num = config.r1 - config.r0 * phase
    else:
        num = config.r1 - phase
    den = 1.0 - config.r1 * config.r0 * phase
    if abs(den) < _DEGENERATE_EPS:
        raise DegenerateCavityError(
            f"reflection denominator magnitude {abs(den):.3e} below {_DEGENERATE_EPS}"
        )
    return num / den


def coupled_reflectivity(
    config: CoupledCavityConfig, phases: PhasePair
) -> ComplexAmplitude:
    """Complex reflectivity of the coupled system at the input mirror.

    The back cavity enters as the effective back mirror of the input
    cavity; with ``config.single_cavity`` the back cavity is bypassed and
    the middle mirror alone closes the input cavity.
    """
    if config.single_cavity:
        back = config.r1
    else:
        back = inner_reflectivity(config, phases.phi1)
    return _moebius(config.r2, back * config.t2 * cmath.exp(1j * phases.phi2))


def single_cavity_reflectivity(
    r_in: float, r_back: float, t_rt: float, phi: float
) -> ComplexAmplitude:
    """Reflectivity of a two-mirror cavity (input mirror r_in, back mirror r_back)."""
    for name, v, lo in (("r_in", r_in, 0.0), ("r_back", r_back, 0.0)):
        if not (math.isfinite(v) and lo <= v <= 1.0):
            raise ValidationError(f"{name} must be in [0, 1], got {v}")
    if not (math.isfinite(t_rt) and 0.0 < t_rt <= 1.0):
        raise ValidationError(f"t_rt must be in (0, 1], got {t_rt}")
    return _moebius(r_in, r_back * t_rt * cmath.exp(1j * phi))


def to_polar(z: ComplexAmplitude) -> PolarResponse:
    """Magnitude and principal argument; the zero amplitude gets theta = 0."""
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"amplitude must be finite, got {z}")
    rho, theta = cmath.polar(z)
    if theta == -math.pi:  # keep the principal branch half-open: (-pi, pi]
        theta = math.pi
    return PolarResponse(rho, theta)
