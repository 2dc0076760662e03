"""Detuning grids, classical intensity sweeps, and quantum noise spectra.

The canonical x-axis is a co-scan of both cavities (one laser detuning
moves both round-trip phases); the two-mirror length-scanning scheme is
supported as well and reduces to the frequency scan when the back mirror
moves with twice the gain of the middle mirror and the cavity lengths
match.  Records are always emitted in ascending order of (equivalent)
detuning.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

import numpy as np

from . import _kernels
from .cavity import CoupledCavityConfig, PhasePair, Variant
from .errors import ValidationError
from .quantum import DetectionModel, InputGaussianState

HALF_PI = 0.5 * math.pi


class ScanMode(enum.Enum):
    FREQUENCY = "frequency"
    MIRROR = "mirror"


@dataclass(frozen=True)
class ScanSpec:
    """Grid specification.

    ``span`` is the total scanned range: Hz of laser detuning for
    FREQUENCY mode, meters of middle-mirror displacement for MIRROR mode.
    The grid is uniform, symmetric about zero, and contains 0 exactly when
    ``points`` is odd.  ``gain_ratio`` is the back-to-middle mirror
    displacement ratio and ``wavelength`` the optical wavelength; both are
    used by MIRROR mode only.
    """

    mode: ScanMode = ScanMode.FREQUENCY
    span: float = 0.0
    points: int = 2001
    gain_ratio: float = 2.0
    wavelength: float = 1.064e-6

    def __post_init__(self) -> None:
        if self.points < 3:
            raise ValidationError(f"points must be >= 3, got {self.points}")
        if not (math.isfinite(self.span) and self.span >= 0.0):
            raise ValidationError(f"span must be >= 0, got {self.span}")
        if not math.isfinite(self.gain_ratio):
            raise ValidationError("gain_ratio must be finite")
        if not (math.isfinite(self.wavelength) and self.wavelength > 0.0):
            raise ValidationError(f"wavelength must be positive, got {self.wavelength}")

    def grid(self) -> np.ndarray:
        """Symmetric uniform grid; exact zero at the center for odd points."""
        step = self.span / (self.points - 1)
        return (np.arange(self.points) - (self.points - 1) / 2.0) * step


class SweepRecord(NamedTuple):
    detuning: float
    phi1: float
    phi2: float
    rho_plus: float
    theta_plus: float
    rho_minus: float
    theta_minus: float
    intensity: float
    var_x: float
    var_y: float


@dataclass
class SweepResult:
    """Columnar sweep output plus an echo of everything that produced it."""

    detuning: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    rho_plus: np.ndarray
    theta_plus: np.ndarray
    rho_minus: np.ndarray
    theta_minus: np.ndarray
    intensity: np.ndarray
    var_x: np.ndarray
    var_y: np.ndarray
    config: CoupledCavityConfig
    input_state: InputGaussianState
    omega: float
    scan: ScanSpec
    kind: str = "frequency"
    detection: Optional[DetectionModel] = None

    @property
    def detuning_fsr(self) -> np.ndarray:
        """Detuning as a fraction of the input-cavity FSR."""
        return self.detuning / self.config.fsr2

    @property
    def records(self) -> list[SweepRecord]:
        return list(self)

    def __len__(self) -> int:
        return self.detuning.shape[0]

    def __iter__(self) -> Iterator[SweepRecord]:
        cols = (
            self.detuning,
            self.phi1,
            self.phi2,
            self.rho_plus,
            self.theta_plus,
            self.rho_minus,
            self.theta_minus,
            self.intensity,
            self.var_x,
            self.var_y,
        )
        for row in zip(*cols):
            yield SweepRecord(*(float(v) for v in row))


def displacement_to_phase(
    d0: float, d1: float, wavelength: float, n1: float = 1.0, n2: float = 1.0
) -> PhasePair:
    """Round-trip phase increments for mirror displacements along the beam axis.

    ``d0`` moves the end mirror, ``d1`` the middle mirror; positive
    displacement points from the end mirror toward the input mirror.
    """
    if not (math.isfinite(wavelength) and wavelength > 0.0):
        raise ValidationError(f"wavelength must be positive, got {wavelength}")
    k2 = 4.0 * math.pi / wavelength
    return PhasePair(k2 * (d1 - d0) * n1, -k2 * d1 * n2)


def _kernel_args(config: CoupledCavityConfig) -> tuple:
    return (
        config.r0,
        config.r1,
        config.r2,
        config.t1,
        config.t2,
        config.variant is Variant.SYMMETRIC_NUMERATOR,
        config.single_cavity,
    )


def _evaluate(
    config: CoupledCavityConfig,
    input_state: InputGaussianState,
    omega: float,
    detuning: np.ndarray,
    phi1: np.ndarray,
    phi2: np.ndarray,
    scan: ScanSpec,
    kind: str,
    detection: Optional[DetectionModel],
) -> SweepResult:
    """Shared pipeline: carrier intensity plus sideband variances per grid point."""
    args = _kernel_args(config)
    carrier = _kernels.reflection_grid(phi1, phi2, *args)
    dphi1 = 2.0 * math.pi * omega / config.fsr1
    dphi2 = 2.0 * math.pi * omega / config.fsr2
    r_plus = _kernels.reflection_grid(phi1 + dphi1, phi2 + dphi2, *args)
    r_minus = _kernels.reflection_grid(phi1 - dphi1, phi2 - dphi2, *args)

    rho_plus = np.abs(r_plus)
    theta_plus = np.angle(r_plus)
    rho_minus = np.abs(r_minus)
    theta_minus = np.angle(r_minus)
    intensity = np.abs(carrier) ** 2

    lo = detection.lo_phase if detection is not None else 0.0
    var_x = _kernels.variance_grid(
        rho_plus, theta_plus, rho_minus, theta_minus,
        input_state.var_x, input_state.var_y, lo,
    )
    var_y = _kernels.variance_grid(
        rho_plus, theta_plus, rho_minus, theta_minus,
        input_state.var_x, input_state.var_y, lo + HALF_PI,
    )
    if detection is not None and detection.eta != 1.0:
        var_x = detection.eta * var_x + (1.0 - detection.eta)
        var_y = detection.eta * var_y + (1.0 - detection.eta)

    order = np.argsort(detuning, kind="stable")
    if not np.all(order[:-1] < order[1:]):
        (detuning, phi1, phi2, rho_plus, theta_plus, rho_minus, theta_minus,
         intensity, var_x, var_y) = (
            arr[order]
            for arr in (detuning, phi1, phi2, rho_plus, theta_plus, rho_minus,
                        theta_minus, intensity, var_x, var_y)
        )
    return SweepResult(
        detuning=detuning,
        phi1=phi1,
        phi2=phi2,
        rho_plus=rho_plus,
        theta_plus=theta_plus,
        rho_minus=rho_minus,
        theta_minus=theta_minus,
        intensity=intensity,
        var_x=var_x,
        var_y=var_y,
        config=config,
        input_state=input_state,
        omega=omega,
        scan=scan,
        kind=kind,
        detection=detection,
    )


def scan_detunings(
    config: CoupledCavityConfig,
    input_state: InputGaussianState,
    omega: float,
    detunings: np.ndarray,
    detection: Optional[DetectionModel] = None,
    scan: Optional[ScanSpec] = None,
    kind: str = "frequency",
) -> SweepResult:
    """Co-scan evaluation at an explicit detuning grid (sorted ascending), Hz."""
    if not (math.isfinite(omega) and omega >= 0.0):
        raise ValidationError(f"omega must be >= 0, got {omega}")
    detunings = np.ascontiguousarray(detunings, dtype=np.float64)
    if not np.all(np.isfinite(detunings)):
        raise ValidationError("detunings must be finite")
    detunings = np.sort(detunings)
    phi1 = 2.0 * math.pi * detunings / config.fsr1 + config.phi1_offset
    phi2 = 2.0 * math.pi * detunings / config.fsr2 + config.phi2_offset
    if scan is None:
        span = float(detunings[-1] - detunings[0]) if len(detunings) > 1 else 0.0
        scan = ScanSpec(mode=ScanMode.FREQUENCY, span=span, points=max(3, len(detunings)))
    return _evaluate(config, input_state, omega, detunings, phi1, phi2, scan, kind, detection)


def frequency_scan(
    config: CoupledCavityConfig,
    input_state: InputGaussianState,
    omega: float,
    spec: ScanSpec,
    detection: Optional[DetectionModel] = None,
) -> SweepResult:
    """Laser-frequency co-scan over the grid defined by ``spec``."""
    if spec.mode is not ScanMode.FREQUENCY:
        raise ValidationError("frequency_scan requires a FREQUENCY-mode ScanSpec")
    return scan_detunings(config, input_state, omega, spec.grid(), detection, spec)


def mirror_scan(
    config: CoupledCavityConfig,
    input_state: InputGaussianState,
    omega: float,
    spec: ScanSpec,
    detection: Optional[DetectionModel] = None,
) -> SweepResult:
    """Two-mirror length scan: middle mirror over the grid, end mirror geared to it.

    The recorded detuning is the equivalent laser detuning implied by the
    input-cavity phase.  With ``gain_ratio`` = 2 and matched cavity
    lengths this reproduces :func:`frequency_scan` record-by-record.
    """
    if spec.mode is not ScanMode.MIRROR:
        raise ValidationError("mirror_scan requires a MIRROR-mode ScanSpec")
    if not (math.isfinite(omega) and omega >= 0.0):
        raise ValidationError(f"omega must be >= 0, got {omega}")
    d1 = spec.grid()
    d0 = spec.gain_ratio * d1
    k2 = 4.0 * math.pi / spec.wavelength
    dphi1 = k2 * (d1 - d0) * config.n1
    dphi2 = -k2 * d1 * config.n2
    phi1 = dphi1 + config.phi1_offset
    phi2 = dphi2 + config.phi2_offset
    detuning = dphi2 / (2.0 * math.pi) * config.fsr2
    return _evaluate(
        config, input_state, omega, detuning, phi1, phi2, spec, "mirror", detection
    )


def intensity_scan(config: CoupledCavityConfig, spec: ScanSpec) -> SweepResult:
    """Classical carrier sweep: |R|^2 across the grid, vacuum variance columns."""
    vacuum = InputGaussianState.vacuum()
    if spec.mode is ScanMode.MIRROR:
        result = mirror_scan(config, vacuum, 0.0, spec)
    else:
        result = frequency_scan(config, vacuum, 0.0, spec)
    result.kind = "intensity"
    return result
