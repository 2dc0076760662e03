"""Parameter estimation from observed spectra by derivative-free least squares.

The objective is the RMS difference between an observed spectrum and a
model sweep evaluated on the observed detuning grid, in either linear or
decibel units.  Minimization is a Nelder-Mead simplex run in a
transformed space: each free parameter is mapped from its (lo, hi) bounds
onto the real line with a logit, which keeps every trial point strictly
inside bounds without clamping and avoids boundary stalling.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .cavity import CoupledCavityConfig
from .errors import ValidationError
from .quantum import DetectionModel, InputGaussianState
from .sweep import scan_detunings

PARAM_NAMES = (
    "r0_sq",
    "r1_sq",
    "r2_sq",
    "t1",
    "t2",
    "var_x_in",
    "var_y_in",
    "eta",
    "detuning_offset",
    "scale",
)

DEFAULT_BOUNDS: dict[str, tuple[float, float]] = {
    "r0_sq": (0.0, 1.0),
    "r1_sq": (0.0, 1.0),
    "r2_sq": (0.0, 1.0),
    "t1": (0.0, 1.0),
    "t2": (0.0, 1.0),
    "var_x_in": (1e-3, 1e3),
    "var_y_in": (1e-3, 1e3),
    "eta": (0.0, 1.0),
    "detuning_offset": (-1e8, 1e8),
    "scale": (1e-6, 1e6),
}

#: Initial simplex displacement per coordinate, in transformed units.
_SIMPLEX_STEP = 0.25
_DIAMETER_TOL = 1e-10
_DB_FLOOR = 1e-300


class ObjectiveDomain(enum.Enum):
    LINEAR = "linear"
    DECIBEL = "decibel"


@dataclass(frozen=True)
class ObservedSpectrum:
    """Observed data on an ascending detuning grid; any subset of channels."""

    detuning: np.ndarray
    var_x: Optional[np.ndarray] = None
    var_y: Optional[np.ndarray] = None
    intensity: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        x = np.asarray(self.detuning, dtype=np.float64)
        object.__setattr__(self, "detuning", x)
        if x.ndim != 1 or x.shape[0] < 1:
            raise ValidationError("observed detuning must be a non-empty 1-D array")
        if np.any(np.diff(x) <= 0.0):
            raise ValidationError("observed detuning must be strictly increasing")
        present = 0
        for name in ("var_x", "var_y", "intensity"):
            col = getattr(self, name)
            if col is None:
                continue
            col = np.asarray(col, dtype=np.float64)
            object.__setattr__(self, name, col)
            if col.shape != x.shape:
                raise ValidationError(f"observed {name} must match the detuning grid length")
            present += 1
        if present == 0:
            raise ValidationError("observed data must include var_x, var_y, or intensity")

    @property
    def channels(self) -> tuple[str, ...]:
        return tuple(
            name for name in ("var_x", "var_y", "intensity") if getattr(self, name) is not None
        )

    @classmethod
    def from_columns(
        cls, columns: Mapping[str, np.ndarray], channels: Optional[Sequence[str]] = None
    ) -> "ObservedSpectrum":
        """Build from CSV column arrays (``detuning_hz`` plus data columns)."""
        if "detuning_hz" not in columns:
            raise ValidationError("observed data needs a detuning_hz column")
        wanted = tuple(channels) if channels else ("var_x", "var_y", "intensity")
        picked = {}
        for name in wanted:
            if name not in ("var_x", "var_y", "intensity"):
                raise ValidationError(f"unknown fit channel {name!r}")
            if name in columns:
                picked[name] = columns[name]
            elif channels:
                raise ValidationError(f"observed data has no {name!r} column")
        return cls(detuning=columns["detuning_hz"], **picked)


@dataclass(frozen=True)
class FitProblem:
    observed: ObservedSpectrum
    config: CoupledCavityConfig
    input_state: InputGaussianState
    omega: float
    free: Mapping[str, tuple[float, float]]
    detection: Optional[DetectionModel] = None
    domain: ObjectiveDomain = ObjectiveDomain.DECIBEL

    def __post_init__(self) -> None:
        if not self.free:
            raise ValidationError("fit requires at least one free parameter")
        bounds: dict[str, tuple[float, float]] = {}
        for name, bound in dict(self.free).items():
            if name not in PARAM_NAMES:
                raise ValidationError(
                    f"unknown fit parameter {name!r} (expected one of {PARAM_NAMES})"
                )
            lo, hi = DEFAULT_BOUNDS[name] if bound is None else bound
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValidationError(f"bounds for {name} must satisfy lo < hi, got ({lo}, {hi})")
            bounds[name] = (float(lo), float(hi))
        object.__setattr__(self, "free", bounds)


@dataclass(frozen=True)
class FitResult:
    params: dict[str, float]
    residual_rms: float
    n_evals: int
    converged: bool
    history: tuple[float, ...]


def _apply_params(problem: FitProblem, params: Mapping[str, float]):
    config_updates: dict[str, float] = {}
    var_x = problem.input_state.var_x
    var_y = problem.input_state.var_y
    detection = problem.detection
    offset = 0.0
    scale = 1.0
    for name, value in params.items():
        if name == "r0_sq":
            config_updates["r0"] = math.sqrt(value)
        elif name == "r1_sq":
            config_updates["r1"] = math.sqrt(value)
        elif name == "r2_sq":
            config_updates["r2"] = math.sqrt(value)
        elif name in ("t1", "t2"):
            config_updates[name] = value
        elif name == "var_x_in":
            var_x = value
        elif name == "var_y_in":
            var_y = value
        elif name == "eta":
            lo_phase = detection.lo_phase if detection is not None else 0.0
            detection = DetectionModel(eta=value, lo_phase=lo_phase)
        elif name == "detuning_offset":
            offset = value
        elif name == "scale":
            scale = value
        else:
            raise ValidationError(f"unknown fit parameter {name!r}")
    config = (
        dataclasses.replace(problem.config, **config_updates)
        if config_updates
        else problem.config
    )
    input_state = InputGaussianState.unchecked(var_x, var_y)
    return config, input_state, detection, offset, scale


def residual(params: Mapping[str, float], problem: FitProblem) -> float:
    """RMS misfit of the model under ``params`` against the observed channels."""
    config, input_state, detection, offset, scale = _apply_params(problem, params)
    sweep = scan_detunings(
        config, input_state, problem.omega, problem.observed.detuning - offset, detection
    )
    squares: list[np.ndarray] = []
    for name in problem.observed.channels:
        data = getattr(problem.observed, name)
        model = getattr(sweep, name if name != "intensity" else "intensity")
        model = scale * model
        if problem.domain is ObjectiveDomain.DECIBEL:
            model = 10.0 * np.log10(np.maximum(model, _DB_FLOOR))
            data = 10.0 * np.log10(np.maximum(data, _DB_FLOOR))
        diff = model - data
        squares.append(diff * diff)
    total = np.concatenate(squares)
    return float(np.sqrt(total.mean()))


def _sigmoid(z: float) -> float:
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def _encode(problem: FitProblem, names: Sequence[str], guess: Mapping[str, float]) -> np.ndarray:
    z = np.empty(len(names))
    for j, name in enumerate(names):
        lo, hi = problem.free[name]
        x = guess[name]
        if not (lo < x < hi):
            raise ValidationError(
                f"initial guess for {name} must lie strictly inside bounds ({lo}, {hi}), got {x}"
            )
        u = (x - lo) / (hi - lo)
        z[j] = math.log(u / (1.0 - u))
    return z


def _decode(problem: FitProblem, names: Sequence[str], z: np.ndarray) -> dict[str, float]:
    out = {}
    for j, name in enumerate(names):
        lo, hi = problem.free[name]
        out[name] = lo + (hi - lo) * _sigmoid(float(z[j]))
    return out


def fit_parameters(
    problem: FitProblem,
    initial: Mapping[str, float],
    max_evals: int = 10_000,
) -> FitResult:
    """Minimize :func:`residual` from ``initial`` (which must sit strictly inside bounds).

    Standard reflect/expand/contract/shrink simplex iteration in the
    transformed space; the best residual is non-increasing and the run is
    deterministic.  Terminates when the relative simplex diameter falls
    below 1e-10 or the evaluation budget is spent.
    """
    if max_evals < 1:
        raise ValidationError(f"max_evals must be >= 1, got {max_evals}")
    names = tuple(problem.free)
    missing = [name for name in names if name not in initial]
    if missing:
        raise ValidationError(f"initial guess missing parameters: {missing}")
    n = len(names)
    evals = 0

    def objective(z: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        return residual(_decode(problem, names, z), problem)

    z0 = _encode(problem, names, initial)
    vertices = [z0.copy()]
    for j in range(n):
        v = z0.copy()
        v[j] += _SIMPLEX_STEP
        vertices.append(v)
    if any(np.allclose(a, b) for i, a in enumerate(vertices) for b in vertices[:i]):
        raise ValidationError("degenerate initial simplex")
    values = [objective(v) for v in vertices]

    history: list[float] = []

    def order() -> None:
        idx = sorted(range(len(values)), key=lambda i: (values[i], i))
        vertices[:] = [vertices[i] for i in idx]
        values[:] = [values[i] for i in idx]

    def diameter() -> float:
        best = vertices[0]
        denom = np.maximum(1.0, np.abs(best))
        return max(float(np.max(np.abs(v - best) / denom)) for v in vertices[1:])

    order()
    history.append(values[0])
    converged = diameter() < _DIAMETER_TOL
    while not converged and evals < max_evals:
        centroid = np.mean(vertices[:-1], axis=0)
        worst = vertices[-1]
        reflected = centroid + (centroid - worst)
        f_reflected = objective(reflected)
        if f_reflected < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_expanded = objective(expanded) if evals < max_evals else math.inf
            if f_expanded < f_reflected:
                vertices[-1], values[-1] = expanded, f_expanded
            else:
                vertices[-1], values[-1] = reflected, f_reflected
        elif f_reflected < values[-2]:
            vertices[-1], values[-1] = reflected, f_reflected
        else:
            if f_reflected < values[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
                f_contracted = objective(contracted) if evals < max_evals else math.inf
                accept = f_contracted <= f_reflected
            else:
                contracted = centroid - 0.5 * (centroid - worst)
                f_contracted = objective(contracted) if evals < max_evals else math.inf
                accept = f_contracted < values[-1]
            if accept:
                vertices[-1], values[-1] = contracted, f_contracted
            else:
                best = vertices[0]
                for i in range(1, len(vertices)):
                    vertices[i] = best + 0.5 * (vertices[i] - best)
                    if evals >= max_evals:
                        values[i] = math.inf
                    else:
                        values[i] = objective(vertices[i])
        order()
        history.append(min(history[-1], values[0]))
        converged = diameter() < _DIAMETER_TOL

    return FitResult(
        params=_decode(problem, names, vertices[0]),
        residual_rms=values[0],
        n_evals=evals,
        converged=converged,
        history=tuple(history),
    )
