"""Grid kernels for the sweep engine.

Two implementations of the same arithmetic live here: explicit loops
compiled with numba (default) and a vectorized pure-numpy fallback.
Set the environment variable ``CRITSIM_DISABLE_NUMBA=1`` before import
to force the numpy path; the numpy path is also used automatically when
numba is not importable.  ``benchmarks/bench_kernels.py`` compares the
two.

Degenerate reflection denominators are marked NaN inside the kernels and
reported by the dispatchers as :class:`DegenerateCavityError`.
"""

from __future__ import annotations

import cmath
import math
import os

import numpy as np

from .errors import DegenerateCavityError, ValidationError

_DEGENERATE_EPS = 1e-15
_RHO_TOL = 1e-12


def _env_disabled() -> bool:
    return os.environ.get("CRITSIM_DISABLE_NUMBA", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


# ---------------------------------------------------------------------------
# loop kernels (numba-compiled when enabled)
# ---------------------------------------------------------------------------


def _reflection_loop(phi1, phi2, r0, r1, r2, t1, t2, symmetric, single, out):
    for i in range(phi1.shape[0]):
        if single:
            back = r1 + 0.0j
        else:
            e1 = t1 * cmath.exp(1j * phi1[i])
            den1 = 1.0 - r1 * r0 * e1
            if abs(den1) < _DEGENERATE_EPS:
                out[i] = complex(np.nan, np.nan)
                continue
            if symmetric:
                back = (r1 - r0 * e1) / den1
            else:
                back = (r1 - e1) / den1
        be2 = back * t2 * cmath.exp(1j * phi2[i])
        den2 = 1.0 - r2 * be2
        if abs(den2) < _DEGENERATE_EPS:
            out[i] = complex(np.nan, np.nan)
        else:
            out[i] = (r2 - be2) / den2


def _variance_loop(rho_p, theta_p, rho_m, theta_m, var_x_in, var_y_in, lo_phase, out):
    c = math.cos(lo_phase)
    s = math.sin(lo_phase)
    for i in range(rho_p.shape[0]):
        a = rho_p[i] * cmath.exp(1j * theta_p[i])
        b = rho_m[i] * cmath.exp(-1j * theta_m[i])
        sig_sum = 0.5 * (a + b)
        sig_dif = 0.5 * (a - b)
        u = math.sqrt(max(0.0, 1.0 - rho_p[i] * rho_p[i]))
        v = math.sqrt(max(0.0, 1.0 - rho_m[i] * rho_m[i]))
        vac_sum = 0.5 * (u + v)
        vac_dif = 0.5 * (u - v)
        cx = c * sig_sum - 1j * (s * sig_dif)
        cy = 1j * (c * sig_dif) + s * sig_sum
        dx = c * vac_sum - 1j * (s * vac_dif)
        dy = 1j * (c * vac_dif) + s * vac_sum
        out[i] = (
            (cx.real * cx.real + cx.imag * cx.imag) * var_x_in
            + (cy.real * cy.real + cy.imag * cy.imag) * var_y_in
            + (dx.real * dx.real + dx.imag * dx.imag)
            + (dy.real * dy.real + dy.imag * dy.imag)
        )


# ---------------------------------------------------------------------------
# pure-numpy fallbacks (same math, vectorized)
# ---------------------------------------------------------------------------


def _reflection_numpy(phi1, phi2, r0, r1, r2, t1, t2, symmetric, single):
    # NaN marks degenerate points for the dispatcher to report; the NaN
    # arithmetic below is intentional, so silence the invalid-value warnings.
    with np.errstate(invalid="ignore", divide="ignore"):
        if single:
            back = np.full(phi2.shape, r1, dtype=np.complex128)
        else:
            e1 = t1 * np.exp(1j * phi1)
            den1 = 1.0 - r1 * r0 * e1
            num1 = r1 - r0 * e1 if symmetric else r1 - e1
            bad1 = np.abs(den1) < _DEGENERATE_EPS
            back = np.where(bad1, np.nan + 0j, num1 / np.where(bad1, 1.0, den1))
        be2 = back * t2 * np.exp(1j * phi2)
        den2 = 1.0 - r2 * be2
        bad2 = ~(np.abs(den2) >= _DEGENERATE_EPS)  # catches NaN from stage 1
        return np.where(bad2, np.nan + 0j, (r2 - be2) / np.where(bad2, 1.0, den2))


def _variance_numpy(rho_p, theta_p, rho_m, theta_m, var_x_in, var_y_in, lo_phase):
    c = math.cos(lo_phase)
    s = math.sin(lo_phase)
    a = rho_p * np.exp(1j * theta_p)
    b = rho_m * np.exp(-1j * theta_m)
    sig_sum = 0.5 * (a + b)
    sig_dif = 0.5 * (a - b)
    u = np.sqrt(np.maximum(0.0, 1.0 - rho_p * rho_p))
    v = np.sqrt(np.maximum(0.0, 1.0 - rho_m * rho_m))
    vac_sum = 0.5 * (u + v)
    vac_dif = 0.5 * (u - v)
    cx = c * sig_sum - 1j * (s * sig_dif)
    cy = 1j * (c * sig_dif) + s * sig_sum
    dx = c * vac_sum - 1j * (s * vac_dif)
    dy = 1j * (c * vac_dif) + s * vac_sum
    return (
        (cx.real**2 + cx.imag**2) * var_x_in
        + (cy.real**2 + cy.imag**2) * var_y_in
        + (dx.real**2 + dx.imag**2)
        + (dy.real**2 + dy.imag**2)
    )


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

NUMBA_ENABLED = False
_reflection_jit = None
_variance_jit = None

if not _env_disabled():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        _reflection_jit = njit(cache=True)(_reflection_loop)
        _variance_jit = njit(cache=True)(_variance_loop)
        NUMBA_ENABLED = True


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def reflection_grid(phi1, phi2, r0, r1, r2, t1, t2, symmetric, single):
    """Coupled reflection coefficient over phase grids, complex128.

    phi1/phi2 are broadcast to a common 1-D grid.
    """
    phi1 = np.ascontiguousarray(phi1, dtype=np.float64)
    phi2 = np.ascontiguousarray(phi2, dtype=np.float64)
    phi1, phi2 = np.broadcast_arrays(phi1, phi2)
    phi1 = np.ascontiguousarray(phi1)
    phi2 = np.ascontiguousarray(phi2)
    if NUMBA_ENABLED:
        out = np.empty(phi1.shape[0], dtype=np.complex128)
        _reflection_jit(phi1, phi2, r0, r1, r2, t1, t2, symmetric, single, out)
    else:
        out = _reflection_numpy(phi1, phi2, r0, r1, r2, t1, t2, symmetric, single)
    if not np.all(np.isfinite(out)):
        raise DegenerateCavityError(
            "reflection denominator vanished on the grid (perfect-mirror configuration)"
        )
    return out


def variance_grid(rho_p, theta_p, rho_m, theta_m, var_x_in, var_y_in, lo_phase):
    """Output quadrature variance at one homodyne angle over sideband grids."""
    rho_p = np.ascontiguousarray(rho_p, dtype=np.float64)
    theta_p = np.ascontiguousarray(theta_p, dtype=np.float64)
    rho_m = np.ascontiguousarray(rho_m, dtype=np.float64)
    theta_m = np.ascontiguousarray(theta_m, dtype=np.float64)
    hi = max(rho_p.max(initial=0.0), rho_m.max(initial=0.0))
    if hi > 1.0 + _RHO_TOL:
        raise ValidationError(
            f"sideband magnitude {hi} exceeds unity; non-passive response cannot "
            "feed the vacuum-loss channel"
        )
    if NUMBA_ENABLED:
        out = np.empty(rho_p.shape[0], dtype=np.float64)
        _variance_jit(
            rho_p, theta_p, rho_m, theta_m, var_x_in, var_y_in, lo_phase, out
        )
        return out
    return _variance_numpy(
        rho_p, theta_p, rho_m, theta_m, var_x_in, var_y_in, lo_phase
    )
