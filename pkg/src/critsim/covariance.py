"""Two-mode Gaussian covariance propagation of the sideband pair.

Independent cross-check for the closed-form variance expressions in
:mod:`critsim.quantum`: represent the upper/lower sideband modes by their
4x4 quadrature covariance matrix, push it through the per-mode
rotation-plus-loss channel, and read out the spectral variance of the
measured quadrature.  No |A+B|-style coefficient algebra is used, so
agreement with the closed forms is a genuine two-route consistency check
(exercised by the test suite and the ``validate`` subcommand).

Basis ordering is (X+, Y+, X-, Y-) with vacuum variance 1 per quadrature.
"""

from __future__ import annotations

import math

import numpy as np

from .quantum import InputGaussianState, SidebandResponsePair


def input_covariance(state: InputGaussianState) -> np.ndarray:
    """Covariance matrix of the sideband pair for a phase-locked Gaussian beam.

    Broadband squeezing correlates the two sidebands; the parameters are
    fixed by requiring the measured spectral variances to be
    (var_x, var_y) at every analysis frequency.
    """
    half_sum = 0.5 * (state.var_x + state.var_y)
    half_dif = 0.5 * (state.var_x - state.var_y)
    cov = np.eye(4) * half_sum
    cov[0, 2] = cov[2, 0] = half_dif
    cov[1, 3] = cov[3, 1] = -half_dif
    return cov


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def channel_covariance(pair: SidebandResponsePair, cov_in: np.ndarray) -> np.ndarray:
    """Apply the reflection channel mode-by-mode: scale+rotate, then add vacuum."""
    scatter = np.zeros((4, 4))
    scatter[0:2, 0:2] = pair.plus.rho * _rotation(pair.plus.theta)
    scatter[2:4, 2:4] = pair.minus.rho * _rotation(pair.minus.theta)
    noise = np.diag(
        [
            max(0.0, 1.0 - pair.plus.rho**2),
            max(0.0, 1.0 - pair.plus.rho**2),
            max(0.0, 1.0 - pair.minus.rho**2),
            max(0.0, 1.0 - pair.minus.rho**2),
        ]
    )
    return scatter @ cov_in @ scatter.T + noise


def measured_variance(cov: np.ndarray, lo_phase: float) -> float:
    """Spectral variance of the homodyne quadrature e^{-i*lo}a+ + e^{+i*lo}a-^dag."""
    # symmetrized <a+ a->: assembled from quadrature covariances
    re_m = 0.25 * (cov[0, 2] - cov[1, 3])
    im_m = 0.25 * (cov[0, 3] + cov[1, 2])
    phase = complex(math.cos(-2.0 * lo_phase), math.sin(-2.0 * lo_phase))
    cross = 2.0 * (phase * complex(re_m, im_m)).real
    return 0.25 * (cov[0, 0] + cov[1, 1] + cov[2, 2] + cov[3, 3]) + cross


def variance_via_covariance(
    pair: SidebandResponsePair, state: InputGaussianState, lo_phase: float = 0.0
) -> float:
    """End-to-end covariance-route variance at one homodyne angle."""
    return measured_variance(channel_covariance(pair, input_covariance(state)), lo_phase)
