"""Two-sideband quadrature-noise propagation tests.

The reflection channel acts on the upper and lower sidebands
independently; the measured quadrature variance mixes the squeezed and
antisqueezed inputs with vacuum entering through 1 - rho^2.  The frozen
numbers below come from direct evaluation of the bilinear form and are
cross-checked against the 4x4 covariance-matrix propagation.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from critsim import (
    CoupledCavityConfig,
    DetectionModel,
    InputGaussianState,
    PolarResponse,
    SidebandResponsePair,
    ValidationError,
    apply_detection,
    input_from_db,
    input_from_squeeze_factor,
    sideband_pair,
    variance_at_angle,
    variance_to_db,
    variance_via_covariance,
    variance_x,
    variance_y,
)


def _pair(rho_p, theta_p, rho_m=None, theta_m=None, omega=0.0):
    rho_m = rho_p if rho_m is None else rho_m
    theta_m = theta_p if theta_m is None else theta_m
    return SidebandResponsePair(
        plus=PolarResponse(rho_p, theta_p),
        minus=PolarResponse(rho_m, theta_m),
        omega=omega,
        detuning=0.0,
    )


def test_identity_channel_passes_input_through():
    state = input_from_db(1.6, 4.0)
    pair = _pair(1.0, 0.0)
    assert variance_x(pair, state) == pytest.approx(state.var_x, abs=1e-15)
    assert variance_y(pair, state) == pytest.approx(state.var_y, abs=1e-15)


def test_full_vacuum_replacement_gives_shot_noise():
    state = input_from_squeeze_factor(0.9)
    pair = _pair(0.0, 0.0)
    assert variance_x(pair, state) == pytest.approx(1.0, abs=1e-15)
    assert variance_y(pair, state) == pytest.approx(1.0, abs=1e-15)


def test_quarter_wave_reflection_phase_swaps_quadratures():
    state = input_from_squeeze_factor(0.5)
    pair = _pair(1.0, math.pi / 2)
    assert variance_x(pair, state) == pytest.approx(math.e, rel=1e-12)
    assert variance_y(pair, state) == pytest.approx(1.0 / math.e, rel=1e-12)


def test_rotated_quadrature_averages_the_two_variances():
    state = input_from_squeeze_factor(0.5)
    pair = _pair(1.0, 0.0)
    got = variance_at_angle(pair, state, math.pi / 4)
    assert got == pytest.approx((math.exp(-1.0) + math.exp(1.0)) / 2.0, rel=1e-12)
    assert got == pytest.approx(1.5430806348152437, rel=1e-12)


def test_angle_zero_and_quarter_turn_match_the_named_quadratures():
    rng = np.random.default_rng(3)
    state = input_from_db(1.6, 4.0)
    for _ in range(50):
        pair = _pair(
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        assert abs(variance_at_angle(pair, state, 0.0) - variance_x(pair, state)) < 1e-15
        assert (
            abs(variance_at_angle(pair, state, math.pi / 2) - variance_y(pair, state))
            < 1e-15
        )


def test_vacuum_is_preserved_for_any_channel():
    rng = np.random.default_rng(5)
    vac = InputGaussianState.vacuum()
    for _ in range(300):
        pair = _pair(
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        assert variance_x(pair, vac) == pytest.approx(1.0, abs=1e-12)
        assert variance_y(pair, vac) == pytest.approx(1.0, abs=1e-12)


def test_uncertainty_product_never_dips_below_unity():
    rng = np.random.default_rng(20240917)
    n = 10_000
    state_pool = [
        input_from_squeeze_factor(0.5),
        input_from_db(1.6, 4.0),
        InputGaussianState.vacuum(),
    ]
    for i in range(n):
        state = state_pool[i % len(state_pool)]
        pair = _pair(
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        vx = variance_x(pair, state)
        vy = variance_y(pair, state)
        assert vx * vy >= 1.0 - 1e-9


def test_equal_sidebands_reduce_to_beam_splitter_mixing():
    state = input_from_db(1.6, 4.0)
    for rho in (0.0, 0.3, 0.9, 1.0):
        pair = _pair(rho, 0.0)
        want_x = rho * rho * state.var_x + (1.0 - rho * rho)
        want_y = rho * rho * state.var_y + (1.0 - rho * rho)
        assert variance_x(pair, state) == pytest.approx(want_x, abs=1e-12)
        assert variance_y(pair, state) == pytest.approx(want_y, abs=1e-12)


def test_bilinear_form_matches_covariance_matrix_propagation():
    rng = np.random.default_rng(12345)
    state = input_from_db(1.6, 4.0)
    worst = 0.0
    for _ in range(1000):
        pair = _pair(
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
            float(rng.uniform(0, 1)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        lo = float(rng.uniform(0, 2 * math.pi))
        direct = variance_at_angle(pair, state, lo)
        oracle = variance_via_covariance(pair, state, lo)
        worst = max(worst, abs(direct - oracle))
    assert worst < 1e-10


def test_sideband_pair_is_conjugate_symmetric_at_zero_detuning():
    cfg = CoupledCavityConfig(
        r0=math.sqrt(0.99), r1=math.sqrt(0.999), r2=math.sqrt(0.958)
    )
    pair = sideband_pair(cfg, 0.0, 2.5e6)
    assert pair.plus.rho == pytest.approx(pair.minus.rho, abs=1e-12)
    assert pair.plus.theta == pytest.approx(-pair.minus.theta, abs=1e-12)


def test_sideband_pair_coincides_at_zero_offset():
    cfg = CoupledCavityConfig(
        r0=math.sqrt(0.99), r1=math.sqrt(0.999), r2=math.sqrt(0.958)
    )
    for d in (0.0, 1.3e6, -2.2e7):
        pair = sideband_pair(cfg, d, 0.0)
        assert pair.plus == pair.minus


def test_sideband_pair_rejects_negative_offset():
    cfg = CoupledCavityConfig(
        r0=math.sqrt(0.99), r1=math.sqrt(0.999), r2=math.sqrt(0.958)
    )
    with pytest.raises(ValidationError):
        sideband_pair(cfg, 0.0, -1.0)


def test_squeeze_factor_constructor():
    assert input_from_squeeze_factor(0.0) == InputGaussianState(1.0, 1.0)
    s = input_from_squeeze_factor(0.5)
    assert s.var_x == pytest.approx(0.36787944117144233, rel=1e-15)
    assert s.var_y == pytest.approx(2.718281828459045, rel=1e-15)
    s2 = input_from_squeeze_factor(0.184)
    assert s2.var_x == pytest.approx(0.6921171816887304, rel=1e-13)
    assert s2.var_y == pytest.approx(1.444842038973879, rel=1e-13)


def test_decibel_constructor_supports_impure_states():
    flat = input_from_db(0.0, 0.0)
    assert (flat.var_x, flat.var_y) == (1.0, 1.0)
    s = input_from_db(1.6, 4.0)
    assert s.var_x == pytest.approx(0.6918309709189365, rel=1e-13)
    assert s.var_y == pytest.approx(2.51188643150958, rel=1e-13)
    halved = input_from_db(3.0103, 3.0103)
    assert halved.var_x == pytest.approx(0.5, rel=1e-5)
    assert halved.var_y == pytest.approx(2.0, rel=1e-5)


def test_decibel_constructor_rejects_uncertainty_violations():
    with pytest.raises(ValidationError):
        input_from_db(4.0, 1.6 - 1e-6)  # product of variances below 1


def test_variance_to_db_inverts_the_constructors():
    assert variance_to_db(1.0) == 0.0
    assert variance_to_db(math.exp(1.0)) == pytest.approx(4.342944819032518, rel=1e-13)
    assert variance_to_db(0.6918309709189365) == pytest.approx(-1.6, abs=1e-12)


def test_detection_model_mixes_in_vacuum():
    ident = DetectionModel(eta=1.0, lo_phase=0.0)
    assert apply_detection(0.5, ident) == 0.5
    det = DetectionModel.from_visibility(0.94)
    assert det.eta == pytest.approx(0.8836, rel=1e-12)
    assert apply_detection(1.0, det) == pytest.approx(1.0, abs=1e-15)
    got = apply_detection(math.exp(-1.0), det)
    assert got == pytest.approx(0.4414582742190864, rel=1e-12)


def test_input_state_requires_positive_variances():
    with pytest.raises(ValidationError):
        InputGaussianState(0.0, 2.0)
    with pytest.raises(ValidationError):
        InputGaussianState(0.5, 1.0)  # uncertainty product below unity
