"""Core reflection-transfer tests: resonant values, symmetries, passivity."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from critsim import (
    CoupledCavityConfig,
    DegenerateCavityError,
    PhasePair,
    SPEED_OF_LIGHT,
    ValidationError,
    Variant,
    coupled_reflectivity,
    inner_reflectivity,
    round_trip_phase,
    single_cavity_reflectivity,
    to_polar,
)


def _config(**kw) -> CoupledCavityConfig:
    base = dict(r0=math.sqrt(0.99), r1=math.sqrt(0.999), r2=math.sqrt(0.958))
    base.update(kw)
    return CoupledCavityConfig(**base)


def test_free_spectral_range_from_length():
    cfg = _config(length1=0.0295, length2=0.0295)
    expected = SPEED_OF_LIGHT / (2.0 * 0.0295)
    assert cfg.fsr1 == pytest.approx(expected, rel=1e-15)
    assert cfg.fsr2 == pytest.approx(expected, rel=1e-15)
    assert cfg.fsr2 == pytest.approx(5081228101.694915, rel=1e-12)


def test_refractive_index_shrinks_free_spectral_range():
    cfg = _config(n1=1.5)
    assert cfg.fsr1 == pytest.approx(SPEED_OF_LIGHT / (2.0 * 0.0295 * 1.5), rel=1e-15)


def test_one_free_spectral_range_is_two_pi_of_round_trip_phase():
    cfg = _config()
    pp = round_trip_phase(cfg, cfg.fsr2)
    assert pp.phi1 == pytest.approx(2.0 * math.pi, rel=1e-12)
    assert pp.phi2 == pytest.approx(2.0 * math.pi, rel=1e-12)


def test_round_trip_phase_offsets_add():
    cfg = _config(phi1_offset=0.25, phi2_offset=-0.5)
    pp = round_trip_phase(cfg, 0.0)
    assert pp.phi1 == 0.25
    assert pp.phi2 == -0.5


def test_round_trip_phase_rejects_nonfinite_detuning():
    with pytest.raises(ValidationError):
        round_trip_phase(_config(), math.nan)


def test_inner_resonant_reflectivity_weak_coupling():
    # direct real-axis evaluation: (r1 - r0) / (1 - r1*r0) at phi1 = 0
    cfg = _config()
    expected = (cfg.r1 - cfg.r0) / (1.0 - cfg.r1 * cfg.r0)
    got = inner_reflectivity(cfg, 0.0)
    assert got.imag == 0.0
    assert got.real == pytest.approx(expected, rel=1e-14)
    assert got.real == pytest.approx(0.8189273259570566, rel=1e-12)


def test_inner_reflectivity_decoupling_with_perfect_middle_mirror():
    """r1 = 1 makes the back cavity invisible regardless of its phase."""
    cfg = _config(r1=1.0)
    for phi in np.linspace(-math.pi, math.pi, 41):
        assert abs(inner_reflectivity(cfg, float(phi)) - 1.0) < 1e-12


def test_variant_changes_inner_response_when_end_mirror_is_lossy():
    cfg_sym = _config()
    cfg_ap = _config(variant=Variant.AS_PRINTED)
    sym = inner_reflectivity(cfg_sym, 0.0)
    ap = inner_reflectivity(cfg_ap, 0.0)
    assert abs(sym - ap) > 0.1  # the two forms genuinely disagree off the r0=1 limit
    # with a perfect end mirror both reduce to the same response
    cfg_sym1 = _config(r0=1.0)
    cfg_ap1 = _config(r0=1.0, variant=Variant.AS_PRINTED)
    for phi in (0.0, 0.3, -1.2, math.pi / 2):
        a = inner_reflectivity(cfg_sym1, phi)
        b = inner_reflectivity(cfg_ap1, phi)
        assert abs(a - b) < 1e-12


def test_coupled_resonant_intensity_exceeds_detuned_neighbors():
    cfg = _config()
    center = abs(coupled_reflectivity(cfg, round_trip_phase(cfg, 0.0)))
    for delta in (1e-4, 3e-4, 1e-3):
        off = abs(
            coupled_reflectivity(cfg, round_trip_phase(cfg, delta * cfg.fsr2))
        )
        assert center > off


def test_single_cavity_resonant_amplitude_overcoupled():
    # input mirror less reflective than the back mirror: pi reflection phase
    r_in = math.sqrt(0.968)
    r_back = math.sqrt(0.998)
    got = single_cavity_reflectivity(r_in, r_back, 1.0, 0.0)
    assert got.imag == 0.0
    assert got.real == pytest.approx(-0.8840241679567501, rel=1e-12)
    pol = to_polar(got)
    assert pol.rho == pytest.approx(0.8840241679567501, rel=1e-12)
    assert pol.theta == pytest.approx(math.pi, abs=1e-12)


def test_single_cavity_resonant_amplitude_near_critical():
    r_in = math.sqrt(0.968)
    r_back = math.sqrt(0.967)
    got = single_cavity_reflectivity(r_in, r_back, 1.0, 0.0)
    assert got.real == pytest.approx(0.01564081735286547, rel=1e-12)
    assert abs(got) ** 2 == pytest.approx(0.00024463516746569766, rel=1e-12)


def test_passivity_on_random_lossless_configs():
    rng = np.random.default_rng(20240917)
    for _ in range(200):
        r0, r1, r2 = np.sqrt(rng.uniform(0.05, 1.0, size=3))
        cfg = CoupledCavityConfig(r0=float(r0), r1=float(r1), r2=float(r2))
        for phi in rng.uniform(-math.pi, math.pi, size=20):
            z = coupled_reflectivity(cfg, PhasePair(float(phi), float(phi)))
            assert abs(z) <= 1.0 + 1e-12


def test_lossless_sealed_cavity_is_all_pass():
    """With a perfect end mirror and no internal loss, |R| = 1 at every phase."""
    for variant in (Variant.SYMMETRIC_NUMERATOR, Variant.AS_PRINTED):
        cfg = _config(r0=1.0, variant=variant)
        for phi in np.linspace(-3.0, 3.0, 31):
            pp = round_trip_phase(cfg, float(phi) * cfg.fsr2 / (2 * math.pi))
            assert abs(abs(coupled_reflectivity(cfg, pp)) - 1.0) < 1e-12


def test_response_is_conjugate_symmetric_in_detuning():
    cfg = _config()
    for d in (1e5, 3e6, 0.2 * cfg.fsr2):
        zp = coupled_reflectivity(cfg, round_trip_phase(cfg, d))
        zm = coupled_reflectivity(cfg, round_trip_phase(cfg, -d))
        assert zp == pytest.approx(zm.conjugate(), rel=1e-12, abs=1e-12)


def test_response_is_periodic_in_one_free_spectral_range():
    cfg = _config()
    for d in (0.0, 1.7e6, -4.4e8):
        z0 = coupled_reflectivity(cfg, round_trip_phase(cfg, d))
        z1 = coupled_reflectivity(cfg, round_trip_phase(cfg, d + cfg.fsr2))
        assert z0 == pytest.approx(z1, rel=1e-9, abs=1e-9)


def test_degenerate_denominator_raises():
    # perfect mirrors facing each other: resonant denominator hits zero
    cfg = CoupledCavityConfig(r0=1.0, r1=1.0, r2=1.0)
    with pytest.raises(DegenerateCavityError):
        coupled_reflectivity(cfg, round_trip_phase(cfg, 0.0))


def test_to_polar_uses_upper_branch_at_minus_one():
    pol = to_polar(complex(-1.0, 0.0))
    assert pol.rho == 1.0
    assert pol.theta == pytest.approx(math.pi, abs=0.0)
    pol2 = to_polar(cmath.rect(0.5, -3.0))
    assert pol2.theta == pytest.approx(-3.0, abs=1e-12)


def test_config_rejects_out_of_range_mirrors():
    with pytest.raises(ValidationError, match="r1"):
        _config(r1=1.2)
    with pytest.raises(ValidationError, match="t2"):
        _config(t2=0.0)
    with pytest.raises(ValidationError, match="length1"):
        _config(length1=0.0)
    with pytest.raises(ValidationError, match="n2"):
        _config(n2=0.5)
