"""Extremum detection, line-shape classification and window metrics.

Synthetic series are built from sums of Lorentzians with known extremum
positions so detections can be checked against construction.
"""

from __future__ import annotations

import numpy as np
import pytest

from critsim import (
    ExtremumKind,
    ProfileShape,
    ValidationError,
    classify_profile,
    find_extrema,
    window_metrics,
)
from critsim.config import preset
from critsim.sweep import ScanSpec, intensity_scan, frequency_scan


def _lor(x, x0, gamma):
    return 1.0 / (1.0 + ((x - x0) / gamma) ** 2)


def _grid(n=2001, half=10.0):
    return np.linspace(-half, half, n)


def test_monotone_series_has_no_extrema():
    x = _grid(501)
    assert find_extrema(x, np.exp(x / 4.0)) == []


def test_single_lorentzian_dip_detected_at_center():
    x = _grid()
    y = 1.0 - 0.8 * _lor(x, 0.0, 1.0)
    ext = find_extrema(x, y)
    assert len(ext) == 1
    assert ext[0].kind is ExtremumKind.MIN
    assert abs(ext[0].detuning) <= x[1] - x[0]


def test_two_lorentzian_peaks_recovered_within_one_grid_step():
    x = _grid(4001)
    y = _lor(x, -3.0, 0.5) + _lor(x, 3.0, 0.5)
    ext = find_extrema(x, y)
    step = x[1] - x[0]
    kinds = [e.kind for e in ext]
    assert kinds == [ExtremumKind.MAX, ExtremumKind.MIN, ExtremumKind.MAX]
    assert abs(ext[0].detuning + 3.0) <= step
    assert abs(ext[1].detuning) <= step
    assert abs(ext[2].detuning - 3.0) <= step


def test_endpoint_extrema_are_not_reported():
    x = _grid(301)
    y = np.cos(x * np.pi / 20.0)  # maximum exactly at the left boundary shape
    ext = find_extrema(x, y)
    assert all(0 < e.index < len(x) - 1 for e in ext)


def test_plateau_reports_midpoint_rounded_toward_lower_detuning():
    x = np.arange(9.0)
    y = np.array([0.0, 1.0, 2.0, 3.0, 3.0, 3.0, 2.0, 1.0, 0.0])
    ext = find_extrema(x, y, 0.5)
    assert len(ext) == 1 and ext[0].index == 4
    y2 = np.array([0.0, 1.0, 2.0, 3.0, 3.0, 2.0, 1.0, 0.0])
    ext2 = find_extrema(np.arange(8.0), y2, 0.5)
    assert len(ext2) == 1 and ext2[0].index == 3


def test_prominence_threshold_filters_shallow_ripple():
    x = _grid()
    y = 1.0 - 0.8 * _lor(x, 0.0, 2.0) + 0.002 * np.cos(x * 40.0)
    ext = find_extrema(x, y)  # default threshold ignores the 0.004 ripple
    # Near-equal ripple minima at the bottom may both survive as a run of
    # minima; classification collapses such runs to a single dip.
    assert all(e.kind is ExtremumKind.MIN for e in ext)
    lab = classify_profile(x, y)
    assert lab.label is ProfileShape.SINGLE_DIP
    assert lab.signature == "min"
    assert len(find_extrema(x, y, 1e-4)) > 10


def test_series_validation():
    with pytest.raises(ValidationError):
        find_extrema([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValidationError):
        find_extrema([0.0, 1.0, 0.5], [1.0, 2.0, 3.0])
    with pytest.raises(ValidationError):
        find_extrema([0.0, 1.0, 2.0], [1.0, np.nan, 3.0])


def test_classify_basic_shapes():
    x = _grid()
    assert classify_profile(x, 1.0 - 0.5 * _lor(x, 0, 1.0)).label is ProfileShape.SINGLE_DIP
    assert classify_profile(x, 0.5 * _lor(x, 0, 1.0)).label is ProfileShape.SINGLE_PEAK
    m = _lor(x, -2.0, 0.8) + _lor(x, 2.0, 0.8)
    assert classify_profile(x, m).label is ProfileShape.M
    assert classify_profile(x, 1.0 - m).label is ProfileShape.W
    assert classify_profile(x, np.full_like(x, 0.3)).label is ProfileShape.FLAT


def test_classify_triple_dip_from_construction():
    x = _grid(4001)
    y = 2.0 * _lor(x, 0.0, 4.0)
    for c in (-2.0, 0.0, 2.0):
        y = y - 0.9 * _lor(x, c, 0.3) * _lor(x, c, 4.0)
    lab = classify_profile(x, y)
    assert lab.label is ProfileShape.TRIPLE_DIP
    assert lab.signature.split(",").count("min") == 3


def test_classify_split_m_when_structures_are_disjoint():
    x = _grid(4001, half=40.0)
    y = np.zeros_like(x)
    for c in (-25.0, 25.0):  # two M structures separated by wide open baseline
        y = y + 2.0 * _lor(x, c, 1.5) - 1.8 * _lor(x, c, 0.25)
    lab = classify_profile(x, y)
    assert lab.label is ProfileShape.SPLIT_M
    flipped = classify_profile(x, 2.5 - y)
    assert flipped.label is ProfileShape.SPLIT_W


def test_adjacent_equal_minima_collapse_to_one_dip():
    """A dip with a sub-threshold bump at the bottom is still a single dip."""
    x = _grid()
    y = 1.0 - 0.8 * _lor(x, 0.0, 1.5) + 0.004 * _lor(x, 0.0, 0.2)
    lab = classify_profile(x, y)
    assert lab.label is ProfileShape.SINGLE_DIP
    assert lab.signature == "min"


def test_affine_and_mirror_invariance():
    rng = np.random.default_rng(17)
    x = _grid(3001)
    y = 1.6 * _lor(x, 0, 3.0) - 1.2 * _lor(x, 0, 0.4) + 0.8
    base = classify_profile(x, y).label
    for _ in range(5):
        a = float(rng.uniform(0.1, 50.0))
        b = float(rng.uniform(-100.0, 100.0))
        assert classify_profile(x, a * y + b).label is base
    assert classify_profile(x, y[::-1]).label is base


def test_window_metrics_pure_dip_degenerates_to_envelope_only():
    # Wide scan so the baseline at the endpoints is ~1 and the half-depth
    # width approaches the analytic value 2*gamma.
    x = _grid(8001, half=100.0)
    gamma = 1.3
    wm = window_metrics(x, 1.0 - 0.6 * _lor(x, 0.0, gamma))
    step = x[1] - x[0]
    assert wm.window_height == 0.0
    assert wm.window_fwhm == 0.0
    assert wm.splitting == 0.0
    assert wm.envelope_fwhm == pytest.approx(2.0 * gamma, abs=2 * step)


def test_window_metrics_symmetric_double_dip_splitting():
    x = _grid(8001)
    d0 = 3.0
    y = 1.0 - 0.7 * _lor(x, -d0, 0.3) - 0.7 * _lor(x, d0, 0.3)
    wm = window_metrics(x, y)
    step = x[1] - x[0]
    assert wm.splitting == pytest.approx(2.0 * d0, abs=2 * step)


def test_window_metrics_central_window_measurements():
    x = _grid(8001)
    y = 1.0 - 0.8 * _lor(x, 0.0, 3.0) + 0.5 * _lor(x, 0.0, 0.5)
    wm = window_metrics(x, y)
    assert wm.window_height > 0.3
    assert 0.0 < wm.window_fwhm < wm.envelope_fwhm
    ext = find_extrema(x, y)
    assert [e.kind for e in ext] == [
        ExtremumKind.MIN,
        ExtremumKind.MAX,
        ExtremumKind.MIN,
    ]
    assert wm.splitting == pytest.approx(
        ext[2].detuning - ext[0].detuning, rel=1e-12
    )


def test_flat_series_reports_zero_metrics():
    x = _grid(101)
    wm = window_metrics(x, np.ones_like(x))
    assert (wm.window_height, wm.window_fwhm, wm.envelope_fwhm, wm.splitting) == (
        0.0,
        0.0,
        0.0,
        0.0,
    )


def test_refinement_stability_of_window_metrics():
    """Doubling the grid density moves the preset window metrics by < 1%."""
    run = preset("figS1_d").build()
    coarse = intensity_scan(run.config, run.scan)
    fine_spec = ScanSpec(
        mode=run.scan.mode,
        span=run.scan.span,
        points=2 * run.scan.points - 1,
        gain_ratio=run.scan.gain_ratio,
        wavelength=run.scan.wavelength,
    )
    fine = intensity_scan(run.config, fine_spec)
    wm_c = window_metrics(coarse.detuning, coarse.intensity)
    wm_f = window_metrics(fine.detuning, fine.intensity)
    for field in ("window_height", "window_fwhm", "envelope_fwhm", "splitting"):
        c = getattr(wm_c, field)
        f = getattr(wm_f, field)
        assert f == pytest.approx(c, rel=0.01)


def test_refinement_stability_of_variance_classification():
    run = preset("case1_coupled").build()
    fine_spec = ScanSpec(
        mode=run.scan.mode,
        span=run.scan.span,
        points=2 * run.scan.points - 1,
        gain_ratio=run.scan.gain_ratio,
        wavelength=run.scan.wavelength,
    )
    for spec in (run.scan, fine_spec):
        res = frequency_scan(run.config, run.input_state, run.omega, spec, run.detection)
        assert classify_profile(res.detuning, res.var_x).label is ProfileShape.TRIPLE_DIP
        assert classify_profile(res.detuning, res.var_y).label is ProfileShape.TRIPLE_PEAK
