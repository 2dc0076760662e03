"""Line-shape analysis: extremum detection, profile classification, window metrics.

Works on ordered ``(detuning, value)`` series such as the intensity or
variance columns of a sweep.  Classification is a pure function of the
sequence of significant interior extrema, where "significant" means
topographic prominence at or above a threshold (default: 1.2% of the
series range).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from .errors import ValidationError

#: Default prominence threshold as a fraction of the series value range.
#: Chosen between the sub-percent ripple that near-critical cavities leave
#: at the bottom of an otherwise plain dip (~1% of range) and the
#: shallowest transparency window the presets resolve (~2% of range).
DEFAULT_PROMINENCE_FRACTION = 0.012


class ExtremumKind(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Extremum:
    """One significant interior extremum of a sampled series."""

    detuning: float
    value: float
    kind: ExtremumKind
    prominence: float
    index: int


class ProfileShape(enum.Enum):
    SINGLE_PEAK = "SinglePeak"
    SINGLE_DIP = "SingleDip"
    M = "M"
    W = "W"
    TRIPLE_DIP = "TripleDip"
    TRIPLE_PEAK = "TriplePeak"
    SPLIT_M = "SplitM"
    SPLIT_W = "SplitW"
    FLAT = "Flat"
    OTHER = "Other"


@dataclass(frozen=True)
class ProfileLabel:
    label: ProfileShape
    signature: str


@dataclass(frozen=True)
class WindowMetrics:
    """Transparency-window and mode-splitting measurements of a dip series.

    ``window_height`` is the central maximum minus the mean of its two
    flanking minima (same units as the series values).  The two FWHM
    figures and ``splitting`` share the detuning units of the input.
    ``splitting`` is the distance between the two deepest minima, 0 for a
    single dip.
    """

    window_height: float
    window_fwhm: float
    envelope_fwhm: float
    splitting: float


def _as_series(detunings, values) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(detunings, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValidationError("series must be two 1-D arrays of equal length")
    if x.shape[0] < 3:
        raise ValidationError(f"series needs at least 3 points, got {x.shape[0]}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValidationError("series must be finite")
    if np.any(np.diff(x) <= 0.0):
        raise ValidationError("detunings must be strictly increasing")
    return x, y


def default_prominence(values) -> float:
    y = np.asarray(values, dtype=np.float64)
    return DEFAULT_PROMINENCE_FRACTION * float(y.max() - y.min())


def find_extrema(
    detunings, values, min_prominence: Optional[float] = None
) -> list[Extremum]:
    """All interior extrema with prominence >= threshold, sorted by detuning.

    Plateau extrema are reported at the plateau midpoint (rounding toward
    lower detuning); series endpoints are never reported.
    """
    x, y = _as_series(detunings, values)
    if min_prominence is None:
        min_prominence = default_prominence(y)
    if min_prominence < 0.0 or not math.isfinite(min_prominence):
        raise ValidationError(f"min_prominence must be >= 0, got {min_prominence}")

    out: list[Extremum] = []
    for sign, kind in ((1.0, ExtremumKind.MAX), (-1.0, ExtremumKind.MIN)):
        idx, props = find_peaks(sign * y, prominence=(min_prominence, None))
        for i, prom in zip(idx, props["prominences"]):
            out.append(
                Extremum(
                    detuning=float(x[i]),
                    value=float(y[i]),
                    kind=kind,
                    prominence=float(prom),
                    index=int(i),
                )
            )
    out.sort(key=lambda e: e.index)
    return out


def _signature(extrema: Sequence[Extremum]) -> str:
    return ",".join(e.kind.value for e in extrema)


def _alternating(extrema: Sequence[Extremum]) -> bool:
    return all(a.kind is not b.kind for a, b in zip(extrema, extrema[1:]))


def _collapse_runs(extrema: Sequence[Extremum]) -> list[Extremum]:
    """Collapse consecutive same-kind extrema to the most extreme member.

    Prominence filtering can leave two adjacent minima whose separating
    maximum fell below threshold (or vice versa); for classification the
    run is one feature with a flat bottom/top.  Ties keep the lower
    detuning.
    """
    out: list[Extremum] = []
    for e in extrema:
        if out and out[-1].kind is e.kind:
            if e.kind is ExtremumKind.MIN:
                if e.value < out[-1].value:
                    out[-1] = e
            elif e.value > out[-1].value:
                out[-1] = e
        else:
            out.append(e)
    return out


#: Fraction of the series range within which a sample counts as sitting at
#: the inter-group baseline, and the share of the gap that must sit there
#: for two 3-extremum groups to be disjoint.
_BASELINE_BAND_FRACTION = 0.1
_DISJOINT_SHARE = 0.5


def _disjoint_groups(y: np.ndarray, extrema: Sequence[Extremum]) -> bool:
    """True when the region between the inner shoulders hugs the baseline.

    A 7-extremum alternating signature is either one broad structure with
    three notches or two separate 3-extremum structures with open
    baseline between them.  The discriminator is how the samples between
    the inner shoulders (extrema 2 and 4) behave: if at least half of
    them lie within 10% of the series range of the segment's own far
    level, the two groups are separated by baseline and count as
    disjoint.
    """
    seg = y[extrema[2].index + 1 : extrema[4].index]
    if seg.size == 0:
        return False
    band = _BASELINE_BAND_FRACTION * float(y.max() - y.min())
    if extrema[0].kind is ExtremumKind.MAX:
        share = float(np.mean(seg <= float(seg.min()) + band))
    else:
        share = float(np.mean(seg >= float(seg.max()) - band))
    return share >= _DISJOINT_SHARE


_EXACT_LABELS = {
    "": ProfileShape.FLAT,
    "max": ProfileShape.SINGLE_PEAK,
    "min": ProfileShape.SINGLE_DIP,
    "max,min,max": ProfileShape.M,
    "min,max,min": ProfileShape.W,
    "min,max,min,max,min": ProfileShape.TRIPLE_DIP,
    "max,min,max,min,max": ProfileShape.TRIPLE_PEAK,
}


def classify_profile(
    detunings, values, min_prominence: Optional[float] = None
) -> ProfileLabel:
    """Map the significant-extremum signature of a series to a canonical label.

    Same-kind runs left by prominence filtering are collapsed first (two
    adjacent minima whose separating maximum was insignificant are one
    dip).  Alternating signatures of length 7 are ambiguous between one
    structure with internal notches (three dips in a broad peak / three
    peaks in a broad dip) and two disjoint 3-extremum structures;
    :func:`_disjoint_groups` resolves them into SplitM/SplitW versus
    TripleDip/TriplePeak.  The reported signature is the collapsed one.
    """
    x, y = _as_series(detunings, values)
    extrema = _collapse_runs(find_extrema(x, y, min_prominence))
    sig = _signature(extrema)
    label = _EXACT_LABELS.get(sig)
    if label is None:
        if len(extrema) == 7 and _alternating(extrema):
            if extrema[0].kind is ExtremumKind.MAX:
                label = (
                    ProfileShape.SPLIT_M
                    if _disjoint_groups(y, extrema)
                    else ProfileShape.TRIPLE_DIP
                )
            else:
                label = (
                    ProfileShape.SPLIT_W
                    if _disjoint_groups(y, extrema)
                    else ProfileShape.TRIPLE_PEAK
                )
        else:
            label = ProfileShape.OTHER
    return ProfileLabel(label=label, signature=sig)


def _cross_left(x: np.ndarray, y: np.ndarray, start: int, stop: int, level: float) -> float:
    """First crossing below ``level`` walking left from ``start`` (down to ``stop``)."""
    for i in range(start, stop, -1):
        if y[i - 1] < level <= y[i]:
            f = (level - y[i - 1]) / (y[i] - y[i - 1])
            return float(x[i - 1] + f * (x[i] - x[i - 1]))
        if y[i - 1] < level:
            return float(x[i - 1])
    return float(x[stop])


def _cross_right(x: np.ndarray, y: np.ndarray, start: int, stop: int, level: float) -> float:
    """First crossing below ``level`` walking right from ``start`` (up to ``stop``)."""
    for i in range(start, stop):
        if y[i + 1] < level <= y[i]:
            f = (y[i] - level) / (y[i] - y[i + 1])
            return float(x[i] + f * (x[i + 1] - x[i]))
        if y[i + 1] < level:
            return float(x[i + 1])
    return float(x[stop])


def window_metrics(
    detunings, values, min_prominence: Optional[float] = None
) -> WindowMetrics:
    """Measure the transparency window of a dip series.

    The two deepest significant minima define the splitting; the highest
    significant maximum between them is the window top.  Both FWHM values
    are measured at half the relevant depth by linear interpolation:
    the window against the mean of its flanking minima, the envelope
    against the endpoint baseline (outermost half-depth crossings).
    Degenerate shapes (no dip, no window) report zeros for the missing
    quantities.
    """
    x, y = _as_series(detunings, values)
    if float(y.max() - y.min()) == 0.0:
        return WindowMetrics(0.0, 0.0, 0.0, 0.0)
    extrema = find_extrema(x, y, min_prominence)
    minima = [e for e in extrema if e.kind is ExtremumKind.MIN]

    splitting = 0.0
    window_height = 0.0
    window_fwhm = 0.0
    if len(minima) >= 2:
        deepest = sorted(minima, key=lambda e: (e.value, e.detuning))[:2]
        left_min, right_min = sorted(deepest, key=lambda e: e.detuning)
        splitting = right_min.detuning - left_min.detuning
        inner = [
            e
            for e in extrema
            if e.kind is ExtremumKind.MAX and left_min.index < e.index < right_min.index
        ]
        if inner:
            top = max(inner, key=lambda e: (e.value, -e.detuning))
            floor = 0.5 * (left_min.value + right_min.value)
            window_height = top.value - floor
            if window_height > 0.0:
                level = top.value - 0.5 * window_height
                lo = _cross_left(x, y, top.index, left_min.index, level)
                hi = _cross_right(x, y, top.index, right_min.index, level)
                window_fwhm = hi - lo

    baseline = max(float(y[0]), float(y[-1]))
    global_min = int(np.argmin(y))
    depth = baseline - float(y[global_min])
    envelope_fwhm = 0.0
    if depth > 0.0:
        level = baseline - 0.5 * depth
        lo = _cross_right(x, y, 0, global_min, level)
        hi = _cross_left(x, y, x.shape[0] - 1, global_min, level)
        if hi > lo:
            envelope_fwhm = hi - lo
    return WindowMetrics(
        window_height=window_height,
        window_fwhm=window_fwhm,
        envelope_fwhm=envelope_fwhm,
        splitting=splitting,
    )
