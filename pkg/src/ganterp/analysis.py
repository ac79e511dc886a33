"""Spectral-change analysis: TV series, inflection points, alpha track.

The TV series measures how much the spectrum moves between consecutive
slices. Slices where that motion stands out against its local rolling
averages become inflection points, and within each inter-inflection
segment the cumulative TV sum (normalized to reach 1 at the segment end)
drives the interpolation speed.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .audio import Spectrogram

__all__ = [
    "TvSeries",
    "InflectionSet",
    "AlphaTrack",
    "compute_tv_series",
    "detect_inflection_points",
    "compute_alpha_track",
    "analysis_table",
]


@dataclass(frozen=True)
class TvSeries:
    """Per-slice spectral change, one value per adjacent slice pair.

    Length is num_slices - 1. When `normalized` and the raw maximum was
    positive, the maximum entry is exactly 1.
    """

    values: np.ndarray
    normalized: bool

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("tv series must be a non-empty 1D array")
        if not np.isfinite(self.values).all() or (self.values < 0).any():
            raise ValueError("tv values must be finite and non-negative")

    @property
    def num_slices(self) -> int:
        return self.values.size + 1


@dataclass(frozen=True)
class InflectionSet:
    """Strictly increasing slice indices bounding interpolation segments.

    Always contains 0 and the final slice index; interior indices carry L
    full rolling-window values on each side.
    """

    indices: tuple
    rolling_length: int
    delta: float

    def __post_init__(self):
        idx = self.indices
        if len(idx) < 2 or idx[0] != 0:
            raise ValueError("inflection set must start at 0 and hold >= 2 indices")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("inflection indices must be strictly increasing")
        last = idx[-1]
        lo, hi = self.rolling_length, last - 1 - self.rolling_length
        for t in idx[1:-1]:
            if not lo <= t <= hi:
                raise ValueError(
                    f"interior inflection {t} outside legal range [{lo}, {hi}]"
                )

    @property
    def num_slices(self) -> int:
        return self.indices[-1] + 1

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class AlphaTrack:
    """Per-slice interpolation coefficients, one per slice index.

    In the default normalization every value lies in [0, 1], values are
    non-decreasing within each segment, the value at each segment end is
    exactly 1, and the value at slice 0 is exactly 0. The legacy division
    mode preserves the published per-length division and offers none of
    these guarantees.
    """

    alphas: np.ndarray
    segment_bounds: InflectionSet
    legacy_division: bool = False

    def __post_init__(self):
        if self.alphas.size != self.segment_bounds.num_slices:
            raise ValueError("alpha track length must equal the slice count")
        if not np.isfinite(self.alphas).all():
            raise ValueError("alpha values must be finite")
        if self.alphas[0] != 0.0:
            raise ValueError("alpha at slice 0 must be exactly 0")


def compute_tv_series(spec: Spectrogram, normalize: bool = True) -> TvSeries:
    """Mean absolute difference between consecutive spectrogram columns.

    With `normalize`, values are divided by their maximum when it is
    positive, putting the series on a [0, 1] scale so the detection
    threshold is input-level independent.
    """
    values = kernels.tv_series(spec.mags)
    if normalize:
        peak = values.max()
        if peak > 0:
            values = values / peak
    return TvSeries(values=values, normalized=normalize)


def detect_inflection_points(
    tv: TvSeries, rolling_length: int, delta: float
) -> InflectionSet:
    """Find slices whose TV value breaks away from both rolling means.

    A slice t qualifies when tv[t] deviates from the mean of the L values
    before it and the mean of the L values after it with the same sign,
    both deviations exceeding delta. Ties never qualify, and both peaks
    and troughs are admitted. Slice 0 and the final slice are always
    included; a series too short for any candidate yields only those two.
    """
    if rolling_length < 1:
        raise ValueError("rolling_length must be >= 1")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    mask = kernels.inflection_mask(tv.values, rolling_length, delta)
    interior = np.flatnonzero(mask)
    last = tv.num_slices - 1
    indices = (0, *(int(t) for t in interior if 0 < t < last), last)
    return InflectionSet(indices=indices, rolling_length=rolling_length, delta=delta)


def compute_alpha_track(
    tv: TvSeries, inflections: InflectionSet, legacy_division: bool = False
) -> AlphaTrack:
    """Cumulative TV sum per segment, normalized to hit 1 at the segment end.

    Within each segment (p, q] the coefficient at slice t is the TV mass
    accumulated since p divided by the segment's total mass; a zero-mass
    segment falls back to the linear ramp (t - p) / (q - p) so motion
    continues through silence. With `legacy_division` the cumulative sum
    is divided by the segment length instead, exactly as published;
    downstream consumers clamp those values into [0, 1].
    """
    if inflections.num_slices != tv.num_slices:
        raise ValueError("inflection set does not match this tv series")
    bounds = np.asarray(inflections.indices, dtype=np.int64)
    alphas = kernels.alpha_track(tv.values, bounds, legacy_division)
    return AlphaTrack(
        alphas=alphas, segment_bounds=inflections, legacy_division=legacy_division
    )


def analysis_table(
    tv: TvSeries, inflections: InflectionSet, track: AlphaTrack
) -> str:
    """Tab-separated per-slice debug table: index, tv, is_inflection, alpha.

    Lines starting with '#' are comments; exactly num_slices data rows
    follow. The final slice has no outgoing TV value, so its tv column is
    empty.
    """
    marks = set(inflections.indices)
    lines = ["#index\ttv\tis_inflection\talpha"]
    for t in range(tv.num_slices):
        tv_col = repr(float(tv.values[t])) if t < tv.values.size else ""
        lines.append(
            f"{t}\t{tv_col}\t{int(t in marks)}\t{float(track.alphas[t])!r}"
        )
    return "\n".join(lines) + "\n"
