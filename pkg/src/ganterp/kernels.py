"""Hot numeric kernels, compiled with numba when available.

Each kernel has two implementations with equal semantics:

* ``*_numpy`` — vectorized pure-numpy fallback
* ``*_numba`` — @njit-compiled loops (parallel where it pays off)

The public names (``tv_series``, ``inflection_mask``, ``alpha_track``,
``mock_frame_phase``) dispatch to the numba build unless numba is missing
or the environment variable ``GANTERP_NO_NUMBA`` is set to a truthy value
(``1``, ``true``, ``yes``).

The inflection and alpha kernels share their arithmetic across both paths
(sequential prefix sums), so they return identical results bit for bit.
The tv and phase kernels may differ between paths in the last few ulps
because numpy's vectorized reductions associate differently; every
consumer contract is per-path deterministic, and `benchmarks/bench_kernels.py`
checks cross-path agreement.
"""

import os

import numpy as np

_NO_NUMBA_FLAG = os.environ.get("GANTERP_NO_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

# our only prange region runs from a single caller thread, so the plain
# workqueue layer suffices (and avoids the TBB version probe warning)
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via GANTERP_NO_NUMBA instead
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap if not (args and callable(args[0])) else args[0]

    prange = range

NUMBA_ENABLED = HAVE_NUMBA and not _NO_NUMBA_FLAG

# Spatial basis of the procedural mock generator: 9 plane-wave directions
# with integer frequencies 1..3 per axis, cycled over latent coordinates.
# Phase offsets use the golden angle so distinct latents / classes never
# share a phase lattice.
GOLDEN_ANGLE = 2.399963229728653
_BASIS_FX = np.array([1.0, 2.0, 3.0] * 3)
_BASIS_FY = np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0])
NUM_BASIS = 9
TWO_PI = 2.0 * np.pi


def latent_phase_table(latent_dim: int) -> np.ndarray:
    """Per-(latent, channel) phase offsets, shape (latent_dim, 3).

    Shared by both kernel paths so the basis is identical everywhere.
    """
    j = np.arange(latent_dim, dtype=np.float64)
    k = np.arange(3, dtype=np.float64)
    return GOLDEN_ANGLE * (j + 1.0)[:, None] + (TWO_PI / 3.0) * k[None, :]


def class_phase(category: int) -> float:
    """Fixed per-class phase offset of the mock generator."""
    return GOLDEN_ANGLE * (category + 1.0)


# ---------------------------------------------------------------------------
# TV series: mean absolute difference between consecutive spectrogram columns
# ---------------------------------------------------------------------------


def tv_series_numpy(mags: np.ndarray) -> np.ndarray:
    return np.abs(np.diff(mags, axis=1)).mean(axis=0)


@njit(cache=True, parallel=True)
def tv_series_numba(mags):  # pragma: no cover - compiled
    num_freqs, num_slices = mags.shape
    out = np.empty(num_slices - 1)
    for i in prange(num_slices - 1):
        acc = 0.0
        for f in range(num_freqs):
            acc += abs(mags[f, i] - mags[f, i + 1])
        out[i] = acc / num_freqs
    return out


def tv_series(mags: np.ndarray) -> np.ndarray:
    if NUMBA_ENABLED:
        return tv_series_numba(mags)
    return tv_series_numpy(mags)


# ---------------------------------------------------------------------------
# Inflection detection: rolling-window sign test over the TV series
# ---------------------------------------------------------------------------
#
# A candidate slice t (with L full values on each side) qualifies iff
# tv[t] deviates from both window means with the same sign and both
# deviations exceed delta. Exact ties never qualify. Both paths compute
# window sums from the same sequential prefix sum, so they agree exactly.


def inflection_mask_numpy(tv: np.ndarray, length: int, delta: float) -> np.ndarray:
    mask = np.zeros(tv.size, dtype=np.bool_)
    lo, hi = length, tv.size - 1 - length
    if hi < lo:
        return mask
    prefix = np.concatenate((np.zeros(1), np.cumsum(tv)))
    t = np.arange(lo, hi + 1)
    prev_mean = (prefix[t] - prefix[t - length]) / length
    next_mean = (prefix[t + 1 + length] - prefix[t + 1]) / length
    prev_dev = tv[t] - prev_mean
    next_dev = tv[t] - next_mean
    same_sign = ((prev_dev > 0) & (next_dev > 0)) | ((prev_dev < 0) & (next_dev < 0))
    mask[t] = same_sign & (np.abs(prev_dev) > delta) & (np.abs(next_dev) > delta)
    return mask


@njit(cache=True)
def inflection_mask_numba(tv, length, delta):  # pragma: no cover - compiled
    n = tv.size
    mask = np.zeros(n, dtype=np.bool_)
    lo = length
    hi = n - 1 - length
    if hi < lo:
        return mask
    prefix = np.empty(n + 1)
    prefix[0] = 0.0
    for i in range(n):
        prefix[i + 1] = prefix[i] + tv[i]
    for t in range(lo, hi + 1):
        prev_mean = (prefix[t] - prefix[t - length]) / length
        next_mean = (prefix[t + 1 + length] - prefix[t + 1]) / length
        prev_dev = tv[t] - prev_mean
        next_dev = tv[t] - next_mean
        if (prev_dev > 0 and next_dev > 0) or (prev_dev < 0 and next_dev < 0):
            if abs(prev_dev) > delta and abs(next_dev) > delta:
                mask[t] = True
    return mask


def inflection_mask(tv: np.ndarray, length: int, delta: float) -> np.ndarray:
    if NUMBA_ENABLED:
        return inflection_mask_numba(tv, length, delta)
    return inflection_mask_numpy(tv, length, delta)


# ---------------------------------------------------------------------------
# Alpha track: per-segment normalized cumulative TV sum
# ---------------------------------------------------------------------------
#
# For a segment (p, q] the coefficient at slice t is
#   sum(tv[p:t]) / sum(tv[p:q])          (default)
#   sum(tv[p:t]) / (q - p)               (legacy published division)
# and a zero-total segment falls back to the linear ramp (t - p) / (q - p)
# in default mode. Both paths share the sequential prefix sum.


def alpha_track_numpy(tv: np.ndarray, bounds: np.ndarray, legacy: bool) -> np.ndarray:
    alphas = np.zeros(bounds[-1] + 1)
    prefix = np.concatenate((np.zeros(1), np.cumsum(tv)))
    for i in range(1, bounds.size):
        p, q = bounds[i - 1], bounds[i]
        running = prefix[p + 1 : q + 1] - prefix[p]
        total = prefix[q] - prefix[p]
        if legacy:
            alphas[p + 1 : q + 1] = running / (q - p)
        elif total > 0:
            alphas[p + 1 : q + 1] = running / total
        else:
            alphas[p + 1 : q + 1] = (np.arange(p + 1, q + 1) - p) / (q - p)
    return alphas


@njit(cache=True)
def alpha_track_numba(tv, bounds, legacy):  # pragma: no cover - compiled
    n = tv.size
    alphas = np.zeros(bounds[-1] + 1)
    prefix = np.empty(n + 1)
    prefix[0] = 0.0
    for i in range(n):
        prefix[i + 1] = prefix[i] + tv[i]
    for i in range(1, bounds.size):
        p = bounds[i - 1]
        q = bounds[i]
        total = prefix[q] - prefix[p]
        for t in range(p + 1, q + 1):
            if legacy:
                alphas[t] = (prefix[t] - prefix[p]) / (q - p)
            elif total > 0:
                alphas[t] = (prefix[t] - prefix[p]) / total
            else:
                alphas[t] = (t - p) / (q - p)
    return alphas


def alpha_track(tv: np.ndarray, bounds: np.ndarray, legacy: bool = False) -> np.ndarray:
    bounds = np.asarray(bounds, dtype=np.int64)
    if NUMBA_ENABLED:
        return alpha_track_numba(tv, bounds, legacy)
    return alpha_track_numpy(tv, bounds, legacy)


# ---------------------------------------------------------------------------
# Mock generator phase field
# ---------------------------------------------------------------------------
#
# Pixel value (before quantization) at (x, y), channel k:
#   0.5 + 0.5 * sin(sum_j z[j] * cos(A[j % 9](x, y) + theta[j, k]) + class_offset)
# with A[g](x, y) = 2*pi*(fx[g]*(x+0.5)/W + fy[g]*(y+0.5)/H) and theta from
# `latent_phase_table`. Both paths evaluate the sum over latents via the
# angle-addition identity, collapsing it to 9 cosine and 9 sine
# coefficients per channel; the per-latent form serves as the test oracle.
# The kernel is deliberately single-threaded (and nogil): render_all
# parallelizes across frames, and nested parallel regions are only safe
# under threading layers this package does not require.


def collapse_latent_coefficients(z: np.ndarray) -> tuple:
    """Fold per-latent phase offsets into per-basis (cos, sin) coefficients.

    Shared by both kernel paths: sum_j z[j]*cos(A_g + theta[j,k]) equals
    cos_coef[g,k]*cos(A_g) - sin_coef[g,k]*sin(A_g) summed over g.
    """
    theta = latent_phase_table(z.size)
    groups = np.arange(z.size) % NUM_BASIS
    cos_coef = np.zeros((NUM_BASIS, 3))
    sin_coef = np.zeros((NUM_BASIS, 3))
    for g in range(NUM_BASIS):
        members = groups == g
        if members.any():
            cos_coef[g] = z[members] @ np.cos(theta[members])
            sin_coef[g] = z[members] @ np.sin(theta[members])
    return cos_coef, sin_coef


def mock_frame_phase_numpy(
    z: np.ndarray, class_offset: float, width: int, height: int
) -> np.ndarray:
    cos_coef, sin_coef = collapse_latent_coefficients(z)
    u = (np.arange(width) + 0.5) / width
    v = (np.arange(height) + 0.5) / height
    angles = TWO_PI * (
        _BASIS_FX[:, None, None] * u[None, None, :]
        + _BASIS_FY[:, None, None] * v[None, :, None]
    )
    cos_a = np.cos(angles)
    sin_a = np.sin(angles)
    phase = np.tensordot(cos_a, cos_coef, axes=(0, 0)) - np.tensordot(
        sin_a, sin_coef, axes=(0, 0)
    )
    return phase + class_offset


@njit(cache=True, nogil=True)
def _mock_frame_phase_numba(
    cos_coef, sin_coef, fx, fy, class_offset, width, height
):  # pragma: no cover - compiled
    phase = np.empty((height, width, 3))
    for y in range(height):
        v = (y + 0.5) / height
        for x in range(width):
            u = (x + 0.5) / width
            acc0 = class_offset
            acc1 = class_offset
            acc2 = class_offset
            for g in range(9):
                angle = TWO_PI * (fx[g] * u + fy[g] * v)
                c = np.cos(angle)
                s = np.sin(angle)
                acc0 += cos_coef[g, 0] * c - sin_coef[g, 0] * s
                acc1 += cos_coef[g, 1] * c - sin_coef[g, 1] * s
                acc2 += cos_coef[g, 2] * c - sin_coef[g, 2] * s
            phase[y, x, 0] = acc0
            phase[y, x, 1] = acc1
            phase[y, x, 2] = acc2
    return phase


def mock_frame_phase_numba(
    z: np.ndarray, class_offset: float, width: int, height: int
) -> np.ndarray:
    cos_coef, sin_coef = collapse_latent_coefficients(z)
    return _mock_frame_phase_numba(
        cos_coef, sin_coef, _BASIS_FX, _BASIS_FY, class_offset, width, height
    )


def mock_frame_phase(
    z: np.ndarray, class_offset: float, width: int, height: int
) -> np.ndarray:
    if NUMBA_ENABLED:
        return mock_frame_phase_numba(z, class_offset, width, height)
    return mock_frame_phase_numpy(z, class_offset, width, height)


def warmup() -> None:
    """Trigger JIT compilation of all kernels on tiny inputs."""
    if not NUMBA_ENABLED:
        return
    mags = np.zeros((2, 3))
    tv = np.zeros(4)
    tv_series_numba(mags)
    inflection_mask_numba(tv, 1, 0.0)
    alpha_track_numba(tv, np.array([0, 4], dtype=np.int64), False)
    mock_frame_phase_numba(np.zeros(2), 0.0, 2, 2)
