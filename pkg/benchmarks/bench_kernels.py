#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs each hot kernel on realistic sizes (a 3 minute track at 30 fps,
128-d latents, 256x256 mock frames), reports best-of-N wall times for
both paths and checks that they agree. Usage:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from ganterp import kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def report(name, numpy_fn, numba_fn, repeats):
    t_np = best_of(numpy_fn, repeats)
    if numba_fn is None:
        print(f"{name:<22} numpy {t_np * 1e3:8.2f} ms   numba       n/a")
        return
    numba_fn()  # warm the JIT outside the timed region
    t_nb = best_of(numba_fn, repeats)
    speedup = t_np / t_nb if t_nb > 0 else float("inf")
    print(
        f"{name:<22} numpy {t_np * 1e3:8.2f} ms   numba {t_nb * 1e3:8.2f} ms"
        f"   x{speedup:5.2f}"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba not importable; timing the numpy path only")

    rng = np.random.default_rng(0)
    mags = rng.uniform(0, 1, size=(1025, 5400))
    tv = np.ascontiguousarray(kernels.tv_series_numpy(mags))
    # slice indices run 0..tv.size; the last one closes the final segment
    bounds = np.array([0, 900, 2400, 3100, tv.size], dtype=np.int64)
    z = rng.standard_normal(128)

    have = kernels.HAVE_NUMBA
    print(f"sizes: spectrogram {mags.shape}, tv {tv.size}, frame 256x256, d={z.size}")
    report(
        "tv_series",
        lambda: kernels.tv_series_numpy(mags),
        (lambda: kernels.tv_series_numba(mags)) if have else None,
        args.repeats,
    )
    report(
        "inflection_mask",
        lambda: kernels.inflection_mask_numpy(tv, 30, 0.1),
        (lambda: kernels.inflection_mask_numba(tv, 30, 0.1)) if have else None,
        args.repeats,
    )
    report(
        "alpha_track",
        lambda: kernels.alpha_track_numpy(tv, bounds, False),
        (lambda: kernels.alpha_track_numba(tv, bounds, False)) if have else None,
        args.repeats,
    )
    report(
        "mock_frame_phase",
        lambda: kernels.mock_frame_phase_numpy(z, 1.0, 256, 256),
        (lambda: kernels.mock_frame_phase_numba(z, 1.0, 256, 256)) if have else None,
        args.repeats,
    )

    if have:
        print("\ncross-path agreement:")
        tv_diff = np.abs(
            kernels.tv_series_numpy(mags) - kernels.tv_series_numba(mags)
        ).max()
        mask_same = np.array_equal(
            kernels.inflection_mask_numpy(tv, 30, 0.1),
            kernels.inflection_mask_numba(tv, 30, 0.1),
        )
        alpha_same = np.array_equal(
            kernels.alpha_track_numpy(tv, bounds, False),
            kernels.alpha_track_numba(tv, bounds, False),
        )
        phase_diff = np.abs(
            kernels.mock_frame_phase_numpy(z, 1.0, 256, 256)
            - kernels.mock_frame_phase_numba(z, 1.0, 256, 256)
        ).max()
        print(f"  tv max |diff|        {tv_diff:.3e}  (tolerance 1e-12)")
        print(f"  inflection mask      {'identical' if mask_same else 'MISMATCH'}")
        print(f"  alpha track          {'identical' if alpha_same else 'MISMATCH'}")
        print(f"  phase max |diff|     {phase_diff:.3e}  (tolerance 1e-9)")
        assert tv_diff <= 1e-12 and mask_same and alpha_same and phase_diff <= 1e-9
        print("agreement checks passed")


if __name__ == "__main__":
    main()
