"""Shared builders for randomized test inputs."""

import numpy as np

from ganterp.analysis import InflectionSet, TvSeries, compute_alpha_track
from ganterp.planner import GeneratorSpec, build_frame_plan, sample_keyframes
from ganterp.trajectory import Trajectory, from_plan


def random_inflection_indices(rng, num_slices, keep=0.3):
    """Random valid inflection indices for rolling_length=1: interior in [1, T-3]."""
    interior = [t for t in range(1, num_slices - 2) if rng.random() < keep]
    return (0, *interior, num_slices - 1)


def random_trajectory(rng) -> Trajectory:
    """A structurally valid trajectory with random spec, keyframes and frames."""
    num_slices = int(rng.integers(3, 25))
    infl = InflectionSet(
        indices=random_inflection_indices(rng, num_slices),
        rolling_length=1,
        delta=0.0,
    )
    tv = TvSeries(values=rng.uniform(0, 1, num_slices - 1), normalized=False)
    track = compute_alpha_track(tv, infl)
    spec = GeneratorSpec(
        latent_dim=int(rng.integers(1, 9)),
        num_classes=int(rng.integers(2, 50)),
        image_size=(int(rng.integers(4, 33)), int(rng.integers(4, 33))),
        truncation=float(rng.uniform(0.2, 2.0)) if rng.random() < 0.5 else None,
    )
    plan = build_frame_plan(
        sample_keyframes(infl, spec, seed=int(rng.integers(0, 2**31))), track
    )
    return from_plan(
        spec,
        float(rng.uniform(1, 60)),
        plan,
        seed=int(rng.integers(0, 2**31)),
        audio_sha256="ab" * 32,
    )
