import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ganterp.analysis import AlphaTrack, InflectionSet, TvSeries, compute_alpha_track
from ganterp.errors import InvalidCategoryError, MisalignedInputsError
from ganterp.planner import (
    GeneratorSpec,
    LatentKeyframe,
    build_frame_plan,
    sample_keyframes,
)

THREE_POINTS = InflectionSet(indices=(0, 10, 19), rolling_length=2, delta=0.1)


def small_spec(**overrides):
    fields = dict(latent_dim=4, num_classes=1000, image_size=(8, 8))
    fields.update(overrides)
    return GeneratorSpec(**fields)


def track_for(tv_values, indices):
    tv = TvSeries(values=np.asarray(tv_values, dtype=np.float64), normalized=False)
    infl = InflectionSet(indices=indices, rolling_length=1, delta=0.0)
    return compute_alpha_track(tv, infl)


class TestSampleKeyframes:
    def test_full_category_list_used_verbatim(self):
        kfs = sample_keyframes(THREE_POINTS, small_spec(), categories=[7, 8, 9], seed=1)
        assert [kf.category for kf in kfs] == [7, 8, 9]
        assert [kf.slice_index for kf in kfs] == [0, 10, 19]

    def test_single_class_space(self):
        kfs = sample_keyframes(THREE_POINTS, small_spec(num_classes=1), seed=123)
        assert [kf.category for kf in kfs] == [0, 0, 0]

    def test_golden_fixture_seed_42(self):
        # frozen from the first run of the seeded generator; guards stream stability
        kfs = sample_keyframes(THREE_POINTS, small_spec(), categories=None, seed=42)
        expected_z = [
            [0.30471707975443135, -1.0399841062404955, 0.7504511958064572, 0.9405647163912139],
            [-1.302179506862318, 0.12784040316728537, -0.3162425923435822, -0.016801157504288795],
            [-0.85304392757358, 0.8793979748628286, 0.7777919354289483, 0.06603069756121605],
        ]
        expected_categories = [201, 94, 402]
        assert [kf.category for kf in kfs] == expected_categories
        for kf, z in zip(kfs, expected_z):
            assert kf.z.tolist() == z

    def test_determinism(self):
        a = sample_keyframes(THREE_POINTS, small_spec(), seed=9)
        b = sample_keyframes(THREE_POINTS, small_spec(), seed=9)
        for x, y in zip(a, b):
            assert x.category == y.category and np.array_equal(x.z, y.z)

    def test_different_seeds_differ(self):
        a = sample_keyframes(THREE_POINTS, small_spec(), seed=1)
        b = sample_keyframes(THREE_POINTS, small_spec(), seed=2)
        assert any(not np.array_equal(x.z, y.z) for x, y in zip(a, b))

    def test_sparse_pins(self):
        kfs = sample_keyframes(THREE_POINTS, small_spec(), categories={0: 417, 2: 33}, seed=5)
        assert kfs[0].category == 417
        assert kfs[2].category == 33
        assert 0 <= kfs[1].category < 1000

    def test_sparse_list_with_gaps(self):
        kfs = sample_keyframes(THREE_POINTS, small_spec(), categories=[417, None, 33], seed=5)
        assert (kfs[0].category, kfs[2].category) == (417, 33)

    def test_out_of_range_category_rejected(self):
        with pytest.raises(InvalidCategoryError):
            sample_keyframes(THREE_POINTS, small_spec(), categories={1: 1000}, seed=0)

    def test_pin_beyond_keyframe_count_rejected(self):
        from ganterp.errors import KeyframeIndexError

        with pytest.raises(KeyframeIndexError):
            sample_keyframes(THREE_POINTS, small_spec(), categories={5: 3}, seed=0)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_truncation_bounds_all_coordinates(self, seed):
        spec = small_spec(latent_dim=24, truncation=0.5)
        kfs = sample_keyframes(THREE_POINTS, spec, seed=seed)
        for kf in kfs:
            assert (np.abs(kf.z) <= 0.5).all()

    def test_truncation_is_deterministic(self):
        spec = small_spec(latent_dim=24, truncation=0.4)
        a = sample_keyframes(THREE_POINTS, spec, seed=11)
        b = sample_keyframes(THREE_POINTS, spec, seed=11)
        for x, y in zip(a, b):
            assert np.array_equal(x.z, y.z)


class TestBuildFramePlan:
    def test_derived_midpoint_mix(self):
        keyframes = [
            LatentKeyframe(slice_index=0, z=np.array([0.0, 0.0]), category=7),
            LatentKeyframe(slice_index=2, z=np.array([2.0, 4.0]), category=7),
        ]
        track = track_for([1.0, 1.0], (0, 2))  # alpha at slice 1 is 0.5
        plan = build_frame_plan(keyframes, track)
        assert plan.frames[1].z_mix.tolist() == [1.0, 2.0]
        assert plan.frames[1].class_weights == {7: 1.0}

    def test_alpha_zero_and_one_reproduce_keyframes(self):
        keyframes = [
            LatentKeyframe(slice_index=0, z=np.array([0.5, -0.5]), category=3),
            LatentKeyframe(slice_index=3, z=np.array([1.5, 2.5]), category=9),
        ]
        # tv [0, 0, 1]: alphas are [0, 0, 0, 1]
        track = track_for([0.0, 0.0, 1.0], (0, 3))
        plan = build_frame_plan(keyframes, track)
        for t in (1, 2):
            assert plan.frames[t].z_mix.tolist() == [0.5, -0.5]
            assert plan.frames[t].class_weights == {3: 1.0}
        assert plan.frames[3].z_mix.tolist() == [1.5, 2.5]
        assert plan.frames[3].class_weights == {9: 1.0}

    def test_cross_category_weights(self):
        keyframes = [
            LatentKeyframe(slice_index=0, z=np.zeros(2), category=1),
            LatentKeyframe(slice_index=4, z=np.ones(2), category=2),
        ]
        track = track_for([1.0, 1.0, 1.0, 1.0], (0, 4))
        plan = build_frame_plan(keyframes, track)
        assert plan.frames[1].class_weights == {1: 0.75, 2: 0.25}
        assert plan.frames[2].class_weights == {1: 0.5, 2: 0.5}
        assert plan.frames[4].class_weights == {2: 1.0}

    def test_frame_count_matches_slices(self):
        from helpers import random_inflection_indices

        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(3, 30))
            infl = InflectionSet(
                indices=random_inflection_indices(rng, n), rolling_length=1, delta=0.0
            )
            tv = TvSeries(values=rng.uniform(0, 1, n - 1), normalized=False)
            track = compute_alpha_track(tv, infl)
            keyframes = sample_keyframes(infl, small_spec(), seed=3)
            plan = build_frame_plan(keyframes, track)
            assert plan.num_frames == n

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_mixes_stay_between_keyframes_and_weights_sum_to_one(self, seed):
        from helpers import random_inflection_indices

        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 30))
        infl = InflectionSet(
            indices=random_inflection_indices(rng, n), rolling_length=1, delta=0.0
        )
        tv = TvSeries(values=rng.uniform(0, 1, n - 1), normalized=False)
        track = compute_alpha_track(tv, infl)
        keyframes = sample_keyframes(infl, small_spec(latent_dim=6), seed=seed)
        plan = build_frame_plan(keyframes, track)

        bounds = infl.indices
        for i in range(1, len(bounds)):
            a, b = keyframes[i - 1], keyframes[i]
            lo, hi = np.minimum(a.z, b.z), np.maximum(a.z, b.z)
            for t in range(bounds[i - 1] + 1, bounds[i] + 1):
                frame = plan.frames[t]
                assert ((frame.z_mix >= lo) & (frame.z_mix <= hi)).all()
                weights = frame.class_weights
                assert 1 <= len(weights) <= 2
                assert abs(sum(weights.values()) - 1.0) <= 1e-9
                assert all(0.0 <= w <= 1.0 for w in weights.values())
        for i, kf in enumerate(keyframes):
            frame = plan.frames[kf.slice_index]
            assert np.array_equal(frame.z_mix, kf.z)
            assert frame.class_weights == {kf.category: 1.0}

    def test_keyframe_count_mismatch_rejected(self):
        keyframes = [LatentKeyframe(slice_index=0, z=np.zeros(2), category=0)]
        track = track_for([1.0, 1.0], (0, 2))
        with pytest.raises(MisalignedInputsError):
            build_frame_plan(keyframes, track)

    def test_keyframe_slice_mismatch_rejected(self):
        keyframes = [
            LatentKeyframe(slice_index=0, z=np.zeros(2), category=0),
            LatentKeyframe(slice_index=3, z=np.ones(2), category=0),
        ]
        track = track_for([1.0, 1.0], (0, 2))
        with pytest.raises(MisalignedInputsError):
            build_frame_plan(keyframes, track)


class TestGeneratorSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(latent_dim=0),
            dict(num_classes=0),
            dict(image_size=(0, 8)),
            dict(truncation=0.0),
            dict(truncation=2.5),
        ],
    )
    def test_invalid_specs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            small_spec(**kwargs)
