"""Latent keyframe sampling and per-frame interpolation planning.

Keyframes anchor a (latent, category) pair at every inflection point;
the frame plan linearly mixes consecutive keyframes using the alpha
track, keeping the category mixture as a 2-sparse convex weight vector so
the rendering backend decides how class conditioning is embedded.
"""

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .analysis import AlphaTrack, InflectionSet
from .errors import InvalidCategoryError, KeyframeIndexError, MisalignedInputsError

__all__ = [
    "GeneratorSpec",
    "LatentKeyframe",
    "PlannedFrame",
    "FramePlan",
    "sample_keyframes",
    "build_frame_plan",
]

CategoryPins = Union[Mapping[int, int], Sequence[Optional[int]], None]


@dataclass(frozen=True)
class GeneratorSpec:
    """Capabilities of a class-conditional generator backend."""

    latent_dim: int
    num_classes: int
    image_size: tuple
    truncation: Optional[float] = None

    def __post_init__(self):
        if self.latent_dim < 1:
            raise ValueError("latent_dim must be >= 1")
        if self.num_classes < 1:
            raise ValueError("num_classes must be >= 1")
        width, height = self.image_size
        if width < 1 or height < 1:
            raise ValueError("image_size must be positive")
        if self.truncation is not None and not 0 < self.truncation <= 2:
            raise ValueError("truncation must lie in (0, 2]")


@dataclass(frozen=True)
class LatentKeyframe:
    """A (latent, category) anchor at one inflection slice."""

    slice_index: int
    z: np.ndarray
    category: int

    def __post_init__(self):
        if not np.isfinite(self.z).all():
            raise ValueError("latent vector must be finite")
        if self.category < 0:
            raise InvalidCategoryError(f"category {self.category} is negative")


@dataclass(frozen=True)
class PlannedFrame:
    """Mixed latent plus a sparse convex class-weight vector (<= 2 entries)."""

    z_mix: np.ndarray
    class_weights: dict


@dataclass(frozen=True)
class FramePlan:
    """One PlannedFrame per spectrogram slice, keyframes reproduced exactly."""

    frames: tuple
    keyframes: tuple

    @property
    def num_frames(self) -> int:
        return len(self.frames)


def _normalize_pins(categories: CategoryPins, count: int) -> dict:
    if categories is None:
        return {}
    if isinstance(categories, Mapping):
        pins = {int(k): int(v) for k, v in categories.items()}
    else:
        if len(categories) > count:
            raise MisalignedInputsError(
                f"{len(categories)} pinned categories for {count} keyframes"
            )
        pins = {i: int(v) for i, v in enumerate(categories) if v is not None}
    for ordinal in pins:
        if not 0 <= ordinal < count:
            raise KeyframeIndexError(
                f"category pinned at keyframe {ordinal}, but only {count} keyframes exist"
            )
    return pins


def sample_keyframes(
    inflections: InflectionSet,
    spec: GeneratorSpec,
    categories: CategoryPins = None,
    seed: int = 0,
) -> list:
    """Draw one keyframe per inflection point from a seeded stream.

    Latents come from a standard normal in latent_dim dimensions; when the
    spec carries a truncation threshold, coordinates with magnitude above
    it are redrawn until they fit (the usual truncation trick). Category
    pins are used verbatim where present, all other categories are drawn
    uniformly from the same stream, so identical inputs and seed give an
    identical keyframe list.
    """
    pins = _normalize_pins(categories, len(inflections))
    for ordinal, cat in pins.items():
        if not 0 <= cat < spec.num_classes:
            raise InvalidCategoryError(
                f"category {cat} out of range [0, {spec.num_classes}) "
                f"(pinned at keyframe {ordinal})"
            )
    rng = np.random.default_rng(seed)
    keyframes = []
    for ordinal, slice_index in enumerate(inflections.indices):
        z = rng.standard_normal(spec.latent_dim)
        if spec.truncation is not None:
            outside = np.abs(z) > spec.truncation
            while outside.any():
                z[outside] = rng.standard_normal(int(outside.sum()))
                outside = np.abs(z) > spec.truncation
        if ordinal in pins:
            category = pins[ordinal]
        else:
            category = int(rng.integers(0, spec.num_classes))
        keyframes.append(
            LatentKeyframe(slice_index=int(slice_index), z=z, category=category)
        )
    return keyframes


def _mix_weights(cat_a: int, cat_b: int, alpha: float) -> dict:
    if cat_a == cat_b or alpha == 0.0:
        return {cat_a: 1.0}
    if alpha == 1.0:
        return {cat_b: 1.0}
    return {cat_a: 1.0 - alpha, cat_b: alpha}


def build_frame_plan(keyframes: Sequence[LatentKeyframe], track: AlphaTrack) -> FramePlan:
    """Expand keyframes and alphas into one mixed frame per slice.

    Segment (p, q] between keyframes a and b maps slice t to
    z_mix = (1 - alpha[t]) * a.z + alpha[t] * b.z with class weights
    {a.category: 1 - alpha[t], b.category: alpha[t]} (collapsed when the
    categories match). Frames at inflection slices copy their keyframe
    outright, so boundaries are bit-exact; alphas are clamped into [0, 1]
    (only the legacy division mode can leave that range) and each mixed
    coordinate is kept inside its bounding keyframe coordinates.
    """
    bounds = track.segment_bounds.indices
    if len(keyframes) != len(bounds):
        raise MisalignedInputsError(
            f"{len(keyframes)} keyframes for {len(bounds)} inflection points"
        )
    for kf, expected in zip(keyframes, bounds):
        if kf.slice_index != expected:
            raise MisalignedInputsError(
                f"keyframe at slice {kf.slice_index} does not match "
                f"inflection index {expected}"
            )

    frames = [None] * track.segment_bounds.num_slices
    frames[0] = PlannedFrame(
        z_mix=keyframes[0].z.copy(), class_weights={keyframes[0].category: 1.0}
    )
    for i in range(1, len(keyframes)):
        prev, nxt = keyframes[i - 1], keyframes[i]
        lo = np.minimum(prev.z, nxt.z)
        hi = np.maximum(prev.z, nxt.z)
        p, q = bounds[i - 1], bounds[i]
        for t in range(p + 1, q + 1):
            if t == q:
                frames[t] = PlannedFrame(
                    z_mix=nxt.z.copy(), class_weights={nxt.category: 1.0}
                )
                continue
            alpha = min(max(float(track.alphas[t]), 0.0), 1.0)
            if alpha == 0.0:
                z_mix = prev.z.copy()
            elif alpha == 1.0:
                z_mix = nxt.z.copy()
            else:
                z_mix = np.clip((1.0 - alpha) * prev.z + alpha * nxt.z, lo, hi)
            frames[t] = PlannedFrame(
                z_mix=z_mix, class_weights=_mix_weights(prev.category, nxt.category, alpha)
            )
    return FramePlan(frames=tuple(frames), keyframes=tuple(keyframes))
