"""Trajectory file: the persisted plan that decouples analysis from rendering.

A trajectory is a single JSON document holding the generator spec, the
keyframes and the per-frame mixtures, with reals serialized at full
precision (shortest round-trip decimal), so write -> read is the identity
and external renderers consume exactly what the planner produced.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import MalformedTrajectoryError, VersionMismatchError
from .planner import FramePlan, GeneratorSpec, LatentKeyframe, PlannedFrame

__all__ = ["Trajectory", "write_trajectory", "read_trajectory", "FORMAT_VERSION"]

FORMAT_VERSION = "1"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Generator spec, playback rate, keyframes, frames and provenance."""

    spec: GeneratorSpec
    fps: float
    keyframes: tuple
    frames: tuple
    seed: int
    audio_sha256: str = ""
    tool_version: str = __version__

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if not self.keyframes:
            raise ValueError("trajectory needs at least one keyframe")
        if len(self.frames) != self.keyframes[-1].slice_index + 1:
            raise ValueError("frame count must equal last keyframe slice + 1")

    @property
    def num_frames(self) -> int:
        return len(self.frames)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        if (
            self.spec != other.spec
            or self.fps != other.fps
            or self.seed != other.seed
            or self.audio_sha256 != other.audio_sha256
            or self.tool_version != other.tool_version
            or len(self.keyframes) != len(other.keyframes)
            or len(self.frames) != len(other.frames)
        ):
            return False
        for a, b in zip(self.keyframes, other.keyframes):
            if (
                a.slice_index != b.slice_index
                or a.category != b.category
                or not np.array_equal(a.z, b.z)
            ):
                return False
        for a, b in zip(self.frames, other.frames):
            if a.class_weights != b.class_weights or not np.array_equal(
                a.z_mix, b.z_mix
            ):
                return False
        return True


def from_plan(
    spec: GeneratorSpec,
    fps: float,
    plan: FramePlan,
    seed: int,
    audio_sha256: str = "",
) -> Trajectory:
    return Trajectory(
        spec=spec,
        fps=fps,
        keyframes=plan.keyframes,
        frames=plan.frames,
        seed=seed,
        audio_sha256=audio_sha256,
    )


def write_trajectory(traj: Trajectory, path) -> None:
    """Serialize to JSON with deterministic layout and full float precision."""
    doc = {
        "format_version": FORMAT_VERSION,
        "tool_version": traj.tool_version,
        "audio_sha256": traj.audio_sha256,
        "seed": traj.seed,
        "fps": traj.fps,
        "spec": {
            "d": traj.spec.latent_dim,
            "num_classes": traj.spec.num_classes,
            "image_size": list(traj.spec.image_size),
            "truncation": traj.spec.truncation,
        },
        "keyframes": [
            {
                "slice_index": kf.slice_index,
                "z": [float(x) for x in kf.z],
                "category": kf.category,
            }
            for kf in traj.keyframes
        ],
        "frames": [
            {
                "z": [float(x) for x in frame.z_mix],
                "class_weights": {
                    str(cat): float(frame.class_weights[cat])
                    for cat in sorted(frame.class_weights)
                },
            }
            for frame in traj.frames
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")


def _require(doc, key, kind, field):
    if key not in doc:
        raise MalformedTrajectoryError(field, "missing required field")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise MalformedTrajectoryError(field, f"expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedTrajectoryError(field, f"expected an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise MalformedTrajectoryError(
            field, f"expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _parse_vector(values, dim, field) -> np.ndarray:
    if not isinstance(values, list):
        raise MalformedTrajectoryError(field, "expected a list of numbers")
    if len(values) != dim:
        raise MalformedTrajectoryError(
            field, f"latent has {len(values)} coordinates, spec.d is {dim}"
        )
    vec = np.empty(dim)
    for i, x in enumerate(values):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not np.isfinite(x):
            raise MalformedTrajectoryError(f"{field}[{i}]", f"not a finite number: {x!r}")
        vec[i] = x
    return vec


def _parse_weights(raw, num_classes, field) -> dict:
    if not isinstance(raw, dict) or not raw:
        raise MalformedTrajectoryError(field, "expected a non-empty object")
    if len(raw) > 2:
        raise MalformedTrajectoryError(field, f"{len(raw)} entries, at most 2 allowed")
    weights = {}
    total = 0.0
    for key, value in raw.items():
        try:
            cat = int(key)
        except ValueError:
            raise MalformedTrajectoryError(field, f"class id {key!r} is not an integer")
        if not 0 <= cat < num_classes:
            raise MalformedTrajectoryError(
                field, f"class id {cat} out of range [0, {num_classes})"
            )
        if (
            isinstance(value, bool)
            or not isinstance(value, (int, float))
            or not np.isfinite(value)
            or not 0.0 <= value <= 1.0
        ):
            raise MalformedTrajectoryError(field, f"weight {value!r} outside [0, 1]")
        weights[cat] = float(value)
        total += float(value)
    if abs(total - 1.0) > 1e-9:
        raise MalformedTrajectoryError(field, f"weights sum to {total!r}, expected 1")
    return weights


def read_trajectory(path) -> Trajectory:
    """Parse and fully validate a trajectory file.

    Raises MalformedTrajectoryError naming the offending field, or
    VersionMismatchError for an unknown format_version.
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTrajectoryError("(document)", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedTrajectoryError("(document)", "top level must be an object")

    version = _require(doc, "format_version", str, "format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"format_version {version!r} not supported (expected {FORMAT_VERSION!r})"
        )

    tool_version = _require(doc, "tool_version", str, "tool_version")
    audio_sha256 = _require(doc, "audio_sha256", str, "audio_sha256")
    seed = _require(doc, "seed", int, "seed")
    fps = _require(doc, "fps", float, "fps")
    if fps <= 0:
        raise MalformedTrajectoryError("fps", f"must be positive, got {fps!r}")

    raw_spec = _require(doc, "spec", dict, "spec")
    dim = _require(raw_spec, "d", int, "spec.d")
    if dim < 1:
        raise MalformedTrajectoryError("spec.d", f"must be >= 1, got {dim}")
    num_classes = _require(raw_spec, "num_classes", int, "spec.num_classes")
    if num_classes < 1:
        raise MalformedTrajectoryError("spec.num_classes", f"must be >= 1, got {num_classes}")
    image_size = _require(raw_spec, "image_size", list, "spec.image_size")
    if (
        len(image_size) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in image_size)
        or min(image_size) < 1
    ):
        raise MalformedTrajectoryError(
            "spec.image_size", f"expected [width, height] >= 1, got {image_size!r}"
        )
    truncation = raw_spec.get("truncation")
    if "truncation" not in raw_spec:
        raise MalformedTrajectoryError("spec.truncation", "missing required field")
    if truncation is not None:
        if isinstance(truncation, bool) or not isinstance(truncation, (int, float)):
            raise MalformedTrajectoryError(
                "spec.truncation", f"expected a number or null, got {truncation!r}"
            )
        if not 0 < truncation <= 2:
            raise MalformedTrajectoryError(
                "spec.truncation", f"must lie in (0, 2], got {truncation!r}"
            )
    spec = GeneratorSpec(
        latent_dim=dim,
        num_classes=num_classes,
        image_size=tuple(image_size),
        truncation=truncation,
    )

    raw_keyframes = _require(doc, "keyframes", list, "keyframes")
    if not raw_keyframes:
        raise MalformedTrajectoryError("keyframes", "must hold at least one keyframe")
    keyframes = []
    previous_index = None
    for i, raw in enumerate(raw_keyframes):
        field = f"keyframes[{i}]"
        if not isinstance(raw, dict):
            raise MalformedTrajectoryError(field, "expected an object")
        slice_index = _require(raw, "slice_index", int, f"{field}.slice_index")
        if i == 0 and slice_index != 0:
            raise MalformedTrajectoryError(f"{field}.slice_index", "first keyframe must sit at slice 0")
        if previous_index is not None and slice_index <= previous_index:
            raise MalformedTrajectoryError(
                f"{field}.slice_index", "keyframe slices must be strictly increasing"
            )
        previous_index = slice_index
        z = _parse_vector(raw.get("z"), dim, f"{field}.z")
        category = _require(raw, "category", int, f"{field}.category")
        if not 0 <= category < num_classes:
            raise MalformedTrajectoryError(
                f"{field}.category", f"class id {category} out of range [0, {num_classes})"
            )
        keyframes.append(LatentKeyframe(slice_index=slice_index, z=z, category=category))

    raw_frames = _require(doc, "frames", list, "frames")
    expected = keyframes[-1].slice_index + 1
    if len(raw_frames) != expected:
        raise MalformedTrajectoryError(
            "frames", f"{len(raw_frames)} frames, expected {expected} (last keyframe slice + 1)"
        )
    frames = []
    for i, raw in enumerate(raw_frames):
        field = f"frames[{i}]"
        if not isinstance(raw, dict):
            raise MalformedTrajectoryError(field, "expected an object")
        z = _parse_vector(raw.get("z"), dim, f"{field}.z")
        weights = _parse_weights(raw.get("class_weights"), num_classes, f"{field}.class_weights")
        frames.append(PlannedFrame(z_mix=z, class_weights=weights))

    for i, kf in enumerate(keyframes):
        frame = frames[kf.slice_index]
        if frame.class_weights != {kf.category: 1.0}:
            raise MalformedTrajectoryError(
                f"frames[{kf.slice_index}].class_weights",
                f"keyframe slice must carry full weight on class {kf.category}",
            )
        if not np.array_equal(frame.z_mix, kf.z):
            raise MalformedTrajectoryError(
                f"frames[{kf.slice_index}].z",
                f"keyframe slice must reproduce keyframes[{i}].z exactly",
            )

    return Trajectory(
        spec=spec,
        fps=fps,
        keyframes=tuple(keyframes),
        frames=tuple(frames),
        seed=seed,
        audio_sha256=audio_sha256,
        tool_version=tool_version,
    )
