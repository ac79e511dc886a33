"""Independent validation of the trajectory file contract (format version 1).

This module deliberately shares no code with the planning tool: the file
format is the interface, so the renderer re-checks every invariant it
relies on and rejects anything else with the offending field path.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

SUPPORTED_VERSION = "1"
WEIGHT_SUM_TOLERANCE = 1e-9


class SchemaError(Exception):
    """Trajectory file violates the contract; `field` names the culprit."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


@dataclass(frozen=True)
class TrajectorySpec:
    latent_dim: int
    num_classes: int
    image_size: tuple
    truncation: object


@dataclass(frozen=True)
class TrajectoryFrame:
    z: list
    class_weights: dict


@dataclass(frozen=True)
class TrajectoryDoc:
    spec: TrajectorySpec
    fps: float
    seed: int
    audio_sha256: str
    keyframes: list
    frames: list

    @property
    def num_frames(self) -> int:
        return len(self.frames)


def _get(doc, key, field):
    if key not in doc:
        raise SchemaError(field, "missing required field")
    return doc[key]


def _as_int(value, field, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SchemaError(field, f"must be >= {minimum}, got {value}")
    return value


def _as_number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(field, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SchemaError(field, f"must be finite, got {value!r}")
    return float(value)


def _parse_z(raw, latent_dim, field):
    if not isinstance(raw, list):
        raise SchemaError(field, "expected a list of numbers")
    if len(raw) != latent_dim:
        raise SchemaError(field, f"has {len(raw)} coordinates, spec.d is {latent_dim}")
    return [_as_number(x, f"{field}[{i}]") for i, x in enumerate(raw)]


def _parse_weights(raw, num_classes, field):
    if not isinstance(raw, dict) or not raw:
        raise SchemaError(field, "expected a non-empty object")
    if len(raw) > 2:
        raise SchemaError(field, f"{len(raw)} entries, at most 2 allowed")
    weights = {}
    for key, value in raw.items():
        try:
            category = int(key)
        except (TypeError, ValueError):
            raise SchemaError(field, f"class id {key!r} is not an integer")
        if not 0 <= category < num_classes:
            raise SchemaError(field, f"class id {category} out of range [0, {num_classes})")
        weight = _as_number(value, field)
        if not 0.0 <= weight <= 1.0:
            raise SchemaError(field, f"weight {weight!r} outside [0, 1]")
        weights[category] = weight
    if abs(sum(weights.values()) - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise SchemaError(field, f"weights sum to {sum(weights.values())!r}, expected 1")
    return weights


def load_trajectory(path) -> TrajectoryDoc:
    """Parse and validate; raises SchemaError or FileNotFoundError."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("(document)", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("(document)", "top level must be an object")

    version = _get(doc, "format_version", "format_version")
    if version != SUPPORTED_VERSION:
        raise SchemaError(
            "format_version", f"unsupported version {version!r} (renderer speaks {SUPPORTED_VERSION!r})"
        )

    raw_spec = _get(doc, "spec", "spec")
    if not isinstance(raw_spec, dict):
        raise SchemaError("spec", "expected an object")
    latent_dim = _as_int(_get(raw_spec, "d", "spec.d"), "spec.d", minimum=1)
    num_classes = _as_int(
        _get(raw_spec, "num_classes", "spec.num_classes"), "spec.num_classes", minimum=1
    )
    raw_size = _get(raw_spec, "image_size", "spec.image_size")
    if (
        not isinstance(raw_size, list)
        or len(raw_size) != 2
        or any(isinstance(x, bool) or not isinstance(x, int) or x < 1 for x in raw_size)
    ):
        raise SchemaError("spec.image_size", f"expected [width, height] >= 1, got {raw_size!r}")
    spec = TrajectorySpec(
        latent_dim=latent_dim,
        num_classes=num_classes,
        image_size=(raw_size[0], raw_size[1]),
        truncation=raw_spec.get("truncation"),
    )

    fps = _as_number(_get(doc, "fps", "fps"), "fps")
    if fps <= 0:
        raise SchemaError("fps", f"must be positive, got {fps!r}")
    seed = _as_int(_get(doc, "seed", "seed"), "seed")
    audio_sha256 = _get(doc, "audio_sha256", "audio_sha256")
    if not isinstance(audio_sha256, str):
        raise SchemaError("audio_sha256", "expected a string")

    raw_keyframes = _get(doc, "keyframes", "keyframes")
    if not isinstance(raw_keyframes, list) or not raw_keyframes:
        raise SchemaError("keyframes", "expected a non-empty list")
    keyframes = []
    previous = None
    for i, raw in enumerate(raw_keyframes):
        field = f"keyframes[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(field, "expected an object")
        slice_index = _as_int(_get(raw, "slice_index", f"{field}.slice_index"), f"{field}.slice_index", minimum=0)
        if i == 0 and slice_index != 0:
            raise SchemaError(f"{field}.slice_index", "first keyframe must sit at slice 0")
        if previous is not None and slice_index <= previous:
            raise SchemaError(f"{field}.slice_index", "keyframe slices must increase strictly")
        previous = slice_index
        category = _as_int(_get(raw, "category", f"{field}.category"), f"{field}.category")
        if not 0 <= category < num_classes:
            raise SchemaError(f"{field}.category", f"class id {category} out of range [0, {num_classes})")
        z = _parse_z(_get(raw, "z", f"{field}.z"), latent_dim, f"{field}.z")
        keyframes.append({"slice_index": slice_index, "z": z, "category": category})

    raw_frames = _get(doc, "frames", "frames")
    if not isinstance(raw_frames, list):
        raise SchemaError("frames", "expected a list")
    expected = keyframes[-1]["slice_index"] + 1
    if len(raw_frames) != expected:
        raise SchemaError(
            "frames", f"{len(raw_frames)} frames, expected {expected} (last keyframe slice + 1)"
        )
    frames = []
    for i, raw in enumerate(raw_frames):
        field = f"frames[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(field, "expected an object")
        z = _parse_z(_get(raw, "z", f"{field}.z"), latent_dim, f"{field}.z")
        weights = _parse_weights(
            _get(raw, "class_weights", f"{field}.class_weights"), num_classes, f"{field}.class_weights"
        )
        frames.append(TrajectoryFrame(z=z, class_weights=weights))

    return TrajectoryDoc(
        spec=spec,
        fps=fps,
        seed=seed,
        audio_sha256=audio_sha256,
        keyframes=keyframes,
        frames=frames,
    )
