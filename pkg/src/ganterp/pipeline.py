"""End-to-end orchestration: audio file in, trajectory + frames (+ video) out."""

import hashlib
import logging
import shlex
import subprocess
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import trajectory as traj_io
from .analysis import (
    compute_alpha_track,
    compute_tv_series,
    detect_inflection_points,
    analysis_table,
)
from .audio import compute_spectrogram, decode_audio
from .backend import ExternalBackend, MockBackend, render_all
from .errors import (
    EncoderFailedError,
    GanterpError,
    InvalidCategoryError,
    KeyframeIndexError,
)
from .planner import GeneratorSpec, build_frame_plan, sample_keyframes

__all__ = [
    "RunConfig",
    "RunReport",
    "run_pipeline",
    "analyze_only",
    "load_categories",
    "DEFAULT_ENCODER_TEMPLATE",
]

log = logging.getLogger(__name__)

# Placeholders: {fps} {frames} {audio} {out}. ffmpeg is the documented
# default; any encoder taking a printf-style frame pattern works.
DEFAULT_ENCODER_TEMPLATE = (
    "ffmpeg -y -framerate {fps} -i {frames} -i {audio} "
    "-c:v libx264 -pix_fmt yuv420p -c:a aac -shortest {out}"
)


@dataclass
class RunConfig:
    """All pipeline knobs; every numeric field must satisfy the stage it feeds."""

    audio_path: Path
    out_dir: Path
    fps: float = 30.0
    window_samples: int = 2048
    rolling_length: int = 30
    delta: float = 0.1
    normalize_tv: bool = True
    seed: int = 0
    categories_path: Optional[Path] = None
    backend: str = "mock"
    truncation: Optional[float] = None
    latent_dim: int = 128
    num_classes: int = 1000
    image_size: tuple = (128, 128)
    parallelism: int = 1
    encode: bool = False
    encoder_template: str = DEFAULT_ENCODER_TEMPLATE
    legacy_alpha_division: bool = False
    dump_analysis: Optional[Path] = None


@dataclass
class RunReport:
    """Counts and artifact paths from a completed run."""

    num_slices: int
    num_inflections: int
    frames_written: int
    trajectory_path: Path
    frames_dir: Path
    video_path: Optional[Path] = None
    analysis_path: Optional[Path] = None


@contextmanager
def _stage(name: str):
    """Tag any escaping pipeline error with the stage it came from."""
    try:
        yield
    except (GanterpError, FileNotFoundError, ValueError) as exc:
        if not hasattr(exc, "pipeline_stage"):
            exc.pipeline_stage = name
        raise


def load_categories(path, num_classes: int, num_keyframes: Optional[int] = None) -> dict:
    """Parse '<keyframe_index> <category_id>' lines into a sparse pin map.

    '#' starts a comment. Unpinned keyframes stay absent and get random
    categories downstream. Out-of-range category ids raise immediately;
    out-of-range keyframe ordinals raise only when the keyframe count is
    already known, otherwise they are kept and re-validated after
    inflection detection.
    """
    pins = {}
    for lineno, raw_line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(
                f"{path}:{lineno}: expected '<keyframe_index> <category_id>', got {raw_line!r}"
            )
        try:
            ordinal, category = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: both fields must be integers")
        if not 0 <= category < num_classes:
            raise InvalidCategoryError(
                f"{path}:{lineno}: category {category} out of range [0, {num_classes})"
            )
        if ordinal < 0:
            raise KeyframeIndexError(f"{path}:{lineno}: keyframe index {ordinal} is negative")
        if ordinal in pins:
            log.warning("%s:%d: keyframe %d pinned twice, keeping the later line", path, lineno, ordinal)
        pins[ordinal] = category
    if num_keyframes is not None:
        validate_category_pins(pins, num_keyframes)
    return pins


def validate_category_pins(pins: dict, num_keyframes: int) -> None:
    for ordinal in pins:
        if ordinal >= num_keyframes:
            raise KeyframeIndexError(
                f"category pinned at keyframe {ordinal}, but only "
                f"{num_keyframes} inflection points were detected"
            )


def _audio_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def analyze_only(config: RunConfig):
    """Run ingest and analysis, returning (tv, inflections, alpha track)."""
    with _stage("decode_audio"):
        audio = decode_audio(config.audio_path)
    with _stage("compute_spectrogram"):
        spec = compute_spectrogram(audio, config.fps, config.window_samples)
    with _stage("compute_tv_series"):
        tv = compute_tv_series(spec, normalize=config.normalize_tv)
    with _stage("detect_inflection_points"):
        inflections = detect_inflection_points(tv, config.rolling_length, config.delta)
    with _stage("compute_alpha_track"):
        track = compute_alpha_track(tv, inflections, config.legacy_alpha_division)
    return tv, inflections, track


def _encode_video(config: RunConfig, frames_dir: Path, out_path: Path) -> None:
    command = config.encoder_template.format(
        fps=config.fps,
        frames=shlex.quote(str(frames_dir / "frame_%06d.png")),
        audio=shlex.quote(str(config.audio_path)),
        out=shlex.quote(str(out_path)),
    )
    proc = subprocess.run(
        shlex.split(command), capture_output=True, text=True, check=False
    )
    if proc.returncode != 0:
        tail = (proc.stderr or proc.stdout or "").strip()[-2000:]
        raise EncoderFailedError(
            f"encoder exited with code {proc.returncode}: {tail}"
        )


def run_pipeline(config: RunConfig) -> RunReport:
    """Execute every stage and persist trajectory, frames and optional video.

    Reruns with identical config and inputs reproduce identical trajectory
    bytes, and identical frame bytes on the mock backend.
    """
    pins = None
    if config.categories_path is not None:
        with _stage("load_categories"):
            pins = load_categories(config.categories_path, config.num_classes)

    tv, inflections, track = analyze_only(config)

    analysis_path = None
    if config.dump_analysis is not None:
        with _stage("dump_analysis"):
            analysis_path = Path(config.dump_analysis)
            analysis_path.parent.mkdir(parents=True, exist_ok=True)
            analysis_path.write_text(analysis_table(tv, inflections, track))

    if pins is not None:
        with _stage("load_categories"):
            validate_category_pins(pins, len(inflections))

    gen_spec = GeneratorSpec(
        latent_dim=config.latent_dim,
        num_classes=config.num_classes,
        image_size=tuple(config.image_size),
        truncation=config.truncation,
    )
    with _stage("sample_keyframes"):
        keyframes = sample_keyframes(inflections, gen_spec, pins, config.seed)
    with _stage("build_frame_plan"):
        plan = build_frame_plan(keyframes, track)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trajectory_path = out_dir / "trajectory.json"
    with _stage("write_trajectory"):
        traj = traj_io.from_plan(
            gen_spec,
            config.fps,
            plan,
            config.seed,
            audio_sha256=_audio_digest(config.audio_path),
        )
        traj_io.write_trajectory(traj, trajectory_path)

    frames_dir = out_dir / "frames"
    with _stage("render_all"):
        backend = make_backend(config.backend, gen_spec)
        written = render_all(
            backend,
            plan,
            frames_dir,
            parallelism=config.parallelism,
            trajectory_path=trajectory_path,
        )

    video_path = None
    if config.encode:
        video_path = out_dir / "video.mp4"
        with _stage("encode"):
            _encode_video(config, frames_dir, video_path)

    return RunReport(
        num_slices=tv.num_slices,
        num_inflections=len(inflections),
        frames_written=len(written),
        trajectory_path=trajectory_path,
        frames_dir=frames_dir,
        video_path=video_path,
        analysis_path=analysis_path,
    )


def make_backend(selector: str, spec: GeneratorSpec):
    """Build a backend from its CLI selector: 'mock' or 'external:<command>'."""
    if selector == "mock":
        return MockBackend(spec)
    if selector.startswith("external:"):
        command = selector.split(":", 1)[1]
        if not command:
            raise ValueError("external backend selector needs a command path")
        return ExternalBackend(command)
    raise ValueError(f"unknown backend selector {selector!r} (use mock or external:PATH)")
