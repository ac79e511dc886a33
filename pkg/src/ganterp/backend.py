"""Generator backends: a deterministic procedural mock and an external process.

The mock backend turns a (latent, class weights) pair into a smooth
sinusoidal image so the whole pipeline is testable bit-exactly without any
ML runtime. The external backend delegates a complete trajectory file to a
renderer process, per the contract: the renderer is invoked with the
trajectory path and the output directory, must exit 0 and must produce
exactly one PNG per planned frame.
"""

import concurrent.futures
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from . import kernels
from .errors import BackendUnavailableError, DimensionMismatchError, RenderIoError
from .planner import FramePlan, GeneratorSpec

__all__ = [
    "FrameImage",
    "MockBackend",
    "ExternalBackend",
    "render_frame",
    "render_all",
    "frame_filename",
]

FRAME_NAME = "frame_%06d.png"


def frame_filename(index: int) -> str:
    return FRAME_NAME % index


@dataclass(frozen=True)
class FrameImage:
    """Rendered RGB8 raster; pixels shaped (height, width, 3)."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError("pixel buffer must be height x width x 3")
        if self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be 8-bit")

    def save_png(self, path) -> None:
        Image.fromarray(self.pixels, mode="RGB").save(path, format="PNG")


def _validate_weights(class_weights: dict, num_classes: int) -> None:
    if not class_weights:
        raise DimensionMismatchError("class_weights must not be empty")
    if len(class_weights) > 2:
        raise DimensionMismatchError("class_weights supports at most 2 entries")
    total = 0.0
    for cat, weight in class_weights.items():
        if not 0 <= cat < num_classes:
            raise DimensionMismatchError(f"class id {cat} out of range")
        if not np.isfinite(weight) or not 0.0 <= weight <= 1.0:
            raise DimensionMismatchError(f"class weight {weight} outside [0, 1]")
        total += weight
    if abs(total - 1.0) > 1e-9:
        raise DimensionMismatchError(f"class weights sum to {total}, expected 1")


class MockBackend:
    """Pure procedural generator: no state, no clock, no RNG.

    Pixel (x, y) channel k is 0.5 + 0.5*sin(phase) quantized to 8 bits,
    where the phase sums z[j]*cos(.) over a fixed 9-direction plane-wave
    basis plus a fixed golden-angle offset per class (see kernels module
    for the exact formula). Nearby latents therefore give visually nearby
    images, and class identity shifts the whole field's phase.
    """

    concurrent_safe = True

    def __init__(self, spec: GeneratorSpec):
        self.spec = spec

    def render(self, z_mix: np.ndarray, class_weights: dict) -> FrameImage:
        z_mix = np.asarray(z_mix, dtype=np.float64)
        if z_mix.shape != (self.spec.latent_dim,):
            raise DimensionMismatchError(
                f"latent of shape {z_mix.shape}, backend expects ({self.spec.latent_dim},)"
            )
        if not np.isfinite(z_mix).all():
            raise DimensionMismatchError("latent vector contains non-finite values")
        _validate_weights(class_weights, self.spec.num_classes)
        offset = 0.0
        for cat in sorted(class_weights):
            offset += class_weights[cat] * kernels.class_phase(cat)
        width, height = self.spec.image_size
        phase = kernels.mock_frame_phase(z_mix, offset, width, height)
        values = 0.5 + 0.5 * np.sin(phase)
        pixels = np.floor(np.clip(values, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
        return FrameImage(width=width, height=height, pixels=pixels)


class ExternalBackend:
    """Renderer run as a child process, one trajectory per invocation."""

    concurrent_safe = False

    def __init__(self, command: str):
        self.command = str(command)

    def render_trajectory_file(
        self, trajectory_path, out_dir, expected_frames: int
    ) -> list:
        """Invoke the renderer and verify it honored the frame contract."""
        argv = [self.command, str(trajectory_path), str(out_dir)]
        if self.command.endswith(".py"):
            argv = [sys.executable, *argv]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, check=False)
        except OSError as exc:
            raise BackendUnavailableError(
                f"could not start renderer {self.command}: {exc}"
            ) from exc
        if proc.returncode != 0:
            tail = (proc.stderr or proc.stdout or "").strip()[-2000:]
            raise BackendUnavailableError(
                f"renderer exited with code {proc.returncode}: {tail}"
            )
        paths = [Path(out_dir) / frame_filename(i) for i in range(expected_frames)]
        missing = [p.name for p in paths if not p.is_file()]
        if missing:
            raise BackendUnavailableError(
                f"renderer exited 0 but left {len(missing)} frame(s) missing "
                f"(first: {missing[0]})"
            )
        return paths


def render_frame(backend, z_mix: np.ndarray, class_weights: dict) -> FrameImage:
    """Render a single mixed frame on an in-process backend."""
    if not hasattr(backend, "render"):
        raise BackendUnavailableError(
            "backend renders whole trajectory files, not single frames"
        )
    return backend.render(z_mix, class_weights)


def _check_writable(out_dir: Path) -> None:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        raise RenderIoError(f"output directory {out_dir} is not writable: {exc}")


def render_all(
    backend,
    plan: FramePlan,
    out_dir,
    parallelism: int = 1,
    trajectory_path=None,
) -> list:
    """Render every planned frame to out_dir/frame_%06d.png.

    The output bytes do not depend on the parallelism level: frames are
    independent pure renders and are always written under their own index.
    External backends consume the persisted trajectory instead of the
    in-memory plan and run serialized.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    out_dir = Path(out_dir)
    _check_writable(out_dir)

    if isinstance(backend, ExternalBackend):
        if trajectory_path is None:
            raise BackendUnavailableError(
                "external backend needs the trajectory file path"
            )
        return backend.render_trajectory_file(
            trajectory_path, out_dir, plan.num_frames
        )

    paths = [out_dir / frame_filename(i) for i in range(plan.num_frames)]
    written = []

    def _render_one(index: int) -> Path:
        image = backend.render(plan.frames[index].z_mix, plan.frames[index].class_weights)
        try:
            image.save_png(paths[index])
        except OSError as exc:
            raise RenderIoError(
                f"failed writing frame {index} to {paths[index]}: {exc}",
                written=written,
            ) from exc
        return paths[index]

    workers = parallelism if backend.concurrent_safe else 1
    if workers == 1:
        for i in range(plan.num_frames):
            written.append(_render_one(i))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_render_one, i): i for i in range(plan.num_frames)}
            for future in concurrent.futures.as_completed(futures):
                written.append(future.result())
        written.sort()
    return paths
