"""Batch rendering of trajectory frames to PNG files."""

from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .generator import ClassConditionalGenerator

FRAME_NAME = "frame_%06d.png"


class RenderError(Exception):
    """Rendering or frame writing failed; message names the frame index."""


def to_uint8(images: torch.Tensor) -> np.ndarray:
    """(B, 3, H, W) in [-1, 1] -> (B, H, W, 3) uint8."""
    arr = images.detach().cpu().numpy()
    arr = np.clip((arr + 1.0) * 0.5, 0.0, 1.0)
    arr = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    return arr.transpose(0, 2, 3, 1)


@torch.no_grad()
def render_frame_array(
    generator: ClassConditionalGenerator, z, class_weights: dict
) -> np.ndarray:
    """Render one frame; returns (height, width, 3) uint8."""
    device = generator.class_embedding.weight.device
    z_tensor = torch.as_tensor(np.asarray(z, dtype=np.float32), device=device)
    cond = generator.mix_class_embedding(class_weights).to(device)
    images = generator(z_tensor.unsqueeze(0), cond.unsqueeze(0))
    return to_uint8(images)[0]


@torch.no_grad()
def render_trajectory(
    doc, generator: ClassConditionalGenerator, out_dir, batch_size: int = 8
) -> list:
    """Render every frame of a validated trajectory to out_dir.

    Frames are processed in batches but written under their own indices,
    so batch size never changes names or counts.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise RenderError(f"frame 0: cannot create output directory {out_dir}: {exc}")

    device = generator.class_embedding.weight.device
    paths = []
    for start in range(0, doc.num_frames, batch_size):
        batch = doc.frames[start : start + batch_size]
        try:
            z = torch.as_tensor(
                np.asarray([frame.z for frame in batch], dtype=np.float32),
                device=device,
            )
            cond = torch.stack(
                [generator.mix_class_embedding(frame.class_weights) for frame in batch]
            ).to(device)
            arrays = to_uint8(generator(z, cond))
        except (RuntimeError, ValueError) as exc:
            raise RenderError(f"frame {start}: generator forward failed: {exc}") from exc
        for offset, array in enumerate(arrays):
            index = start + offset
            path = out_dir / (FRAME_NAME % index)
            try:
                Image.fromarray(array, mode="RGB").save(path, format="PNG")
            except OSError as exc:
                raise RenderError(f"frame {index}: cannot write {path}: {exc}") from exc
            paths.append(path)
    return paths
