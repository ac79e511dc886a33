"""Class-conditional generator and model loading.

The architecture follows the BigGAN family in shape: a latent vector is
concatenated with a learned class embedding, projected to a 4x4 feature
map and upsampled with convolution blocks to the target resolution.
Conditioning consumes an embedding *vector*, so interpolating categories
means forming a convex combination of embedding rows before the forward
pass; a single-class weight of 1.0 reproduces direct conditioning exactly.

Model selectors:

* ``seeded:<int>``   deterministic random initialization; no downloads,
                     used for contract tests and offline runs
* ``weights:<path>`` load a locally saved state dict (pretrained weights)

GroupNorm keeps every operation per-sample, so output frames do not
depend on how they were batched.
"""

import math

import torch
from torch import nn

EMBED_DIM = 32
BASE_CHANNELS = 32
MAX_CHANNELS = 128


class ModelLoadError(Exception):
    """Generator weights could not be constructed or loaded."""


class ClassConditionalGenerator(nn.Module):
    def __init__(self, latent_dim: int, num_classes: int, image_size: tuple):
        super().__init__()
        self.latent_dim = latent_dim
        self.num_classes = num_classes
        self.image_size = tuple(image_size)

        width, height = self.image_size
        target = max(width, height, 4)
        self.num_blocks = max(1, math.ceil(math.log2(target / 4)))

        self.class_embedding = nn.Embedding(num_classes, EMBED_DIM)
        channels = [
            min(MAX_CHANNELS, BASE_CHANNELS * 2 ** (self.num_blocks - i))
            for i in range(self.num_blocks + 1)
        ]
        self.project = nn.Linear(latent_dim + EMBED_DIM, channels[0] * 4 * 4)
        blocks = []
        for i in range(self.num_blocks):
            blocks.append(
                nn.Sequential(
                    nn.Upsample(scale_factor=2, mode="nearest"),
                    nn.Conv2d(channels[i], channels[i + 1], 3, padding=1),
                    nn.GroupNorm(num_groups=4, num_channels=channels[i + 1]),
                    nn.SiLU(),
                )
            )
        self.blocks = nn.ModuleList(blocks)
        self.to_rgb = nn.Conv2d(channels[-1], 3, 3, padding=1)

    def mix_class_embedding(self, class_weights: dict) -> torch.Tensor:
        """Convex combination of embedding rows; {c: 1.0} gives row c exactly."""
        mixed = torch.zeros(EMBED_DIM)
        for category, weight in class_weights.items():
            mixed = mixed + weight * self.class_embedding.weight[category]
        return mixed

    def forward(self, z: torch.Tensor, class_vector: torch.Tensor) -> torch.Tensor:
        """(B, latent_dim) x (B, EMBED_DIM) -> (B, 3, height, width) in [-1, 1]."""
        h = self.project(torch.cat([z, class_vector], dim=1))
        h = h.view(z.shape[0], -1, 4, 4)
        for block in self.blocks:
            h = block(h)
        rgb = torch.tanh(self.to_rgb(h))
        width, height = self.image_size
        if rgb.shape[-2:] != (height, width):
            rgb = nn.functional.interpolate(
                rgb, size=(height, width), mode="bilinear", align_corners=False
            )
        return rgb


def load_generator(
    latent_dim: int,
    num_classes: int,
    image_size: tuple,
    selector: str = "seeded:0",
    device: str = "cpu",
) -> ClassConditionalGenerator:
    """Build a generator per the selector; raises ModelLoadError on failure."""
    kind, _, argument = selector.partition(":")
    if kind == "seeded":
        try:
            seed = int(argument or "0")
        except ValueError:
            raise ModelLoadError(f"seeded selector needs an integer, got {argument!r}")
        torch.manual_seed(seed)
        model = ClassConditionalGenerator(latent_dim, num_classes, image_size)
    elif kind == "weights":
        if not argument:
            raise ModelLoadError("weights selector needs a file path")
        model = ClassConditionalGenerator(latent_dim, num_classes, image_size)
        try:
            state = torch.load(argument, map_location="cpu", weights_only=True)
            model.load_state_dict(state)
        except (OSError, RuntimeError, ValueError) as exc:
            raise ModelLoadError(f"cannot load weights from {argument}: {exc}") from exc
    else:
        raise ModelLoadError(
            f"unknown model selector {selector!r} (use seeded:<int> or weights:<path>)"
        )
    try:
        model = model.to(device)
    except (RuntimeError, AssertionError) as exc:
        raise ModelLoadError(f"cannot move model to device {device!r}: {exc}") from exc
    model.eval()
    return model
