"""Renderer command line: render.py <trajectory> <out_dir> [options]."""

import argparse
import sys

from .generator import ModelLoadError, load_generator
from .rendering import RenderError, render_trajectory
from .schema import SchemaError, load_trajectory

EXIT_SCHEMA = 2
EXIT_MODEL_LOAD = 3
EXIT_RENDER = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render.py",
        description="Render a trajectory file with a class-conditional generator.",
    )
    parser.add_argument("trajectory", help="trajectory JSON file")
    parser.add_argument("out_dir", help="directory for frame_%%06d.png files")
    parser.add_argument("--device", default="cpu", help="torch device (default cpu)")
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument(
        "--model",
        default="seeded:0",
        help="seeded:<int> for a deterministic random-init generator, "
        "weights:<path> for locally saved pretrained weights",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.device.startswith("cpu"):
        # multi-threaded CPU convolutions may split reductions across
        # threads in arrival order; one thread makes CPU renders
        # reproducible run to run (GPU renders promise no such thing)
        import torch

        torch.set_num_threads(1)
    try:
        doc = load_trajectory(args.trajectory)
    except FileNotFoundError:
        print(f"error: trajectory file not found: {args.trajectory}", file=sys.stderr)
        return EXIT_SCHEMA
    except SchemaError as exc:
        print(f"error: schema violation: {exc}", file=sys.stderr)
        return EXIT_SCHEMA

    try:
        generator = load_generator(
            latent_dim=doc.spec.latent_dim,
            num_classes=doc.spec.num_classes,
            image_size=doc.spec.image_size,
            selector=args.model,
            device=args.device,
        )
    except ModelLoadError as exc:
        print(f"error: model load failed: {exc}", file=sys.stderr)
        return EXIT_MODEL_LOAD

    try:
        paths = render_trajectory(doc, generator, args.out_dir, args.batch_size)
    except (RenderError, ValueError) as exc:
        print(f"error: render failed: {exc}", file=sys.stderr)
        return EXIT_RENDER

    print(f"rendered {len(paths)} frames to {args.out_dir}")
    return 0
