"""Command line interface: run, analyze, render."""

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import analysis_table
from .backend import render_all
from .errors import (
    AudioTooShortError,
    BackendUnavailableError,
    DimensionMismatchError,
    EmptyAudioError,
    EncoderFailedError,
    GanterpError,
    InvalidCategoryError,
    KeyframeIndexError,
    MalformedTrajectoryError,
    MisalignedInputsError,
    RenderIoError,
    UnsupportedFormatError,
    VersionMismatchError,
)
from .pipeline import (
    DEFAULT_ENCODER_TEMPLATE,
    RunConfig,
    analyze_only,
    make_backend,
    run_pipeline,
)
from .planner import FramePlan
from .trajectory import read_trajectory

# Each failure class owns one exit code so scripts can branch on the cause.
EXIT_CODES = {
    FileNotFoundError: 3,
    UnsupportedFormatError: 4,
    EmptyAudioError: 5,
    AudioTooShortError: 6,
    InvalidCategoryError: 7,
    KeyframeIndexError: 8,
    MisalignedInputsError: 9,
    DimensionMismatchError: 10,
    BackendUnavailableError: 11,
    MalformedTrajectoryError: 12,
    VersionMismatchError: 13,
    RenderIoError: 14,
    EncoderFailedError: 15,
}
EXIT_USAGE = 2
EXIT_UNEXPECTED = 1


def _parse_image_size(text: str) -> tuple:
    try:
        width, height = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    return width, height


def _add_analysis_args(parser):
    parser.add_argument("--audio", required=True, type=Path, help="input WAV file")
    parser.add_argument("--fps", type=float, default=30.0, help="video frame rate")
    parser.add_argument(
        "--window", type=int, default=2048, dest="window_samples",
        help="spectrogram window length (power of two)",
    )
    parser.add_argument(
        "--rolling-length", type=int, default=30,
        help="rolling window length L for inflection detection (slices)",
    )
    parser.add_argument(
        "--delta", type=float, default=0.1,
        help="inflection threshold on the (normalized) TV scale",
    )
    parser.add_argument(
        "--no-normalize-tv", action="store_false", dest="normalize_tv",
        help="keep the raw TV scale instead of dividing by its maximum",
    )
    parser.add_argument(
        "--legacy-alpha-division", action="store_true",
        help="divide segment cumulative sums by segment length (published variant)",
    )


def _add_generator_args(parser):
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument(
        "--categories", type=Path, default=None, dest="categories_path",
        help="file pinning '<keyframe_index> <category_id>' lines",
    )
    parser.add_argument(
        "--backend", default="mock", help="mock or external:<renderer command>"
    )
    parser.add_argument(
        "--truncation", type=float, default=None,
        help="resample latent coordinates beyond this magnitude (0, 2]",
    )
    parser.add_argument("--latent-dim", type=int, default=128)
    parser.add_argument("--num-classes", type=int, default=1000)
    parser.add_argument(
        "--image-size", type=_parse_image_size, default=(128, 128), metavar="WxH"
    )
    parser.add_argument(
        "--parallelism", type=int, default=1, help="frame render workers"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ganterp",
        description="Plan and render audio-reactive latent-space videos.",
    )
    parser.add_argument("--version", action="version", version=f"ganterp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="full pipeline: audio to trajectory and frames")
    _add_analysis_args(run)
    _add_generator_args(run)
    run.add_argument("--out", required=True, type=Path, dest="out_dir")
    run.add_argument(
        "--encode", action="store_true",
        help="mux frames with the source audio via the encoder template",
    )
    run.add_argument(
        "--encoder-template", default=DEFAULT_ENCODER_TEMPLATE,
        help="encoder command with {fps} {frames} {audio} {out} placeholders",
    )
    run.add_argument(
        "--dump-analysis", type=Path, default=None,
        help="write the per-slice tv/inflection/alpha table to this file",
    )

    analyze = sub.add_parser("analyze", help="stop after the alpha track, emit the table")
    _add_analysis_args(analyze)
    analyze.add_argument(
        "--dump-analysis", type=Path, default=None,
        help="write the table here instead of stdout",
    )

    render = sub.add_parser("render", help="render an existing trajectory file")
    render.add_argument("--trajectory", required=True, type=Path)
    render.add_argument("--out", required=True, type=Path, dest="out_dir")
    render.add_argument("--backend", default="mock")
    render.add_argument("--parallelism", type=int, default=1)

    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        audio_path=args.audio,
        out_dir=getattr(args, "out_dir", Path(".")),
        fps=args.fps,
        window_samples=args.window_samples,
        rolling_length=args.rolling_length,
        delta=args.delta,
        normalize_tv=args.normalize_tv,
        seed=getattr(args, "seed", 0),
        categories_path=getattr(args, "categories_path", None),
        backend=getattr(args, "backend", "mock"),
        truncation=getattr(args, "truncation", None),
        latent_dim=getattr(args, "latent_dim", 128),
        num_classes=getattr(args, "num_classes", 1000),
        image_size=getattr(args, "image_size", (128, 128)),
        parallelism=getattr(args, "parallelism", 1),
        encode=getattr(args, "encode", False),
        encoder_template=getattr(args, "encoder_template", DEFAULT_ENCODER_TEMPLATE),
        legacy_alpha_division=args.legacy_alpha_division,
        dump_analysis=getattr(args, "dump_analysis", None),
    )


def _cmd_run(args) -> int:
    report = run_pipeline(_config_from_args(args))
    print(f"slices: {report.num_slices}")
    print(f"inflection points: {report.num_inflections}")
    print(f"frames written: {report.frames_written}")
    print(f"trajectory: {report.trajectory_path}")
    print(f"frames dir: {report.frames_dir}")
    if report.video_path is not None:
        print(f"video: {report.video_path}")
    if report.analysis_path is not None:
        print(f"analysis table: {report.analysis_path}")
    return 0


def _cmd_analyze(args) -> int:
    tv, inflections, track = analyze_only(_config_from_args(args))
    table = analysis_table(tv, inflections, track)
    if args.dump_analysis is not None:
        args.dump_analysis.parent.mkdir(parents=True, exist_ok=True)
        args.dump_analysis.write_text(table)
        print(f"analysis table: {args.dump_analysis}")
    else:
        sys.stdout.write(table)
    return 0


def _cmd_render(args) -> int:
    traj = read_trajectory(args.trajectory)
    backend = make_backend(args.backend, traj.spec)
    # the trajectory frames already form a complete plan
    plan = FramePlan(frames=traj.frames, keyframes=traj.keyframes)
    paths = render_all(
        backend,
        plan,
        args.out_dir,
        parallelism=args.parallelism,
        trajectory_path=args.trajectory,
    )
    print(f"frames written: {len(paths)}")
    print(f"frames dir: {args.out_dir}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": _cmd_run, "analyze": _cmd_analyze, "render": _cmd_render}[
        args.command
    ]
    try:
        return handler(args)
    except (GanterpError, FileNotFoundError) as exc:
        stage = getattr(exc, "pipeline_stage", None)
        prefix = f"[{stage}] " if stage else ""
        print(f"error: {prefix}{exc}", file=sys.stderr)
        return EXIT_CODES.get(type(exc), EXIT_UNEXPECTED)
    except ValueError as exc:
        stage = getattr(exc, "pipeline_stage", None)
        prefix = f"[{stage}] " if stage else ""
        print(f"error: {prefix}{exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
