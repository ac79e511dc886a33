"""ganterp: plan and render audio-reactive latent-space videos.

The pipeline decodes a WAV file, computes a frame-aligned magnitude
spectrogram, measures slice-to-slice spectral change, places inflection
points where that change breaks away from its local rolling averages, and
interpolates latent/category keyframes between them so the visual motion
follows the audio's motion. Rendering goes through a deterministic mock
generator or any external renderer honoring the trajectory file contract.
"""

__version__ = "0.1.0"

from .audio import AudioBuffer, Spectrogram, compute_spectrogram, decode_audio
from .analysis import (
    AlphaTrack,
    InflectionSet,
    TvSeries,
    analysis_table,
    compute_alpha_track,
    compute_tv_series,
    detect_inflection_points,
)
from .planner import (
    FramePlan,
    GeneratorSpec,
    LatentKeyframe,
    PlannedFrame,
    build_frame_plan,
    sample_keyframes,
)
from .backend import (
    ExternalBackend,
    FrameImage,
    MockBackend,
    render_all,
    render_frame,
)
from .trajectory import Trajectory, read_trajectory, write_trajectory
from .pipeline import RunConfig, RunReport, load_categories, run_pipeline

__all__ = [
    "__version__",
    "AudioBuffer",
    "Spectrogram",
    "decode_audio",
    "compute_spectrogram",
    "TvSeries",
    "InflectionSet",
    "AlphaTrack",
    "compute_tv_series",
    "detect_inflection_points",
    "compute_alpha_track",
    "analysis_table",
    "GeneratorSpec",
    "LatentKeyframe",
    "PlannedFrame",
    "FramePlan",
    "sample_keyframes",
    "build_frame_plan",
    "FrameImage",
    "MockBackend",
    "ExternalBackend",
    "render_frame",
    "render_all",
    "Trajectory",
    "write_trajectory",
    "read_trajectory",
    "RunConfig",
    "RunReport",
    "load_categories",
    "run_pipeline",
]
