"""Audio ingest: WAV decoding and frame-rate-aligned magnitude spectrograms."""

from dataclasses import dataclass

import numpy as np

from . import wav
from .errors import AudioTooShortError, EmptyAudioError

__all__ = ["AudioBuffer", "Spectrogram", "decode_audio", "compute_spectrogram"]


@dataclass(frozen=True)
class AudioBuffer:
    """Mono sample stream in [-1, 1] with its sample rate.

    `samples` is a 1D float64 array; all values finite; sample_rate > 0.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise EmptyAudioError("audio buffer must hold at least one sample")
        if not np.isfinite(self.samples).all():
            raise ValueError("audio samples must be finite")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def duration_seconds(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class Spectrogram:
    """Frequency-major magnitude array with its framing parameters.

    `mags` has shape (num_freqs, num_slices), all entries finite and >= 0.
    Magnitudes are one-sided DFT magnitudes divided by the window length,
    which keeps per-slice energy bounded by the windowed peak amplitude.
    num_freqs = window_samples // 2 + 1 and num_slices >= 2, so at least
    one slice-to-slice difference exists.
    """

    mags: np.ndarray
    hop_samples: int
    window_samples: int
    sample_rate: int

    def __post_init__(self):
        if self.mags.ndim != 2:
            raise ValueError("mags must be 2-dimensional (freqs x slices)")
        if self.mags.shape[0] != self.window_samples // 2 + 1:
            raise ValueError("num_freqs must equal window_samples // 2 + 1")
        if self.mags.shape[1] < 2:
            raise AudioTooShortError("spectrogram needs at least 2 time slices")
        if not np.isfinite(self.mags).all() or (self.mags < 0).any():
            raise ValueError("magnitudes must be finite and non-negative")
        if self.hop_samples <= 0 or self.window_samples <= 0 or self.sample_rate <= 0:
            raise ValueError("framing parameters must be positive")

    @property
    def num_freqs(self) -> int:
        return self.mags.shape[0]

    @property
    def num_slices(self) -> int:
        return self.mags.shape[1]


def decode_audio(path) -> AudioBuffer:
    """Decode a PCM16 or float32 WAV file into a mono AudioBuffer.

    Stereo is mixed down by per-sample channel average; 16-bit samples are
    scaled by 1/32768; float samples outside [-1, 1] are clipped.
    """
    frames, sample_rate = wav.read_wav(path)
    mono = frames.mean(axis=1)
    np.clip(mono, -1.0, 1.0, out=mono)
    return AudioBuffer(samples=mono, sample_rate=sample_rate)


def _hann_window(n: int) -> np.ndarray:
    # periodic Hann: a constant input leaks only into the first two bins
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def compute_spectrogram(
    audio: AudioBuffer, fps: float, window_samples: int = 2048
) -> Spectrogram:
    """Short-time magnitude spectrum with one slice per video frame.

    hop = round(sample_rate / fps), so slice t covers
    samples[t*hop : t*hop + window) and slice indices double as frame
    indices downstream. Raises AudioTooShortError when fewer than two full
    windows fit.
    """
    if fps <= 0:
        raise ValueError("fps must be positive")
    if window_samples <= 0 or window_samples & (window_samples - 1):
        raise ValueError("window_samples must be a positive power of two")
    samples = audio.samples
    if samples.size < window_samples:
        raise AudioTooShortError(
            f"need at least {window_samples} samples, got {samples.size}"
        )
    hop = round(audio.sample_rate / fps)
    if hop <= 0:
        raise ValueError("fps too high for this sample rate (hop rounds to 0)")
    num_slices = (samples.size - window_samples) // hop + 1
    if num_slices < 2:
        raise AudioTooShortError(
            f"audio yields {num_slices} slice(s); analysis needs at least 2"
        )
    frames = np.lib.stride_tricks.sliding_window_view(samples, window_samples)[::hop]
    frames = frames[:num_slices] * _hann_window(window_samples)
    mags = np.abs(np.fft.rfft(frames, axis=1)) / window_samples
    return Spectrogram(
        mags=np.ascontiguousarray(mags.T),
        hop_samples=hop,
        window_samples=window_samples,
        sample_rate=audio.sample_rate,
    )
