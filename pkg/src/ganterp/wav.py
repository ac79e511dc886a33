"""Minimal RIFF/WAVE reader.

Accepts PCM 16-bit (format code 1) and IEEE float32 (format code 3) files
with 1 or 2 channels. Everything else raises UnsupportedFormatError; the
stdlib `wave` module cannot read float32 files, which is why this parser
exists.
"""

import struct
from pathlib import Path

import numpy as np

from .errors import EmptyAudioError, UnsupportedFormatError

FORMAT_PCM = 1
FORMAT_IEEE_FLOAT = 3


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read a WAV file into (frames, sample_rate).

    `frames` has shape (num_frames, num_channels) and dtype float64, with
    integer PCM scaled by 1/32768. Raises FileNotFoundError,
    UnsupportedFormatError or EmptyAudioError.
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise UnsupportedFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise UnsupportedFormatError(f"{path}: truncated fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            payload = body
        # chunks are word-aligned: odd sizes carry a pad byte
        pos += 8 + chunk_size + (chunk_size & 1)

    if fmt is None or payload is None:
        raise UnsupportedFormatError(f"{path}: missing fmt or data chunk")

    format_code, channels, sample_rate, _byte_rate, _block_align, bit_depth = fmt
    if format_code not in (FORMAT_PCM, FORMAT_IEEE_FLOAT):
        raise UnsupportedFormatError(
            f"{path}: unsupported format code {format_code} (need PCM or IEEE float)"
        )
    if channels not in (1, 2):
        raise UnsupportedFormatError(f"{path}: {channels} channels (need 1 or 2)")
    if sample_rate <= 0:
        raise UnsupportedFormatError(f"{path}: invalid sample rate {sample_rate}")

    if format_code == FORMAT_PCM:
        if bit_depth != 16:
            raise UnsupportedFormatError(
                f"{path}: {bit_depth}-bit PCM (only 16-bit supported)"
            )
        raw = np.frombuffer(payload, dtype="<i2")
        scale = 1.0 / 32768.0
    else:
        if bit_depth != 32:
            raise UnsupportedFormatError(
                f"{path}: {bit_depth}-bit float (only 32-bit supported)"
            )
        raw = np.frombuffer(payload, dtype="<f4")
        scale = 1.0

    num_frames = raw.size // channels
    if num_frames == 0:
        raise EmptyAudioError(f"{path}: no sample frames")
    frames = raw[: num_frames * channels].reshape(num_frames, channels)
    frames = frames.astype(np.float64) * scale
    if not np.isfinite(frames).all():
        raise UnsupportedFormatError(f"{path}: non-finite samples in float data")
    return frames, int(sample_rate)


def write_wav_pcm16(path, samples: np.ndarray, sample_rate: int) -> None:
    """Write mono or stereo float samples in [-1, 1] as a 16-bit PCM WAV."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim == 1:
        samples = samples[:, None]
    channels = samples.shape[1]
    pcm = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2")
    payload = pcm.tobytes()
    block_align = channels * 2
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(payload)),
            b"WAVE",
            b"fmt ",
            struct.pack(
                "<IHHIIHH",
                16,
                FORMAT_PCM,
                channels,
                sample_rate,
                sample_rate * block_align,
                block_align,
                16,
            ),
            b"data",
            struct.pack("<I", len(payload)),
        ]
    )
    Path(path).write_bytes(header + payload)


def write_wav_float32(path, samples: np.ndarray, sample_rate: int) -> None:
    """Write mono or stereo float samples as an IEEE float32 WAV."""
    samples = np.asarray(samples, dtype=np.float32)
    if samples.ndim == 1:
        samples = samples[:, None]
    channels = samples.shape[1]
    payload = samples.astype("<f4").tobytes()
    block_align = channels * 4
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(payload)),
            b"WAVE",
            b"fmt ",
            struct.pack(
                "<IHHIIHH",
                16,
                FORMAT_IEEE_FLOAT,
                channels,
                sample_rate,
                sample_rate * block_align,
                block_align,
                32,
            ),
            b"data",
            struct.pack("<I", len(payload)),
        ]
    )
    Path(path).write_bytes(header + payload)
