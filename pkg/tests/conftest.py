import numpy as np
import pytest

from ganterp import kernels
from ganterp.wav import write_wav_pcm16

# pay the JIT cost once, before any timed assertion runs
kernels.warmup()


@pytest.fixture
def silence_wav(tmp_path):
    """1 s of 22050 Hz silence: hop 735, 28 slices at 30 fps / window 2048."""
    path = tmp_path / "silence.wav"
    write_wav_pcm16(path, np.zeros(22050), 22050)
    return path


@pytest.fixture
def tone_wav(tmp_path):
    path = tmp_path / "tone.wav"
    t = np.arange(22050) / 22050
    write_wav_pcm16(path, 0.4 * np.sin(2 * np.pi * 440 * t), 22050)
    return path
