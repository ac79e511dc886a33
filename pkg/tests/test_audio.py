import struct

import numpy as np
import pytest

from ganterp.audio import AudioBuffer, compute_spectrogram, decode_audio
from ganterp.errors import AudioTooShortError, EmptyAudioError, UnsupportedFormatError
from ganterp.wav import write_wav_float32, write_wav_pcm16


def _patch_fmt_field(path, offset_in_fmt, value, fmt="<H"):
    """Rewrite one field inside the fmt chunk (starts at byte 20)."""
    data = bytearray(path.read_bytes())
    struct.pack_into(fmt, data, 20 + offset_in_fmt, value)
    path.write_bytes(bytes(data))


class TestDecodeAudio:
    def test_pcm16_scaling(self, tmp_path):
        path = tmp_path / "a.wav"
        pcm = np.array([0, 16384, -32768], dtype="<i2")
        write_wav_pcm16(path, pcm.astype(np.float64) / 32768.0, 8000)
        buf = decode_audio(path)
        assert buf.sample_rate == 8000
        assert buf.samples.tolist() == [0.0, 0.5, -1.0]

    def test_stereo_mixdown_averages_channels(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_float32(path, np.array([[0.2, 0.4]]), 44100)
        buf = decode_audio(path)
        assert buf.samples.shape == (1,)
        assert buf.samples[0] == pytest.approx(0.3, abs=1e-7)

    def test_float32_used_verbatim(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_float32(path, np.array([0.25, -0.5, 1.0]), 16000)
        assert decode_audio(path).samples.tolist() == [0.25, -0.5, 1.0]

    def test_float32_out_of_range_clipped(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_float32(path, np.array([1.5, -2.0]), 16000)
        assert decode_audio(path).samples.tolist() == [1.0, -1.0]

    def test_zero_frames_raises_empty(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_pcm16(path, np.zeros(0), 8000)
        with pytest.raises(EmptyAudioError):
            decode_audio(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            decode_audio(tmp_path / "nope.wav")

    def test_not_riff(self, tmp_path):
        path = tmp_path / "a.wav"
        path.write_bytes(b"OggS" + b"\x00" * 40)
        with pytest.raises(UnsupportedFormatError):
            decode_audio(path)

    def test_unsupported_compression_code(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_pcm16(path, np.zeros(10), 8000)
        _patch_fmt_field(path, 0, 2)  # ADPCM
        with pytest.raises(UnsupportedFormatError, match="format code 2"):
            decode_audio(path)

    def test_unsupported_bit_depth(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_pcm16(path, np.zeros(10), 8000)
        _patch_fmt_field(path, 14, 8)
        with pytest.raises(UnsupportedFormatError, match="8-bit"):
            decode_audio(path)

    def test_too_many_channels(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_pcm16(path, np.zeros(12), 8000)
        _patch_fmt_field(path, 2, 3)
        with pytest.raises(UnsupportedFormatError, match="channels"):
            decode_audio(path)

    def test_nan_float_rejected(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav_float32(path, np.array([0.1, np.nan], dtype=np.float32), 8000)
        with pytest.raises(UnsupportedFormatError, match="non-finite"):
            decode_audio(path)


class TestComputeSpectrogram:
    def test_silence_is_all_zero(self):
        buf = AudioBuffer(samples=np.zeros(22050), sample_rate=22050)
        spec = compute_spectrogram(buf, fps=30, window_samples=2048)
        assert (spec.mags == 0).all()

    def test_hop_and_slice_count_arithmetic(self):
        buf = AudioBuffer(samples=np.zeros(22050), sample_rate=22050)
        spec = compute_spectrogram(buf, fps=30, window_samples=2048)
        assert spec.hop_samples == 735
        assert spec.num_slices == (22050 - 2048) // 735 + 1 == 28
        assert spec.num_freqs == 2048 // 2 + 1

    def test_dc_energy_lands_in_bin_zero(self):
        buf = AudioBuffer(samples=np.full(8000, 0.5), sample_rate=8000)
        spec = compute_spectrogram(buf, fps=25, window_samples=512)
        # periodic Hann: sum of window is N/2, so bin 0 = 0.5 * (N/2) / N
        assert spec.mags[0] == pytest.approx(0.25, abs=1e-12)
        assert (spec.mags.argmax(axis=0) == 0).all()
        assert spec.mags[2:].max() < 1e-10

    def test_magnitude_scaling_linearity(self, tone_wav):
        buf = decode_audio(tone_wav)
        spec1 = compute_spectrogram(buf, fps=30)
        doubled = AudioBuffer(samples=np.clip(buf.samples * 2, -1, 1), sample_rate=22050)
        # keep amplitudes in range: 0.4 tone doubled stays below 1
        spec2 = compute_spectrogram(doubled, fps=30)
        assert np.array_equal(spec2.mags, 2.0 * spec1.mags)

    def test_arbitrary_scaling_close(self, tone_wav):
        buf = decode_audio(tone_wav)
        spec1 = compute_spectrogram(buf, fps=30)
        scaled = AudioBuffer(samples=buf.samples * 0.7, sample_rate=22050)
        spec2 = compute_spectrogram(scaled, fps=30)
        np.testing.assert_allclose(spec2.mags, 0.7 * spec1.mags, rtol=1e-12, atol=1e-15)

    def test_determinism(self, tone_wav):
        buf = decode_audio(tone_wav)
        a = compute_spectrogram(buf, fps=30)
        b = compute_spectrogram(buf, fps=30)
        assert np.array_equal(a.mags, b.mags)

    def test_energy_bounded_by_windowed_peak(self):
        rng = np.random.default_rng(7)
        buf = AudioBuffer(samples=rng.uniform(-1, 1, 30000), sample_rate=22050)
        window = 1024
        spec = compute_spectrogram(buf, fps=30, window_samples=window)
        hann = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(window) / window)
        for t in range(spec.num_slices):
            start = t * spec.hop_samples
            peak = np.abs(buf.samples[start : start + window] * hann).max()
            assert (spec.mags[:, t] ** 2).sum() <= window * peak**2 + 1e-12

    def test_too_short_raises(self):
        buf = AudioBuffer(samples=np.zeros(1000), sample_rate=22050)
        with pytest.raises(AudioTooShortError):
            compute_spectrogram(buf, fps=30, window_samples=2048)

    def test_single_slice_raises(self):
        # 2100 samples fit one window but not two hops
        buf = AudioBuffer(samples=np.zeros(2100), sample_rate=22050)
        with pytest.raises(AudioTooShortError):
            compute_spectrogram(buf, fps=30, window_samples=2048)

    @pytest.mark.parametrize("window", [0, 1000, -4])
    def test_window_must_be_power_of_two(self, window):
        buf = AudioBuffer(samples=np.zeros(22050), sample_rate=22050)
        with pytest.raises(ValueError):
            compute_spectrogram(buf, fps=30, window_samples=window)

    def test_bad_fps(self):
        buf = AudioBuffer(samples=np.zeros(22050), sample_rate=22050)
        with pytest.raises(ValueError):
            compute_spectrogram(buf, fps=0)
