import json
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from renderer_helpers import RENDER_SCRIPT, make_trajectory_doc


def run_renderer(*argv):
    return subprocess.run(
        [sys.executable, str(RENDER_SCRIPT), *map(str, argv)],
        capture_output=True,
        text=True,
    )


def test_happy_path(trajectory_file, tmp_path):
    out_dir = tmp_path / "frames"
    proc = run_renderer(trajectory_file, out_dir)
    assert proc.returncode == 0, proc.stderr
    names = sorted(p.name for p in out_dir.glob("*.png"))
    assert names == [f"frame_{i:06d}.png" for i in range(6)]
    with Image.open(out_dir / "frame_000000.png") as img:
        assert img.size == (16, 16)


def test_batch_size_does_not_change_output(trajectory_file, tmp_path):
    # the contract fixes count and naming; pixel values may float by one
    # quantization step when a different batch blocking is chosen
    small = tmp_path / "small"
    large = tmp_path / "large"
    assert run_renderer(trajectory_file, small, "--batch-size", "1").returncode == 0
    assert run_renderer(trajectory_file, large, "--batch-size", "16").returncode == 0
    small_names = sorted(p.name for p in small.glob("*.png"))
    large_names = sorted(p.name for p in large.glob("*.png"))
    assert small_names == large_names == [f"frame_{i:06d}.png" for i in range(6)]
    for name in small_names:
        a = np.asarray(Image.open(small / name)).astype(int)
        b = np.asarray(Image.open(large / name)).astype(int)
        assert np.abs(a - b).max() <= 1, f"{name} differs between batch sizes"


def test_reruns_are_identical(trajectory_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_renderer(trajectory_file, a).returncode == 0
    assert run_renderer(trajectory_file, b).returncode == 0
    for path in sorted(a.glob("*.png")):
        assert path.read_bytes() == (b / path.name).read_bytes()


def test_malformed_trajectory_exits_2_without_frames(tmp_path):
    doc = make_trajectory_doc()
    doc["frames"][1]["class_weights"] = {"1": 0.9}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    out_dir = tmp_path / "frames"
    proc = run_renderer(bad, out_dir)
    assert proc.returncode == 2
    assert "frames[1].class_weights" in proc.stderr
    assert not out_dir.exists()


def test_missing_trajectory_exits_2(tmp_path):
    proc = run_renderer(tmp_path / "nope.json", tmp_path / "out")
    assert proc.returncode == 2


def test_model_load_failure_exits_3(trajectory_file, tmp_path):
    proc = run_renderer(
        trajectory_file, tmp_path / "out", "--model", f"weights:{tmp_path}/missing.pt"
    )
    assert proc.returncode == 3
    assert "model load failed" in proc.stderr


def test_render_failure_exits_4(trajectory_file, tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("file in the way")
    proc = run_renderer(trajectory_file, blocker / "frames")
    assert proc.returncode == 4
    assert "frame 0" in proc.stderr
