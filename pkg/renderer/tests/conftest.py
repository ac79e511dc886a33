import json

import pytest

from renderer_helpers import make_trajectory_doc


@pytest.fixture
def trajectory_file(tmp_path):
    path = tmp_path / "trajectory.json"
    path.write_text(json.dumps(make_trajectory_doc()))
    return path
