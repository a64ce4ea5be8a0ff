import math
from pathlib import Path

import numpy as np
import pytest

from pantiltsim.scenario_io import ScenarioFileError, load_scenario
from pantiltsim.simworld import position_at
from pantiltsim.tracker import BBox

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def write(tmp_path, text, name="s.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


MINIMAL = """\
version: 1
target:
  azimuth_deg: 0.0
  elevation_deg: -20.0
  distance_m: 2.0
  radius_m: 0.08
"""


class TestLoading:
    def test_minimal_file_gets_defaults(self, tmp_path):
        spec = load_scenario(write(tmp_path, MINIMAL))
        assert spec.steps == 200
        assert spec.loop_hz == 15.0
        assert spec.camera.frame_width == 1000
        assert spec.ctrl.dead_x == 40.0 and spec.ctrl.far_x == 120.0
        assert spec.ctrl.mode == "corrected"
        assert spec.tracker.search_radius == 48
        assert spec.roi is None
        assert np.allclose(spec.target.position, position_at(0.0, -20.0, 2.0))

    def test_all_shipped_scenarios_load(self):
        names = {p.name for p in SCENARIO_DIR.glob("*.yaml")}
        assert {"stationary_centered.yaml", "stationary_offset.yaml",
                "linear_crossing.yaml", "circular_orbit.yaml",
                "random_walk.yaml", "operator_driven.yaml"} <= names
        for p in sorted(SCENARIO_DIR.glob("*.yaml")):
            spec = load_scenario(p)
            assert spec.steps > 0

    def test_explicit_roi(self, tmp_path):
        spec = load_scenario(write(tmp_path, MINIMAL + "roi: {x: 10, y: 20, w: 30, h: 40}\n"))
        assert spec.roi == BBox(10, 20, 30, 40)

    def test_roi_auto_keyword(self, tmp_path):
        spec = load_scenario(write(tmp_path, MINIMAL + "roi: auto\n"))
        assert spec.roi is None

    def test_controller_overrides(self, tmp_path):
        text = MINIMAL + "controller: {mode: faithful, dead_x: 30}\n"
        spec = load_scenario(write(tmp_path, text))
        assert spec.ctrl.mode == "faithful"
        assert spec.ctrl.dead_x == 30.0
        assert spec.ctrl.far_x == 120.0

    def test_limits_with_slew(self, tmp_path):
        text = MINIMAL + "limits: {slew_max_deg: 5.0}\n"
        spec = load_scenario(write(tmp_path, text))
        assert spec.limits.slew_max == 5.0
        assert spec.limits.pan_min == -90.0

    def test_limits_default_slew_is_unlimited(self, tmp_path):
        text = MINIMAL + "limits: {pan_min_deg: -45, pan_max_deg: 45}\n"
        spec = load_scenario(write(tmp_path, text))
        assert math.isinf(spec.limits.slew_max)


class TestRejection:
    def test_unknown_top_level_key(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="stepz"):
            load_scenario(write(tmp_path, MINIMAL + "stepz: 10\n"))

    def test_unknown_nested_key(self, tmp_path):
        text = MINIMAL + "controller: {daed_x: 40}\n"
        with pytest.raises(ScenarioFileError, match="daed_x"):
            load_scenario(write(tmp_path, text))

    def test_missing_version(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="version"):
            load_scenario(write(tmp_path, "steps: 10\ntarget: {position: [0,0,2]}\n"))

    def test_wrong_version(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="version"):
            load_scenario(write(tmp_path, MINIMAL.replace("version: 1", "version: 3")))

    def test_both_position_and_angles(self, tmp_path):
        text = """\
version: 1
target:
  position: [0, 0, 2]
  azimuth_deg: 5.0
  radius_m: 0.05
"""
        with pytest.raises(ScenarioFileError, match="either"):
            load_scenario(write(tmp_path, text))

    def test_target_without_placement(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="target"):
            load_scenario(write(tmp_path, "version: 1\ntarget: {radius_m: 0.1}\n"))

    def test_random_walk_needs_seed(self, tmp_path):
        text = MINIMAL + "trajectory: {kind: random_walk, walk_sigma: 0.01}\n"
        with pytest.raises(ScenarioFileError, match="seed"):
            load_scenario(write(tmp_path, text))

    def test_empty_file(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="empty"):
            load_scenario(write(tmp_path, ""))

    def test_not_yaml_mapping(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="mapping"):
            load_scenario(write(tmp_path, "- 1\n- 2\n"))

    def test_malformed_yaml(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="parse"):
            load_scenario(write(tmp_path, "version: [unclosed\n"))

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(tmp_path / "missing.yaml")
