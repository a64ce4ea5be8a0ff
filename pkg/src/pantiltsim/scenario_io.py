"""Scenario files: human-writable YAML that deserializes to a ScenarioSpec.

Unspecified fields take the stock defaults; unknown keys are a hard error so
typos cannot silently change an experiment. A ``version`` key is required.
"""

from __future__ import annotations

import math

import yaml

from .controller import ControllerConfig
from .gimbal import GimbalLimits
from .runtime import ScenarioSpec
from .simworld import CameraModel, TargetState, TrajectorySpec, position_at
from .tracker import BBox, TrackerParams

SCENARIO_VERSION = 1


class ScenarioFileError(ValueError):
    """The scenario file is missing, malformed or contains unknown keys."""


_CAMERA_KEYS = {"width", "height", "hfov_deg", "flip_both_axes"}
_CTRL_KEYS = {"mode", "dead_x", "far_x", "dead_y", "far_y", "step_small_deg",
              "step_far_deg", "pan_min_deg", "pan_max_deg", "tilt_min_deg",
              "tilt_max_deg"}
_LIMITS_KEYS = {"pan_min_deg", "pan_max_deg", "tilt_min_deg", "tilt_max_deg",
                "slew_max_deg"}
_TRACKER_KEYS = {"search_radius", "accept_threshold", "learning_rate"}
_TARGET_KEYS = {"position", "azimuth_deg", "elevation_deg", "distance_m",
                "velocity", "radius_m"}
_TRAJECTORY_KEYS = {"kind", "center", "angular_rate_deg", "walk_sigma", "seed"}
_ROI_KEYS = {"x", "y", "w", "h"}
_TOP_KEYS = {"version", "seed", "steps", "loop_hz", "noise_sigma", "camera",
             "controller", "limits", "tracker", "target", "trajectory", "roi",
             "blank_after_step"}


def _require_mapping(node, name: str) -> dict:
    if not isinstance(node, dict):
        raise ScenarioFileError(f"{name} must be a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed: set, name: str) -> None:
    unknown = set(node) - allowed
    if unknown:
        raise ScenarioFileError(
            f"unknown key(s) in {name}: {', '.join(sorted(map(str, unknown)))}")


def _target_from(node: dict) -> TargetState:
    _check_keys(node, _TARGET_KEYS, "target")
    by_angles = {"azimuth_deg", "elevation_deg", "distance_m"} & set(node)
    if "position" in node and by_angles:
        raise ScenarioFileError("target: give either position or azimuth/elevation/distance")
    if "position" in node:
        position = node["position"]
    elif by_angles:
        position = position_at(float(node.get("azimuth_deg", 0.0)),
                               float(node.get("elevation_deg", 0.0)),
                               float(node.get("distance_m", 2.0)))
    else:
        raise ScenarioFileError("target needs position or azimuth/elevation/distance")
    return TargetState(position, node.get("velocity", (0.0, 0.0, 0.0)),
                       float(node.get("radius_m", 0.05)))


def _spec_from_tree(tree: dict) -> ScenarioSpec:
    _check_keys(tree, _TOP_KEYS, "scenario")
    if "version" not in tree:
        raise ScenarioFileError("scenario file needs a version key")
    if tree["version"] != SCENARIO_VERSION:
        raise ScenarioFileError(
            f"unsupported scenario version {tree['version']!r} (expected {SCENARIO_VERSION})")

    spec_kwargs = {}
    for key in ("seed", "steps"):
        if key in tree:
            spec_kwargs[key] = int(tree[key])
    for key in ("loop_hz", "noise_sigma"):
        if key in tree:
            spec_kwargs[key] = float(tree[key])
    if tree.get("blank_after_step") is not None:
        spec_kwargs["blank_after_step"] = int(tree["blank_after_step"])

    if "camera" in tree:
        cam = _require_mapping(tree["camera"], "camera")
        _check_keys(cam, _CAMERA_KEYS, "camera")
        spec_kwargs["camera"] = CameraModel(
            int(cam.get("width", CameraModel.frame_width)),
            int(cam.get("height", CameraModel.frame_height)),
            float(cam.get("hfov_deg", CameraModel.hfov_deg)),
            bool(cam.get("flip_both_axes", CameraModel.flip_both_axes)))

    if "controller" in tree:
        ctl = _require_mapping(tree["controller"], "controller")
        _check_keys(ctl, _CTRL_KEYS, "controller")
        defaults = ControllerConfig()
        spec_kwargs["ctrl"] = ControllerConfig(
            float(ctl.get("dead_x", defaults.dead_x)),
            float(ctl.get("far_x", defaults.far_x)),
            float(ctl.get("dead_y", defaults.dead_y)),
            float(ctl.get("far_y", defaults.far_y)),
            float(ctl.get("step_small_deg", defaults.step_small)),
            float(ctl.get("step_far_deg", defaults.step_far)),
            float(ctl.get("pan_min_deg", defaults.pan_min)),
            float(ctl.get("pan_max_deg", defaults.pan_max)),
            float(ctl.get("tilt_min_deg", defaults.tilt_min)),
            float(ctl.get("tilt_max_deg", defaults.tilt_max)),
            str(ctl.get("mode", defaults.mode)))

    if tree.get("limits") is not None:
        lim = _require_mapping(tree["limits"], "limits")
        _check_keys(lim, _LIMITS_KEYS, "limits")
        defaults = GimbalLimits()
        slew = lim.get("slew_max_deg")
        spec_kwargs["limits"] = GimbalLimits(
            float(lim.get("pan_min_deg", defaults.pan_min)),
            float(lim.get("pan_max_deg", defaults.pan_max)),
            float(lim.get("tilt_min_deg", defaults.tilt_min)),
            float(lim.get("tilt_max_deg", defaults.tilt_max)),
            math.inf if slew is None else float(slew))

    if "tracker" in tree:
        trk = _require_mapping(tree["tracker"], "tracker")
        _check_keys(trk, _TRACKER_KEYS, "tracker")
        defaults = TrackerParams()
        spec_kwargs["tracker"] = TrackerParams(
            int(trk.get("search_radius", defaults.search_radius)),
            float(trk.get("accept_threshold", defaults.accept_threshold)),
            float(trk.get("learning_rate", defaults.learning_rate)))

    if "target" in tree:
        spec_kwargs["target"] = _target_from(_require_mapping(tree["target"], "target"))

    if "trajectory" in tree:
        trj = _require_mapping(tree["trajectory"], "trajectory")
        _check_keys(trj, _TRAJECTORY_KEYS, "trajectory")
        center = trj.get("center")
        spec_kwargs["trajectory"] = TrajectorySpec(
            str(trj.get("kind", "stationary")),
            None if center is None else tuple(float(v) for v in center),
            float(trj.get("angular_rate_deg", 0.0)),
            float(trj.get("walk_sigma", 0.0)),
            None if trj.get("seed") is None else int(trj["seed"]))

    if "roi" in tree and tree["roi"] != "auto":
        roi = _require_mapping(tree["roi"], "roi")
        _check_keys(roi, _ROI_KEYS, "roi")
        try:
            spec_kwargs["roi"] = BBox(int(roi["x"]), int(roi["y"]),
                                      int(roi["w"]), int(roi["h"]))
        except KeyError as exc:
            raise ScenarioFileError(f"roi needs x, y, w and h (missing {exc})") from exc

    try:
        return ScenarioSpec(**spec_kwargs)
    except ValueError as exc:
        raise ScenarioFileError(str(exc)) from exc


def load_scenario(path) -> ScenarioSpec:
    """Parse a scenario file into a validated ScenarioSpec."""
    with open(path) as fh:
        try:
            tree = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioFileError(f"cannot parse {path}: {exc}") from exc
    if tree is None:
        raise ScenarioFileError(f"{path} is empty")
    try:
        return _spec_from_tree(_require_mapping(tree, "scenario"))
    except ScenarioFileError:
        raise
    except (TypeError, ValueError) as exc:  # invalid field values
        raise ScenarioFileError(str(exc)) from exc
