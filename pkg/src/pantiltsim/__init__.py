"""Software-in-the-loop pan/tilt visual servoing.

A synthetic camera on a two-axis gimbal watches a moving disk target; an
NCC template tracker follows the operator-selected region and a stepped
dead-band controller drives the gimbal to keep the target centered. Runs
headless for metrics or live behind a WebSocket telemetry service.
"""

from .controller import (ControllerConfig, ErrorPair, compute_error, ema_fps,
                         pan_update, tilt_update)
from .gimbal import GimbalLimits, GimbalState, apply, initial_state
from .runtime import (RunSummary, ScenarioError, ScenarioSpec, SimLoop,
                      StepRecord, run_scenario, summarize, time_to_lock,
                      write_metrics_csv)
from .scenario_io import ScenarioFileError, load_scenario
from .simworld import (CameraModel, Frame, TargetState, TrajectorySpec,
                       ground_truth_bbox, position_at, project, render_frame,
                       step_target, world_from_camera)
from .tracker import BBox, NccTracker, TrackerParams, UntrackableRoiError, ncc_score

__version__ = "0.1.0"

__all__ = [
    "BBox", "CameraModel", "ControllerConfig", "ErrorPair", "Frame",
    "GimbalLimits", "GimbalState", "NccTracker", "RunSummary", "ScenarioError",
    "ScenarioFileError", "ScenarioSpec", "SimLoop", "StepRecord", "TargetState",
    "TrackerParams", "TrajectorySpec", "UntrackableRoiError", "apply",
    "compute_error", "ema_fps", "ground_truth_bbox", "initial_state",
    "load_scenario", "ncc_score", "pan_update", "position_at", "project",
    "render_frame", "run_scenario", "step_target", "summarize", "tilt_update",
    "time_to_lock", "world_from_camera", "write_metrics_csv",
]
