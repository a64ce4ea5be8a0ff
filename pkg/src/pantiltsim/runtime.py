"""Closed-loop scenario execution: render, track, steer the gimbal, record.

Each loop step runs, in this order: advance the target, render (and flip),
update the tracker, and only on tracking success compute the pixel error
and step the servos; then smooth the loop rate and append a record. A lost
track holds the gimbal still. Headless mode uses the nominal loop period so
metrics are machine independent; paced mode sleeps toward the configured
rate and feeds measured loop times to the rate filter.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import controller, gimbal, simworld
from .controller import ControllerConfig, compute_error, ema_fps
from .gimbal import GimbalLimits
from .simworld import CameraModel, Frame, TargetState, TrajectorySpec
from .tracker import BBox, NccTracker, TrackerParams

TARGET_LOOP_HZ = 15.0
LOCK_DWELL_STEPS = 10

CSV_HEADER = "step,t,errorx,errory,pan,tilt,status,score,fps,gt_errorx,gt_errory"


class ScenarioError(Exception):
    """A scenario cannot run as specified (for example, the ROI is not trackable)."""


@dataclass
class ScenarioSpec:
    """Seeded, declarative description of one run."""

    seed: int = 0
    steps: int = 200
    camera: CameraModel = field(default_factory=CameraModel)
    ctrl: ControllerConfig = field(default_factory=ControllerConfig)
    limits: GimbalLimits | None = None  # None: derived from ctrl limits and mode
    trajectory: TrajectorySpec = field(default_factory=TrajectorySpec)
    target: TargetState = field(
        default_factory=lambda: TargetState(simworld.position_at(0.0, -20.0, 2.0)))
    tracker: TrackerParams = field(default_factory=TrackerParams)
    roi: BBox | None = None  # None: auto (ground-truth box at step 0)
    loop_hz: float = TARGET_LOOP_HZ
    noise_sigma: float = 0.0
    blank_after_step: int | None = None  # target visible through this step, gone after

    def __post_init__(self):
        if self.steps <= 0:
            raise ValueError("steps must be positive")
        if self.loop_hz <= 0:
            raise ValueError("loop_hz must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


@dataclass
class StepRecord:
    step: int
    t: float
    errorx: float
    errory: float
    pan: float
    tilt: float
    status: str
    score: float
    fps: float
    gt_errorx: float
    gt_errory: float


@dataclass
class RunSummary:
    time_to_lock: int | None
    rms_error_after_lock: float | None
    max_overshoot: float | None
    lost_count: int
    mean_fps: float


def limits_for(spec: ScenarioSpec) -> GimbalLimits:
    """Physical limits for a run: explicit, or derived from the controller.

    Faithful mode widens the tilt travel so the controller's one-sided
    clamps are observable instead of being masked by the hardware model.
    """
    if spec.limits is not None:
        return spec.limits
    c = spec.ctrl
    if c.mode == "faithful":
        return GimbalLimits(c.pan_min, c.pan_max,
                            gimbal.WIDE_TILT_MIN_DEG, gimbal.WIDE_TILT_MAX_DEG)
    return GimbalLimits(c.pan_min, c.pan_max, c.tilt_min, c.tilt_max)


class SimLoop:
    """One scenario's mutable loop state, advanced a step at a time.

    The headless/paced runners and the telemetry service all drive this
    class; external commands (ROI selection, steering, mode switches) are
    applied at step boundaries by the owner.
    """

    def __init__(self, spec: ScenarioSpec):
        self.spec = spec
        self.camera = spec.camera
        self.ctrl = spec.ctrl
        self.limits = limits_for(spec)
        self.reset()

    def reset(self) -> None:
        """Restore the step-0 world: pose, target, random streams, idle tracker."""
        spec = self.spec
        self.gimbal = gimbal.initial_state()
        self.target = TargetState(spec.target.position.copy(),
                                  spec.target.velocity.copy(), spec.target.radius)
        self.noise_rng = np.random.default_rng(spec.seed)
        traj_seed = spec.trajectory.seed
        self.traj_rng = np.random.default_rng(
            traj_seed if traj_seed is not None else [spec.seed, 1])
        self.tracker: NccTracker | None = None
        self.fps = 0.0
        self.step_index = 0
        self.steer: tuple[float, float] | None = None
        self.frame = self._render(record_index=-1, seq=0)
        self.last_roi_error: str | None = None

    def _render(self, record_index: int, seq: int) -> Frame:
        blank = (self.spec.blank_after_step is not None
                 and record_index > self.spec.blank_after_step)
        return simworld.render_frame(self.camera, self.gimbal,
                                     None if blank else self.target,
                                     self.spec.noise_sigma, self.noise_rng, seq)

    def init_tracker(self) -> None:
        """Resolve the step-0 ROI (explicit or ground-truth) and init the tracker."""
        roi = self.spec.roi
        if roi is None:
            roi = simworld.ground_truth_bbox(self.camera, self.gimbal, self.target)
            if roi is None:
                raise ScenarioError("auto ROI failed: target is not visible at step 0")
        tracker = NccTracker(self.spec.tracker)
        try:
            tracker.init(self.frame, roi)
        except ValueError as exc:
            raise ScenarioError(f"tracker init failed: {exc}") from exc
        self.tracker = tracker

    def set_mode(self, mode: str) -> None:
        """Switch controller mode; re-derive limits unless the spec pinned them."""
        self.ctrl = replace(self.ctrl, mode=mode)
        if self.spec.limits is None:
            self.limits = limits_for(replace(self.spec, ctrl=self.ctrl))

    def advance(self, looptime: float, roi_command: BBox | None = None) -> StepRecord:
        """Run one loop step and return its record.

        ``roi_command`` re-initializes the tracker on this step's frame; on
        failure the previous tracker state is kept and ``last_roi_error``
        holds the reason.
        """
        spec = self.spec
        k = self.step_index
        self.target = simworld.step_target(
            spec.trajectory, self.target,
            self.steer if spec.trajectory.kind == "operator_driven" else None,
            self.traj_rng)
        self.step_index = k + 1
        self.frame = self._render(record_index=k, seq=k + 1)

        self.last_roi_error = None
        acted = False
        success = False
        bbox: BBox | None = None
        score = 0.0
        if roi_command is not None:
            fresh = NccTracker(spec.tracker)
            try:
                fresh.init(self.frame, roi_command)
                self.tracker = fresh
                success = True
                bbox = fresh.bbox
                score = 1.0
                acted = True
            except ValueError as exc:
                self.last_roi_error = str(exc)
        if not acted and self.tracker is not None:
            success, bbox, score = self.tracker.update(self.frame)

        if self.tracker is None:
            status = "idle"
            errorx = errory = 0.0
        else:
            errorx, errory = compute_error(bbox, self.camera.frame_width,
                                           self.camera.frame_height)
            if success:
                status = "ok"
                pan_cmd = controller.pan_update(errorx, self.gimbal.pan_deg, self.ctrl)
                tilt_cmd = controller.tilt_update(errory, self.gimbal.tilt_deg, self.ctrl)
                self.gimbal = gimbal.apply(self.gimbal, pan_cmd, tilt_cmd, self.limits)
            else:
                status = "lost"  # hold the gimbal: no actuation without a track

        self.fps = ema_fps(self.fps, looptime)

        gt = simworld.ground_truth_bbox(self.camera, self.gimbal, self.target)
        if gt is not None:
            gt_errorx, gt_errory = compute_error(gt, self.camera.frame_width,
                                                 self.camera.frame_height)
        else:
            gt_errorx = gt_errory = math.nan

        return StepRecord(k, k / spec.loop_hz, float(errorx), float(errory),
                          self.gimbal.pan_deg, self.gimbal.tilt_deg, status,
                          score, self.fps, gt_errorx, gt_errory)


def run_scenario(spec: ScenarioSpec, mode: str = "headless") -> tuple[list[StepRecord], RunSummary]:
    """Execute a scenario start to finish and return its records and summary."""
    if mode not in ("headless", "paced"):
        raise ValueError(f"mode must be headless or paced, got {mode!r}")
    loop = SimLoop(spec)
    loop.init_tracker()
    records = []
    nominal = 1.0 / spec.loop_hz
    if mode == "headless":
        for _ in range(spec.steps):
            records.append(loop.advance(nominal))
    else:
        looptime = nominal
        prev = time.perf_counter()
        for _ in range(spec.steps):
            records.append(loop.advance(looptime))
            now = time.perf_counter()
            time.sleep(max(0.0, nominal - (now - prev)))
            after = time.perf_counter()
            looptime = after - prev
            prev = after
    return records, summarize(records, spec.ctrl)


def time_to_lock(records: list[StepRecord], cfg: ControllerConfig,
                 dwell: int = LOCK_DWELL_STEPS) -> int | None:
    """First step from which errors stay inside both dead bands, with tracking
    intact, for ``dwell`` further steps. None if that never happens."""
    def in_band(r: StepRecord) -> bool:
        return (r.status == "ok" and abs(r.errorx) <= cfg.dead_x
                and abs(r.errory) <= cfg.dead_y)

    for s in range(len(records) - dwell):
        if all(in_band(records[s + i]) for i in range(dwell + 1)):
            return s
    return None


def _overshoot(values: list[float]) -> float:
    """Largest |error| after the first sign change; 0 if the sign never flips."""
    last_sign = 0
    for i, v in enumerate(values):
        sign = (v > 0) - (v < 0)
        if sign == 0:
            continue
        if last_sign != 0 and sign != last_sign:
            return max(abs(x) for x in values[i:])
        last_sign = sign
    return 0.0


def summarize(records: list[StepRecord], cfg: ControllerConfig,
              dwell: int = LOCK_DWELL_STEPS) -> RunSummary:
    """Reduce a record series to its headline numbers (pure; series-only)."""
    lock = time_to_lock(records, cfg, dwell)
    lost_count = sum(1 for a, b in zip(records, records[1:])
                     if a.status == "ok" and b.status == "lost")
    mean_fps = float(np.mean([r.fps for r in records])) if records else 0.0
    if lock is None:
        return RunSummary(None, None, None, lost_count, mean_fps)
    tail = records[lock:]
    rms = math.sqrt(sum(r.errorx ** 2 + r.errory ** 2 for r in tail) / len(tail))
    overshoot = max(_overshoot([r.errorx for r in records]),
                    _overshoot([r.errory for r in records]))
    return RunSummary(lock, rms, overshoot, lost_count, mean_fps)


def _fmt(v: float) -> str:
    return format(v, ".6g")


def write_metrics_csv(records: list[StepRecord], path) -> None:
    """Write the record series in the fixed CSV format (6 significant digits)."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join([
            str(r.step), _fmt(r.t), _fmt(r.errorx), _fmt(r.errory),
            _fmt(r.pan), _fmt(r.tilt), r.status, _fmt(r.score), _fmt(r.fps),
            _fmt(r.gt_errorx), _fmt(r.gt_errory)]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
