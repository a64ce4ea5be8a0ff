"""Dead-band stepped pan/tilt controller and loop-rate smoothing.

The controller converts a pixel error (bounding-box center minus frame
center) into single-degree or multi-degree servo steps. Errors inside the
dead band produce no motion; errors beyond the far band trip the small and
the far branch together, so the net far-band step is ``step_small +
step_far`` degrees per update.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

# Stock tuning constants. Tests reference these symbolically; runs change
# them only through ControllerConfig.
DEAD_BAND_X_PX = 40.0
FAR_BAND_X_PX = 120.0
DEAD_BAND_Y_PX = 20.0
FAR_BAND_Y_PX = 60.0
STEP_SMALL_DEG = 1.0
STEP_FAR_DEG = 3.0
PAN_MIN_DEG = -90.0
PAN_MAX_DEG = 90.0
TILT_MIN_DEG = -40.0
TILT_MAX_DEG = 90.0
FPS_SMOOTHING = 0.8

MODES = ("faithful", "corrected")


class ErrorPair(NamedTuple):
    errorx: float
    errory: float


@dataclass(frozen=True)
class ControllerConfig:
    """Band thresholds, step sizes and angle limits.

    ``mode`` selects the tilt clamp behavior. In ``faithful`` mode each tilt
    branch checks only the limit opposite its direction of travel, so tilt
    can walk past the near limit (the original rig's behavior). ``corrected``
    mode applies the same step schedule but keeps tilt inside
    [tilt_min, tilt_max]. Pan clamps are sound either way.
    """

    dead_x: float = DEAD_BAND_X_PX
    far_x: float = FAR_BAND_X_PX
    dead_y: float = DEAD_BAND_Y_PX
    far_y: float = FAR_BAND_Y_PX
    step_small: float = STEP_SMALL_DEG
    step_far: float = STEP_FAR_DEG
    pan_min: float = PAN_MIN_DEG
    pan_max: float = PAN_MAX_DEG
    tilt_min: float = TILT_MIN_DEG
    tilt_max: float = TILT_MAX_DEG
    mode: str = "corrected"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0 < self.dead_x < self.far_x):
            raise ValueError("need 0 < dead_x < far_x")
        if not (0 < self.dead_y < self.far_y):
            raise ValueError("need 0 < dead_y < far_y")
        if self.step_small <= 0 or self.step_far <= 0:
            raise ValueError("step sizes must be positive")
        if self.pan_min >= self.pan_max or self.tilt_min >= self.tilt_max:
            raise ValueError("need min < max per axis")


def compute_error(bbox, frame_width: int, frame_height: int) -> ErrorPair:
    """Signed distance from the box center to the frame center, in pixels.

    Half-pixel results are kept exact; truncation to integers happens only
    in the tracker's box output, never here.
    """
    x, y, w, h = bbox
    return ErrorPair((x + w / 2) - frame_width / 2, (y + h / 2) - frame_height / 2)


def pan_update(errorx: float, pan: float, cfg: ControllerConfig) -> float:
    """One pan step for the given horizontal error.

    The four branches are sequential and non-exclusive: an error beyond
    far_x trips both the small and the far branch (net step_small +
    step_far). Identical in both modes.
    """
    if errorx > cfg.dead_x:
        pan = pan - cfg.step_small
        if pan < cfg.pan_min:
            pan = cfg.pan_min
    if errorx < -cfg.dead_x:
        pan = pan + cfg.step_small
        if pan > cfg.pan_max:
            pan = cfg.pan_max
    if errorx > cfg.far_x:
        pan = pan - cfg.step_far
        if pan < cfg.pan_min:
            pan = cfg.pan_min
    if errorx < -cfg.far_x:
        pan = pan + cfg.step_far
        if pan > cfg.pan_max:
            pan = cfg.pan_max
    return pan


def tilt_update(errory: float, tilt: float, cfg: ControllerConfig) -> float:
    """One tilt step for the given vertical error.

    Faithful mode keeps the one-sided clamps: the increment branches check
    only tilt_min and the decrement branches only tilt_max, each a no-op in
    its travel direction, so tilt is unclamped toward the limit it moves
    at. Corrected mode clamps both directions.
    """
    if cfg.mode == "faithful":
        if errory > cfg.dead_y:
            tilt = tilt + cfg.step_small
            if tilt < cfg.tilt_min:
                tilt = cfg.tilt_min
        if errory < -cfg.dead_y:
            tilt = tilt - cfg.step_small
            if tilt > cfg.tilt_max:
                tilt = cfg.tilt_max
        if errory > cfg.far_y:
            tilt = tilt + cfg.step_far
            if tilt < cfg.tilt_min:
                tilt = cfg.tilt_min
        if errory < -cfg.far_y:
            tilt = tilt - cfg.step_far
            if tilt > cfg.tilt_max:
                tilt = cfg.tilt_max
        return tilt

    step = 0.0
    if errory > cfg.dead_y:
        step += cfg.step_small
    if errory < -cfg.dead_y:
        step -= cfg.step_small
    if errory > cfg.far_y:
        step += cfg.step_far
    if errory < -cfg.far_y:
        step -= cfg.step_far
    if step == 0.0:
        return tilt
    tilt = tilt + step
    if tilt < cfg.tilt_min:
        tilt = cfg.tilt_min
    if tilt > cfg.tilt_max:
        tilt = cfg.tilt_max
    return tilt


def ema_fps(fps: float, looptime: float) -> float:
    """Exponentially smoothed loop rate: 0.8 * previous + 0.2 / looptime."""
    if looptime <= 0:
        raise ValueError(f"looptime must be positive, got {looptime}")
    return FPS_SMOOTHING * fps + (1.0 - FPS_SMOOTHING) / looptime
