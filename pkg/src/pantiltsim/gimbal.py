"""Two-axis servo head model: commanded angles, travel limits, optional slew."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

INITIAL_PAN_DEG = 0.0
INITIAL_TILT_DEG = -20.0

# Travel range used when running the faithful controller mode: wide enough
# that the one-sided tilt clamps are observable instead of being masked by
# the simulated hardware.
WIDE_TILT_MIN_DEG = -180.0
WIDE_TILT_MAX_DEG = 180.0


class GimbalState(NamedTuple):
    pan_deg: float
    tilt_deg: float


def initial_state() -> GimbalState:
    return GimbalState(INITIAL_PAN_DEG, INITIAL_TILT_DEG)


@dataclass(frozen=True)
class GimbalLimits:
    """Physical travel limits plus an optional per-step slew cap (degrees)."""

    pan_min: float = -90.0
    pan_max: float = 90.0
    tilt_min: float = -40.0
    tilt_max: float = 90.0
    slew_max: float = math.inf

    def __post_init__(self):
        if self.pan_min >= self.pan_max or self.tilt_min >= self.tilt_max:
            raise ValueError("need min < max per axis")
        if not self.slew_max > 0:
            raise ValueError("slew_max must be positive")


def _move_axis(current: float, command: float, lo: float, hi: float, slew: float) -> float:
    delta = command - current
    if delta > slew:
        delta = slew
    elif delta < -slew:
        delta = -slew
    moved = current + delta
    return min(max(moved, lo), hi)


def apply(state: GimbalState, pan_cmd: float, tilt_cmd: float,
          limits: GimbalLimits) -> GimbalState:
    """Move each axis toward its command, at most slew_max degrees, then clamp.

    With slew unlimited (the default) the result is simply the clamped
    command, matching instantaneous set-angle servo semantics.
    """
    if not (math.isfinite(pan_cmd) and math.isfinite(tilt_cmd)):
        raise ValueError("command angles must be finite")
    return GimbalState(
        _move_axis(state.pan_deg, pan_cmd, limits.pan_min, limits.pan_max, limits.slew_max),
        _move_axis(state.tilt_deg, tilt_cmd, limits.tilt_min, limits.tilt_max, limits.slew_max),
    )
