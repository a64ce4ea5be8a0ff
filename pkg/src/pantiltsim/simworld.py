"""Synthetic scene: a pinhole camera on a pan/tilt mount observing one target.

Coordinate conventions (binding for the whole package):

* World axes coincide with the camera frame at pan 0, tilt 0: X right,
  Y down, Z forward (optical axis). Positive pan turns the camera toward
  world +X, positive tilt toward -Y (up).
* A world point is brought into the camera frame by rotating through -pan
  about the vertical axis, then -tilt about the horizontal axis.
* ``project`` returns raw sensor coordinates. The rendered frame is
  mirrored in both axes (mount orientation), so on the *displayed* image a
  target right of center has positive errorx and is re-centered by
  decreasing pan: the stepped controller closes a negative-feedback loop.

Rendering, projection and trajectory stepping are pure functions of their
inputs plus an optional caller-owned random generator, so identical inputs
and seed state reproduce frames bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gimbal import GimbalState
from .tracker import BBox

FRAME_WIDTH_PX = 1000
FRAME_HEIGHT_PX = 800
DEFAULT_HFOV_DEG = 60.0

BACKGROUND_INTENSITY = 64
DISK_INTENSITY = 200
RIM_INTENSITY = 120
RIM_WIDTH_PX = 2.0

TRAJECTORY_KINDS = ("stationary", "linear", "circular", "random_walk", "operator_driven")


@dataclass(frozen=True)
class CameraModel:
    """Pinhole camera rigidly mounted on the gimbal head."""

    frame_width: int = FRAME_WIDTH_PX
    frame_height: int = FRAME_HEIGHT_PX
    hfov_deg: float = DEFAULT_HFOV_DEG
    flip_both_axes: bool = True

    def __post_init__(self):
        if self.frame_width <= 0 or self.frame_height <= 0:
            raise ValueError("frame dimensions must be positive")
        if not 0.0 < self.hfov_deg < 180.0:
            raise ValueError("hfov_deg must lie in (0, 180)")

    @property
    def focal_px(self) -> float:
        """Focal length in pixels, derived from width and horizontal FOV."""
        return (self.frame_width / 2) / math.tan(math.radians(self.hfov_deg) / 2)


@dataclass
class TargetState:
    """Tracked object: a sphere of given radius at a world position."""

    position: np.ndarray
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    radius: float = 0.05

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64)
        self.velocity = np.asarray(self.velocity, dtype=np.float64)
        if self.position.shape != (3,) or self.velocity.shape != (3,):
            raise ValueError("position and velocity must be 3-vectors")
        if not np.all(np.isfinite(self.position)):
            raise ValueError("position must be finite")
        if self.radius <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class TrajectorySpec:
    """Declarative target motion: one kind plus its parameters.

    linear uses the target's own velocity; circular orbits about ``center``
    around the vertical axis at ``angular_rate_deg`` per step; random_walk
    adds seeded Gaussian x/y increments of ``walk_sigma`` meters per step;
    operator_driven takes its velocity from steer commands.
    """

    kind: str = "stationary"
    center: tuple[float, float, float] | None = None
    angular_rate_deg: float = 0.0
    walk_sigma: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in TRAJECTORY_KINDS:
            raise ValueError(f"kind must be one of {TRAJECTORY_KINDS}, got {self.kind!r}")
        if self.kind == "random_walk" and self.seed is None:
            raise ValueError("random_walk requires a seed")
        if self.kind == "circular" and self.center is None:
            raise ValueError("circular requires a center")
        if self.walk_sigma < 0:
            raise ValueError("walk_sigma must be >= 0")


@dataclass
class Frame:
    """Single-channel 8-bit image with a monotonically increasing sequence number."""

    width: int
    height: int
    pixels: np.ndarray
    seq: int = 0

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(
                f"pixel grid {self.pixels.shape} does not match {self.height}x{self.width}")
        if self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be uint8")


def position_at(azimuth_deg: float, elevation_deg: float, distance: float) -> np.ndarray:
    """World point at the given viewing direction and range from the camera.

    A gimbal at pan == azimuth and tilt == elevation has this point exactly
    on its optical axis.
    """
    az = math.radians(azimuth_deg)
    el = math.radians(elevation_deg)
    return distance * np.array(
        [math.cos(el) * math.sin(az), -math.sin(el), math.cos(el) * math.cos(az)])


def _camera_frame(gimbal: GimbalState, point: Sequence[float]) -> tuple[float, float, float]:
    """Rotate a world point through -pan (vertical axis), then -tilt (horizontal)."""
    x, y, z = float(point[0]), float(point[1]), float(point[2])
    p = math.radians(gimbal.pan_deg)
    t = math.radians(gimbal.tilt_deg)
    x1 = math.cos(p) * x - math.sin(p) * z
    z1 = math.sin(p) * x + math.cos(p) * z
    y2 = math.cos(t) * y + math.sin(t) * z1
    z2 = -math.sin(t) * y + math.cos(t) * z1
    return x1, y2, z2


def world_from_camera(gimbal: GimbalState, point: Sequence[float]) -> np.ndarray:
    """Inverse of the world-to-camera rotation: place camera-frame coordinates
    into the world given the gimbal pose. Useful for staging targets at an
    exact sensor offset."""
    x, y, z = float(point[0]), float(point[1]), float(point[2])
    p = math.radians(gimbal.pan_deg)
    t = math.radians(gimbal.tilt_deg)
    y1 = math.cos(t) * y - math.sin(t) * z
    z1 = math.sin(t) * y + math.cos(t) * z
    x2 = math.cos(p) * x + math.sin(p) * z1
    z2 = -math.sin(p) * x + math.cos(p) * z1
    return np.array([x2, y1, z2])


def project(camera: CameraModel, gimbal: GimbalState, point) -> tuple[float, float] | None:
    """Pinhole projection of a world point, in raw (pre-flip) pixel coordinates.

    Returns None when the point is at or behind the image plane.
    """
    if not np.all(np.isfinite(np.asarray(point, dtype=np.float64))):
        raise ValueError("point must be finite")
    x, y, z = _camera_frame(gimbal, point)
    if z <= 0.0:
        return None
    f = camera.focal_px
    u = camera.frame_width / 2 + f * x / z
    v = camera.frame_height / 2 + f * y / z
    return u, v


def ground_truth_bbox(camera: CameraModel, gimbal: GimbalState,
                      target: TargetState) -> BBox | None:
    """Tight integer box around the target in displayed (post-flip) coordinates.

    Projects the center and the +-radius extents, mirrors through the flip
    when the camera applies one, and clips to the frame. Returns None when
    the center is behind the image plane or nothing remains after clipping.
    """
    x, y, z = _camera_frame(gimbal, target.position)
    if z <= 0.0:
        return None
    f = camera.focal_px
    w, h = camera.frame_width, camera.frame_height
    r = target.radius
    u_lo = w / 2 + f * (x - r) / z
    u_hi = w / 2 + f * (x + r) / z
    v_lo = h / 2 + f * (y - r) / z
    v_hi = h / 2 + f * (y + r) / z
    if camera.flip_both_axes:
        u_lo, u_hi = w - u_hi, w - u_lo
        v_lo, v_hi = h - v_hi, h - v_lo
    x0 = max(0, math.floor(u_lo))
    y0 = max(0, math.floor(v_lo))
    x1 = min(w, math.ceil(u_hi))
    y1 = min(h, math.ceil(v_hi))
    if x1 <= x0 or y1 <= y0:
        return None
    return BBox(x0, y0, x1 - x0, y1 - y0)


def render_frame(camera: CameraModel, gimbal: GimbalState,
                 target: TargetState | None, noise_sigma: float = 0.0,
                 rng: np.random.Generator | None = None, seq: int = 0) -> Frame:
    """Render one frame: flat background, rim-textured disk, optional noise.

    The disk is drawn at intensity 200 with a 2 px darker rim (120) so the
    patch has structure a correlation tracker can lock onto. Zero-mean
    Gaussian noise from the caller's generator is added before the flip and
    clamped (not wrapped) to [0, 255]. When ``flip_both_axes`` is set the
    finished grid is mirrored in both axes.
    """
    w, h = camera.frame_width, camera.frame_height
    img = np.full((h, w), BACKGROUND_INTENSITY, dtype=np.uint8)

    if target is not None:
        cf = _camera_frame(gimbal, target.position)
        x, y, z = cf
        if z > 0.0:
            f = camera.focal_px
            u = w / 2 + f * x / z
            v = h / 2 + f * y / z
            rad = f * target.radius / z
            x0 = max(0, int(math.floor(u - rad)) - 1)
            x1 = min(w, int(math.ceil(u + rad)) + 1)
            y0 = max(0, int(math.floor(v - rad)) - 1)
            y1 = min(h, int(math.ceil(v + rad)) + 1)
            if x1 > x0 and y1 > y0:
                ys = np.arange(y0, y1, dtype=np.float64)[:, None] + 0.5 - v
                xs = np.arange(x0, x1, dtype=np.float64)[None, :] + 0.5 - u
                dist2 = xs * xs + ys * ys
                patch = img[y0:y1, x0:x1]
                patch[dist2 < rad * rad] = RIM_INTENSITY
                core = rad - RIM_WIDTH_PX
                if core > 0:
                    patch[dist2 < core * core] = DISK_INTENSITY

    if noise_sigma > 0.0:
        if rng is None:
            raise ValueError("noise_sigma > 0 requires a random generator")
        noisy = img + rng.normal(0.0, noise_sigma, size=img.shape)
        img = np.clip(np.rint(noisy), 0, 255).astype(np.uint8)

    if camera.flip_both_axes:
        img = np.ascontiguousarray(img[::-1, ::-1])
    return Frame(w, h, img, seq)


def step_target(spec: TrajectorySpec, state: TargetState,
                steer: tuple[float, float] | None = None,
                rng: np.random.Generator | None = None) -> TargetState:
    """Advance the target one simulation step under its trajectory."""
    if steer is not None and spec.kind != "operator_driven":
        raise ValueError(f"steer commands are not valid for a {spec.kind} trajectory")

    if spec.kind == "stationary":
        return state

    if spec.kind == "linear":
        return TargetState(state.position + state.velocity, state.velocity, state.radius)

    if spec.kind == "circular":
        center = np.asarray(spec.center, dtype=np.float64)
        rel = state.position - center
        a = math.radians(spec.angular_rate_deg)
        ca, sa = math.cos(a), math.sin(a)
        # orbit about the vertical (world Y) axis through the center
        rotated = np.array(
            [ca * rel[0] + sa * rel[2], rel[1], -sa * rel[0] + ca * rel[2]])
        new_pos = center + rotated
        return TargetState(new_pos, new_pos - state.position, state.radius)

    if spec.kind == "random_walk":
        if rng is None:
            raise ValueError("random_walk requires the trajectory's random generator")
        step = np.zeros(3)
        step[:2] = rng.normal(0.0, spec.walk_sigma, size=2)  # x/y only: range stays fixed
        return TargetState(state.position + step, step, state.radius)

    # operator_driven: velocity follows the latest steer command, zero if none
    vx, vy = steer if steer is not None else (0.0, 0.0)
    velocity = np.array([vx, vy, 0.0])
    return TargetState(state.position + velocity, velocity, state.radius)
