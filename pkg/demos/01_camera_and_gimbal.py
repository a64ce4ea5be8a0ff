"""Walk through the simulated optics: projection, flip, and loop gain.

Run:  python3 demos/01_camera_and_gimbal.py
"""

import math
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pantiltsim import (CameraModel, GimbalState, TargetState, ground_truth_bbox,
                        position_at, project, render_frame)

cam = CameraModel()
print(f"camera: {cam.frame_width}x{cam.frame_height}, hfov {cam.hfov_deg} deg")
print(f"derived focal length: {cam.focal_px:.2f} px")

# A point straight down the optical axis lands on the frame center.
level = GimbalState(0.0, 0.0)
print("on-axis point ->", project(cam, level, [0.0, 0.0, 2.0]))

# A point half the horizontal FOV off axis lands on the frame edge.
edge = position_at(cam.hfov_deg / 2, 0.0, 2.0)
print("half-FOV point ->", project(cam, level, edge))

# The degrees-to-pixels loop gain near the center: ~15.1 px per degree.
u0, _ = project(cam, GimbalState(0.0, 0.0), [0.0, 0.0, 2.0])
u1, _ = project(cam, GimbalState(1.0, 0.0), [0.0, 0.0, 2.0])
print(f"1 degree of pan moves a centered target {abs(u1 - u0):.2f} px")
print(f"(focal_px * tan(1 deg) = {cam.focal_px * math.tan(math.radians(1)):.2f})")

# Rendered frames are mirrored in both axes (camera mount orientation), so
# a target panned to the camera's right appears left of center on screen.
target = TargetState(position_at(8.0, 0.0, 2.0), radius=0.12)
frame = render_frame(cam, level, target)
box = ground_truth_bbox(cam, level, target)
print(f"target at azimuth +8 deg -> displayed box {box} (left of center: "
      f"center x = {box.x + box.w / 2:.0f})")

fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
for ax, flip in zip(axes, (False, True)):
    c = CameraModel(flip_both_axes=flip)
    f = render_frame(c, level, target)
    ax.imshow(f.pixels, cmap="gray", vmin=0, vmax=255)
    ax.set_title("flipped display" if flip else "raw sensor")
    ax.axvline(c.frame_width / 2, color="tab:orange", lw=0.6)
    ax.axhline(c.frame_height / 2, color="tab:orange", lw=0.6)
fig.tight_layout()
Path("demos/output").mkdir(parents=True, exist_ok=True)
fig.savefig("demos/output/01_flip.png", dpi=110)
print("wrote demos/output/01_flip.png")
