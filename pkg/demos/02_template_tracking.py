"""Exercise the NCC template tracker: lock, follow, lose, re-acquire.

Run:  python3 demos/02_template_tracking.py
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pantiltsim import (CameraModel, GimbalState, NccTracker, TargetState,
                        TrackerParams, ground_truth_bbox, render_frame,
                        world_from_camera)

cam = CameraModel(400, 300, 60.0)
level = GimbalState(0.0, 0.0)
depth = 2.0


def staged(px_x, px_y, px_radius=16.0):
    """Target whose disk center sits at the given display offset."""
    pos = world_from_camera(level, [-px_x * depth / cam.focal_px,
                                    -px_y * depth / cam.focal_px, depth])
    return TargetState(pos, radius=px_radius * depth / cam.focal_px)


frame0 = render_frame(cam, level, staged(0, 0))
roi = ground_truth_bbox(cam, level, staged(0, 0))
print("selecting ROI", roi)

tracker = NccTracker(TrackerParams(search_radius=24))
tracker.init(frame0, roi)

# follow a wandering disk
path = [(4, 2), (9, 5), (15, 3), (22, -2), (28, -8), (30, -16)]
for px, py in path:
    ok, box, score = tracker.update(render_frame(cam, level, staged(px, py)))
    print(f"target at ({px:+3d},{py:+3d}) px -> box ({box.x},{box.y}) "
          f"score {score:.3f} {'ok' if ok else 'LOST'}")

# blank the scene: the tracker reports lost and holds its box
ok, box, score = tracker.update(render_frame(cam, level, None))
print(f"blank frame -> score {score:.3f}, success={ok}, box held at ({box.x},{box.y})")

# the disk reappears near the held box and is picked up again
ok, box, score = tracker.update(render_frame(cam, level, staged(33, -18)))
print(f"reappeared -> score {score:.3f}, success={ok}, box ({box.x},{box.y})")

fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))
axes[0].imshow(tracker.template, cmap="gray", vmin=0, vmax=255)
axes[0].set_title("adapted template")
last = render_frame(cam, level, staged(33, -18))
axes[1].imshow(last.pixels, cmap="gray", vmin=0, vmax=255)
axes[1].add_patch(plt.Rectangle((box.x, box.y), box.w, box.h,
                                edgecolor="tab:blue", facecolor="none", lw=1.5))
axes[1].set_title("re-acquired")
fig.tight_layout()
Path("demos/output").mkdir(parents=True, exist_ok=True)
fig.savefig("demos/output/02_tracking.png", dpi=110)
print("wrote demos/output/02_tracking.png")
