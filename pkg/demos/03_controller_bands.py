"""Tabulate the dead-band stepped controller and the loop-rate smoother.

Run:  python3 demos/03_controller_bands.py
"""

from pantiltsim import ControllerConfig, ema_fps, pan_update, tilt_update

faithful = ControllerConfig(mode="faithful")
corrected = ControllerConfig(mode="corrected")

print("pan response from 0 deg (both modes agree on pan):")
print(f"{'errorx':>8} {'step':>6}")
for e in (0, 25, 40, 41, 80, 120, 121, 200, -41, -121):
    print(f"{e:>8} {pan_update(e, 0.0, faithful) - 0.0:>+6.0f}")
print("inside the +-40 px band nothing moves; past 120 px the 1 and 3 degree"
      " branches fire together (net 4).")

print("\ntilt clamp behavior at the +90 deg limit:")
tilt_f = tilt_y = 90.0
for i in range(4):
    tilt_f = tilt_update(70.0, tilt_f, faithful)
    tilt_y = tilt_update(70.0, tilt_y, corrected)
print(f"  faithful mode walks to {tilt_f:.0f} deg (one-sided clamps kept)")
print(f"  corrected mode holds at {tilt_y:.0f} deg")

print("\nloop-rate smoothing from a cold start (true rate 15 Hz):")
fps = 0.0
for i in range(1, 26):
    fps = ema_fps(fps, 1.0 / 15.0)
    if i in (1, 2, 5, 10, 25):
        print(f"  after {i:>2} frames: {fps:6.2f} fps")
