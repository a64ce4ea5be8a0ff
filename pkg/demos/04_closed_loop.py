"""Run full closed-loop scenarios and plot the convergence.

Run:  python3 demos/04_closed_loop.py
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pantiltsim import load_scenario, run_scenario

for name in ("stationary_offset", "circular_orbit"):
    spec = load_scenario(f"scenarios/{name}.yaml")
    records, summary = run_scenario(spec)
    print(f"{name}: lock at step {summary.time_to_lock}, "
          f"rms after lock {summary.rms_error_after_lock:.1f} px, "
          f"overshoot {summary.max_overshoot:.1f} px, "
          f"losses {summary.lost_count}")

    fig, (top, bottom) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    steps = [r.step for r in records]
    top.plot(steps, [r.errorx for r in records], label="errorx")
    top.plot(steps, [r.errory for r in records], label="errory")
    top.axhspan(-40, 40, color="tab:green", alpha=0.12, label="pan dead band")
    top.axhspan(-20, 20, color="tab:olive", alpha=0.18, label="tilt dead band")
    top.set_ylabel("pixel error")
    top.legend(loc="upper right", fontsize=8)
    bottom.plot(steps, [r.pan for r in records], label="pan")
    bottom.plot(steps, [r.tilt for r in records], label="tilt")
    bottom.set_ylabel("angle (deg)")
    bottom.set_xlabel("step")
    bottom.legend(loc="upper right", fontsize=8)
    fig.suptitle(name)
    fig.tight_layout()
    Path("demos/output").mkdir(parents=True, exist_ok=True)
    out = f"demos/output/04_{name}.png"
    fig.savefig(out, dpi=110)
    print("wrote", out)
