"""
SET kinetics of the linear drift model
======================================

Pulse a linear-drift device at several heights and time how long the state
takes to reach 0.5. With a constant ON/OFF mobility the product V_p * t_SET
is a constant of the window, so every curve is a straight line of slope -1
on log-log axes.

Run with an optional output directory (default ``demo_output``).
"""

import sys
from pathlib import Path

import numpy as np

from memcrit import classify_kinetics, kinetics_curve, make_model, normalize_kinetics
from memcrit.linear import analytic_set_time
from memcrit.svgplot import render_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

heights = [0.5, 0.7, 1.0, 1.4, 2.0]
curves = {}
for window in ("benderli", "joglekar", "biolek", "shin"):
    model = make_model(f"linear-{window}")
    curves[window] = kinetics_curve(model, heights, "fixed_half", duration=100.0)

# %%
# Simulated times against the closed form, and the volt-second product.

for window, curve in curves.items():
    model = make_model(f"linear-{window}")
    exact = np.array([analytic_set_time(model.params, model.window, v, model.x0) for v in heights])
    sim = curve.times
    k2 = heights * sim
    print(f"{window:9s} max rel. error {np.max(np.abs(sim / exact - 1)):.1e}   "
          f"V_p t_SET = {k2.mean():.4g} V s (spread {np.ptp(k2) / k2.mean():.1e})")

# %%
# Normalizing at 0.7 V removes the window dependence: all four curves
# collapse onto t/t(0.7 V) = 0.7 / V_p.

norm = {w: normalize_kinetics(c, 0.7) for w, c in curves.items()}
for w, c in norm.items():
    k = classify_kinetics(c)
    print(f"{w:9s} {k.kind}, exponent {k.exponent:+.4f}")

render_plot(list(curves.items()), "kinetics_loglog", out / "linear_kinetics.svg",
            "linear drift, fixed 0.5 threshold")
render_plot(list(norm.items()), "kinetics_loglog", out / "linear_kinetics_norm.svg",
            "normalized at 0.7 V")
print(f"plots in {out}/")
