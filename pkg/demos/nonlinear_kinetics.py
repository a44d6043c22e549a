"""
Nonlinear switching kinetics
============================

The sinh-type and tunnel-gap models switch many decades faster for a
modest increase in pulse height, which the linear model cannot do.
This script measures how many decades of t_SET each doubling of V_p buys.
"""

import sys
from pathlib import Path

from memcrit import classify_kinetics, kinetics_curve, make_model
from memcrit.svgplot import render_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

runs = {
    "laiho": [0.5, 0.75, 1.0, 1.5, 2.0, 3.0],
    "chang": [0.5, 0.75, 1.0, 1.5, 2.0, 3.0],
    "yakopcic": [1.5, 2.0, 2.5, 3.0],
    # the tunnel-gap barrier formula is only valid at low bias
    "pickett": [0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
}

curves = []
for mid, heights in runs.items():
    curve = kinetics_curve(make_model(mid), heights, "half_range", duration=1e4)
    k = classify_kinetics(curve)
    print(f"{mid:9s} {k.kind:17s} {k.decades_per_doubling:6.2f} decades per doubling")
    curves.append((mid, curve))

# %%
# Below its threshold the Yakopcic model does not move at all.

below = kinetics_curve(make_model("yakopcic"), [0.8, 1.0, 1.2, 1.5], "half_range", duration=10.0)
for v, t in below.points:
    print(f"yakopcic {v:.1f} V: " + ("no switching" if t is None else f"t_SET = {t:.3g} s"))

render_plot(curves, "kinetics_loglog", out / "nonlinear_kinetics.svg", "SET kinetics")
