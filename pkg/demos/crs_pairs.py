"""
Anti-serial pairs
=================

Two identical devices connected back to back. For a linear-drift model with
matched windows the state changes cancel and the pair is just a resistor; a
nonlinear kinetic model gives the familiar ON window between two thresholds.
"""

import sys
from pathlib import Path

from memcrit import crs_analysis, crs_system, integrate, make_model, triangular_sweep
from memcrit.svgplot import render_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

sweep = triangular_sweep(10.0, -10.0, 10.0)

# %%
# Symmetric start: A nearly OFF, B nearly ON (B's state is given in its own
# frame). R_total stays flat to rounding.

m = make_model("linear-joglekar")
flat = integrate(crs_system(m, m, 0.001, 0.999), sweep)
r = crs_analysis(flat)
print(f"symmetric  R_total {r.r_total_min:.6g} .. {r.r_total_max:.6g} ohm")

# %%
# Asymmetric start: the smooth window lets the pair leave the constant-R line.

skew = integrate(crs_system(m, m, 0.001, 0.9999), sweep)
r = crs_analysis(skew)
lo, hi = r.on_window
print(f"asymmetric R_total {r.r_total_min:.6g} .. {r.r_total_max:.6g} ohm, "
      f"ON window {lo:.3f} .. {hi:.3f} V")

# %%
# A sinh-kinetics pair switches A on near the positive threshold and B off
# at a higher voltage, leaving a low-resistance window in between.

y = make_model("yakopcic")
pair = integrate(crs_system(y, y, 0.0, 1.0), triangular_sweep(4.0, -4.0, 1.0))
r = crs_analysis(pair)
lo, hi = r.on_window
print(f"yakopcic   ON window {lo:.3f} .. {hi:.3f} V, SET onsets "
      + ", ".join(f"{k} {v:.3f} V" for k, v in r.set_onset.items()))

data = [("linear symmetric", flat), ("linear skewed", skew), ("yakopcic 1 V/s", pair)]
render_plot(data, "resistance_vs_t", out / "crs_resistance.svg", "anti-serial pairs")
render_plot(data[2:], "iv_loop", out / "crs_yakopcic_iv.svg", "yakopcic pair")
