"""
Hysteresis loops and window functions
=====================================

Sweep each window variant through two triangular cycles and look at two
fingerprints: whether the loop is point-symmetric about the origin, and how
the SET voltage moves with the sweep rate.
"""

import sys
from pathlib import Path

from memcrit import (extract_switching_voltages, integrate, loop_symmetry_error, make_model,
                     single_device_system, triangular_sweep)
from memcrit.svgplot import render_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

x0 = {"benderli": 0.002, "joglekar": 1e-12, "biolek": 0.0, "shin": 0.0}

# %%
# State-only windows give loops that map onto themselves under (v, i) -> (-v, -i);
# current-dependent windows do not.

loops = []
for window, start in x0.items():
    system = single_device_system(make_model(f"linear-{window}", x0=start))
    tr = integrate(system, triangular_sweep(15.0, -15.0, 10.0, cycles=2))
    loops.append((window, tr))
    print(f"{window:9s} symmetry error {loop_symmetry_error(tr):.2e}")

render_plot(loops, "iv_loop", out / "window_loops.svg", "two cycles at 10 V/s")

# %%
# Faster sweeps leave less time per volt, so SET moves to higher voltage.

for window in ("biolek", "shin"):
    model = make_model(f"linear-{window}", x0=0.0)
    row = []
    for rate in (10.0, 30.0, 100.0):
        tr = integrate(single_device_system(model), triangular_sweep(15.0, -15.0, rate))
        v_set, _ = extract_switching_voltages(tr)
        row.append(f"{rate:5g} V/s: {v_set:.3f} V")
    print(f"{window:9s} " + "   ".join(row))
