"""Minimise the discrete energy directly and sweep c to watch the film flatten.

The direct minimiser is an independent check on the shooting solver.

Run: python3 demos/minimizer_sweep.py
"""

import numpy as np

from nematic_films import MinimizeOptions, Parameters, minimize, shoot, sweep_c, verify_theorem_properties

params = Parameters(1.0, 3.5, 1.225)
res = minimize(params, MinimizeOptions.with_nodes(params.h, 401))
ref = shoot(params).profile(400)
check = verify_theorem_properties(res, params)
print(f"minimiser: {res.iterations} iterations, stop = {res.stop_reason}, E = {res.energy.total:.12g}")
print(f"sup |minimiser - shooting| = {np.max(np.abs(res.profile.values - ref.values)):.2e}")
print(f"checklist passed: {check.passed}")
print()

r = 5.0
print(f"sweep at h = 1, r = {r}")
print(f"{'c':>8} {'apex':>10} {'sup|rho - r|':>14} {'E/c':>10}")
for e in sweep_c(Parameters(1.0, r), [0.0, 1.0, 2.0, 10.0, 30.0, 100.0, 1000.0]):
    scaled = e.energy.total / e.c if e.c > 0 else float("nan")
    print(f"{e.c:8.1f} {e.apex:10.6f} {e.sup_distance:14.6f} {scaled:10.4f}")
