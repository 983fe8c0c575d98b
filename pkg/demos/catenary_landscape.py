"""Catenary roots, regimes and energies as the aspect ratio h/r grows.

Run: python3 demos/catenary_landscape.py
"""

import numpy as np

from nematic_films import compute_constants, e0_closed_form, solve_pi

k = compute_constants()
print(f"omega = {k.omega:.12g}   1/m = {k.inv_phi_min:.12g}   z0 = {k.z0:.12g}")
print()
print(f"{'h/r':>8} {'regime':>16} {'Pi0':>12} {'Pi1':>12} {'E0(rho0)':>12} {'r^2':>8}")

r = 1.0
for ratio in np.linspace(0.1, 0.7, 13):
    h = ratio * r
    sol = solve_pi(h, r)
    if sol.pi0 is None:
        print(f"{ratio:8.3f} {sol.regime.value:>16} {'-':>12} {'-':>12} {'-':>12} {r * r:8.3f}")
        continue
    e0 = e0_closed_form(h, r, sol.pi0)
    print(f"{ratio:8.3f} {sol.regime.value:>16} {sol.pi0:12.6f} {sol.pi1:12.6f} {e0:12.6f} {r * r:8.3f}")

# the catenoid and the two disks tie exactly at h/r = omega
r = 1.0 / k.omega
sol = solve_pi(1.0, r)
print()
print(f"at h/r = omega: E0(rho0) - r^2 = {e0_closed_form(1.0, r, sol.pi0) - r * r:.2e}")
