"""Shoot for the even Euler-Lagrange solution and certify it.

The apex rho(0) rises with c, and every solution stays strictly between the
stable catenary and the cylinder of radius r.

Run: python3 demos/shooting_certified.py
"""

import numpy as np

from nematic_films import Parameters, catenary_profile, shoot, solve_pi

h, r = 1.0, 3.5
pi0 = solve_pi(h, r).pi0
rho0 = catenary_profile(solve_pi(h, r))
print(f"h = {h}, r = {r}, stable catenary apex Pi0 = {pi0:.10f}")
print(f"{'c':>8} {'apex':>14} {'drift':>10} {'EL res':>10} {'max slope':>10} {'gap to rho0':>12} {'certified':>9}")

for c in [0.0, 0.1, 1.0, 10.0, 100.0]:
    sol = shoot(Parameters(h, r, c))
    cert = sol.certify()
    p = sol.profile()
    gap = np.min(p.values[1:-1] - rho0(p.x[1:-1]))
    print(
        f"{c:8.2f} {sol.apex:14.10f} {cert.drift:10.2e} {cert.el_residual:10.2e} "
        f"{cert.max_slope:10.4f} {gap:12.3e} {str(cert.passed):>9}"
    )
