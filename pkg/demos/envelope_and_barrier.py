"""Two energy-lowering operations on profiles: convexify and lift to the catenary.

Run: python3 demos/envelope_and_barrier.py
"""

import numpy as np

from nematic_films import Grid, ProfileCurve, catenary_profile, convex_envelope, evaluate, max_with, solve_pi

h, r = 1.0, 3.5
g = Grid(h, 200)
# a wiggly profile; the wiggle vanishes at the rings so rho(+-h) = r
wiggle = 3.0 + 0.5 * g.nodes**2 + 0.15 * np.sin(9 * g.nodes) * (1 - g.nodes**2)
p = ProfileCurve(g, wiggle)
env = convex_envelope(p)
print("convex envelope")
for c in (0.0, 0.1, 1.0, 10.0):
    print(f"  c = {c:5.1f}   E(p) = {evaluate(p, c).total:.8f}   E(envelope) = {evaluate(env, c).total:.8f}")

# a convex profile dipping under the stable catenary
cat = catenary_profile(solve_pi(h, r))
dip = ProfileCurve.from_function(g, lambda x: 2.8 + 0.7 * x**2)
lifted = max_with(dip, cat)
print()
print(f"max with the catenary (apex {dip.apex:.3f} -> {lifted.apex:.3f})")
for c in (0.1, 1.0, 10.0):
    print(f"  c = {c:5.1f}   E(p) = {evaluate(dip, c).total:.8f}   E(p v rho0) = {evaluate(lifted, c).total:.8f}")
