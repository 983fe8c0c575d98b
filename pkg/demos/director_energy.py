"""Split the director-field energy into its four integrals.

A constant angle field carries only the profile functional; any variation in
the angle adds positive energy, and the cross term vanishes for sin(phi).

Run: python3 demos/director_energy.py
"""

import math

import numpy as np

from nematic_films import DirectorField, Parameters, PhysicalParams, director_energy, evaluate, shoot

phys = PhysicalParams(gamma=1.0, kappa=2.0)
p = shoot(Parameters(1.0, 3.5, phys.c)).profile(400)
print(f"c = kappa / (2 gamma) = {phys.c}, 2 pi gamma E_c = {2 * math.pi * phys.gamma * evaluate(p, phys.c).total:.10f}")
print(f"{'alpha':>16} {'I1':>14} {'I2':>12} {'I3':>12} {'I4':>12}")

fields = {
    "0.3": lambda x, phi: np.full_like(x, 0.3),
    "sin(phi)": lambda x, phi: np.sin(phi),
    "x / 2": lambda x, phi: 0.5 * x + 0 * phi,
    "x + cos(2 phi)": lambda x, phi: x + np.cos(2 * phi),
}
for name, func in fields.items():
    d = director_energy(p, DirectorField.from_function(p.grid, func), phys)
    print(f"{name:>16} {d.I1:14.10f} {d.I2:12.6f} {d.I3:12.6f} {d.I4:12.2e}")
