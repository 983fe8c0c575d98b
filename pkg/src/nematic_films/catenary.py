"""Catenaries spanning two coaxial rings and the constants that classify them.

The rings have radius ``r`` and sit at ``x = -h`` and ``x = h``. A symmetric
catenary ``Pi * cosh(x / Pi)`` spans them when ``Pi * cosh(h / Pi) = r``.
Writing ``xi = Pi / h`` turns this into ``mu(xi) = h / r`` with
``mu(xi) = 1 / (xi * cosh(1 / xi))``, a unimodal function whose peak is
``1 / m`` (``m`` the minimum of ``cosh(x) / x``). The critical ratio
``omega`` separates catenoids that beat the two-disc (Goldschmidt) surface
from those that only locally minimise area.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, MissingSolutionError

__all__ = [
    "ModelConstants",
    "Regime",
    "CatenarySolution",
    "CatenaryProfile",
    "CatenaryComparison",
    "phi",
    "mu",
    "u_function",
    "f_nematic",
    "f_nematic_prime",
    "compute_constants",
    "classify_ratio",
    "solve_pi",
    "catenary_profile",
    "e0_closed_form",
    "compare_catenaries",
    "f_and_tangent_bound",
    "v_function",
    "v_prime",
    "key_inequality_check",
]

CROSSOVER_TOL = 1e-9
DOUBLE_ROOT_TOL = 1e-12


def _logcosh(t):
    t = abs(t)
    return t + math.log1p(math.exp(-2.0 * t)) - math.log(2.0)


def phi(x):
    """Return ``cosh(x) / x`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("phi is defined for x > 0 only")
    out = np.cosh(x) / x
    return float(out) if out.ndim == 0 else out


def mu(xi):
    """Aspect ratio ``h/r`` reached by the catenary of scale ``xi = Pi/h``."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0):
        raise DomainError("mu is defined for xi > 0 only")
    t = 1.0 / xi
    # exp(-t - logcosh t) avoids overflow of cosh for tiny xi
    logcosh = t + np.log1p(np.exp(-2.0 * t)) - math.log(2.0)
    out = np.exp(-np.log(xi) - logcosh)
    return float(out) if out.ndim == 0 else out


def u_function(s):
    """``sech^2(1/s)/s + tanh(1/s)``; equals 1 exactly at ``xi_star``."""
    s = np.asarray(s, dtype=float)
    t = 1.0 / s
    out = t / np.cosh(t) ** 2 + np.tanh(t)
    return float(out) if out.ndim == 0 else out


def _u_minus_one(s):
    # tanh(t) - 1 = -2/(exp(2t) + 1), kept separate to avoid cancellation
    t = 1.0 / s
    if t > 350.0:
        return 4.0 * t * math.exp(-2.0 * t)
    e2 = math.exp(2.0 * t)
    return t / math.cosh(t) ** 2 - 2.0 / (e2 + 1.0)


def f_nematic(x):
    """``x^2 / sqrt(1 + x^2)``, the slope part of the nematic density."""
    x = np.asarray(x, dtype=float)
    return x * x / np.sqrt(1.0 + x * x)


def f_nematic_prime(x):
    x = np.asarray(x, dtype=float)
    return x * (x * x + 2.0) / (1.0 + x * x) ** 1.5


@dataclass(frozen=True)
class ModelConstants:
    """Dimensionless constants of the model.

    Attributes
    ----------
    xi_star : float
        Unique positive root of ``u(s) = 1``.
    omega : float
        Critical aspect ratio ``1 / (xi_star * cosh(1 / xi_star))``.
    phi_min : float
        ``m``, the minimum of ``cosh(x)/x``.
    phi_argmin : float
        The minimiser of ``cosh(x)/x``, root of ``x tanh x = 1``.
    z0 : float
        ``sqrt((sqrt(5) - 1)/2)``, the slope where ``f'(z0) = 1``.
    beta : float
        ``arccosh(sqrt((sqrt(17) - 1)/2))``.
    """

    xi_star: float
    omega: float
    phi_min: float
    phi_argmin: float
    z0: float
    beta: float

    @property
    def inv_phi_min(self) -> float:
        return 1.0 / self.phi_min

    def as_dict(self) -> dict:
        return {
            "xi_star": self.xi_star,
            "omega": self.omega,
            "phi_min": self.phi_min,
            "inv_phi_min": self.inv_phi_min,
            "z0": self.z0,
            "beta": self.beta,
        }


@lru_cache(maxsize=8)
def compute_constants(tolerance: float = 1e-12) -> ModelConstants:
    """Compute the model constants with root finders at ``tolerance``.

    Brackets: ``xi_star`` in (0.1, 10) and ``phi_argmin`` in (0.5, 2).
    The result is cached per tolerance.
    """
    if not 0.0 < tolerance <= 1e-6:
        raise DomainError("tolerance must lie in (0, 1e-6]")
    xtol = tolerance * 1e-3
    try:
        xi_star = brentq(_u_minus_one, 0.1, 10.0, xtol=xtol, rtol=4 * np.finfo(float).eps)
        argmin = brentq(
            lambda x: x * math.tanh(x) - 1.0, 0.5, 2.0, xtol=xtol, rtol=4 * np.finfo(float).eps
        )
    except ValueError as exc:  # pragma: no cover - brackets are fixed
        raise RuntimeError(f"constant bracket failed: {exc}") from exc
    omega = 1.0 / (xi_star * math.cosh(1.0 / xi_star))
    z0 = math.sqrt((math.sqrt(5.0) - 1.0) / 2.0)
    beta = math.acosh(math.sqrt((math.sqrt(17.0) - 1.0) / 2.0))
    return ModelConstants(
        xi_star=xi_star,
        omega=omega,
        phi_min=math.cosh(argmin) / argmin,
        phi_argmin=argmin,
        z0=z0,
        beta=beta,
    )


class Regime(str, enum.Enum):
    UNIQUE_CATENOID = "UniqueCatenoid"
    CROSSOVER = "Crossover"
    LOCAL_CATENOID = "LocalCatenoid"
    GOLDSCHMIDT_ONLY = "GoldschmidtOnly"


def classify_ratio(ratio: float) -> Regime:
    k = compute_constants()
    if abs(ratio - k.omega) <= CROSSOVER_TOL:
        return Regime.CROSSOVER
    if ratio < k.omega:
        return Regime.UNIQUE_CATENOID
    if ratio <= k.inv_phi_min * (1.0 + DOUBLE_ROOT_TOL):
        return Regime.LOCAL_CATENOID
    return Regime.GOLDSCHMIDT_ONLY


@dataclass(frozen=True)
class CatenarySolution:
    """Roots ``pi0 >= pi1`` of ``Pi cosh(h/Pi) = r`` and the regime they imply."""

    h: float
    r: float
    pi0: float | None
    pi1: float | None
    ratio: float
    regime: Regime

    @property
    def n_roots(self) -> int:
        if self.pi0 is None:
            return 0
        return 1 if self.pi0 == self.pi1 else 2

    def roots(self) -> tuple[float, ...]:
        if self.pi0 is None:
            return ()
        if self.pi0 == self.pi1:
            return (self.pi0,)
        return (self.pi0, self.pi1)


def solve_pi(h: float, r: float, tolerance: float = 1e-12) -> CatenarySolution:
    """Find every symmetric catenary spanning the rings.

    Each branch of ``mu`` is bracketed separately: the increasing branch on
    ``(0, 1/phi_argmin)`` holds ``pi1/h``, the decreasing one holds ``pi0/h``.
    """
    if h <= 0 or r <= 0:
        raise DomainError("h and r must be positive")
    k = compute_constants()
    lam = h / r
    regime = classify_ratio(lam)
    xi_m = 1.0 / k.phi_argmin
    inv_m = k.inv_phi_min

    if lam > inv_m * (1.0 + DOUBLE_ROOT_TOL):
        return CatenarySolution(h, r, None, None, lam, regime)
    if abs(lam - inv_m) <= DOUBLE_ROOT_TOL * inv_m:
        pi = h * xi_m
        return CatenarySolution(h, r, pi, pi, lam, regime)

    log_lam = math.log(lam)

    def gap(xi):
        # log(xi cosh(1/xi)) + log(h/r); negative between the two roots
        return math.log(xi) + _logcosh(1.0 / xi) + log_lam

    rtol = max(4 * np.finfo(float).eps, min(tolerance, 1e-12) * 1e-2)
    hi = max(1.0 / lam, xi_m) * 2.0
    xi0 = brentq(gap, xi_m, hi, xtol=1e-300, rtol=rtol, maxiter=500)
    lo = xi_m
    while gap(lo) <= 0.0:
        lo *= 0.5
    xi1 = brentq(gap, lo, xi_m, xtol=1e-300, rtol=rtol, maxiter=500)
    return CatenarySolution(h, r, h * xi0, h * xi1, lam, regime)


@dataclass(frozen=True)
class CatenaryProfile:
    """The curve ``Pi * cosh((x - x0) / Pi)``."""

    pi: float
    x0: float = 0.0

    def __post_init__(self):
        if not self.pi > 0:
            raise DomainError("catenary scale must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.pi * np.cosh((x - self.x0) / self.pi)
        return float(out) if out.ndim == 0 else out

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        out = np.sinh((x - self.x0) / self.pi)
        return float(out) if out.ndim == 0 else out

    def second_derivative(self, x):
        return self(x) / self.pi**2


def catenary_profile(sol: CatenarySolution, which: str = "stable") -> CatenaryProfile:
    """Return the stable (``pi0``) or unstable (``pi1``) catenary."""
    if which not in ("stable", "unstable"):
        raise ValueError("which must be 'stable' or 'unstable'")
    pi = sol.pi0 if which == "stable" else sol.pi1
    if pi is None:
        raise MissingSolutionError(
            f"no catenary spans rings with h/r = {sol.ratio:.6g} (regime {sol.regime.value})"
        )
    return CatenaryProfile(pi)


def e0_closed_form(h: float, r: float, pi: float) -> float:
    """Area functional of the catenary ``pi``: ``pi*h + r*sqrt(r^2 - pi^2)``."""
    if pi <= 0:
        raise DomainError("pi must be positive")
    if pi > r:
        raise DomainError("pi must not exceed r")
    return pi * h + r * math.sqrt(r * r - pi * pi)


@dataclass(frozen=True)
class CatenaryComparison:
    e_stable: float
    e_unstable: float
    goldschmidt: float
    ordering: str

    def as_dict(self) -> dict:
        return {
            "e_stable": self.e_stable,
            "e_unstable": self.e_unstable,
            "goldschmidt": self.goldschmidt,
            "ordering": self.ordering,
        }


def compare_catenaries(h: float, r: float) -> CatenaryComparison:
    """Energies of both catenaries next to the Goldschmidt value ``r^2``."""
    sol = solve_pi(h, r)
    if sol.n_roots != 2:
        raise MissingSolutionError("comparison needs two distinct catenaries")
    e0 = e0_closed_form(h, r, sol.pi0)
    e1 = e0_closed_form(h, r, sol.pi1)
    if not e0 < e1:
        raise RuntimeError(f"stable catenary energy {e0} not below unstable {e1}")
    gold = r * r
    entries = sorted([("stable", e0), ("unstable", e1), ("goldschmidt", gold)], key=lambda p: p[1])
    return CatenaryComparison(e0, e1, gold, " < ".join(name for name, _ in entries))


def f_and_tangent_bound(x, y):
    """Residual ``f(x) - f(y) - f'(y)(x - y)``; nonnegative for ``y`` in [0, z0]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z0 = compute_constants().z0
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    if np.any(y < 0) or np.any(y > z0):
        raise DomainError("y must lie in [0, z0]")
    out = f_nematic(x) - f_nematic(y) - f_nematic_prime(y) * (x - y)
    return float(out) if out.ndim == 0 else out


def v_function(t):
    t = np.asarray(t, dtype=float)
    ch = np.cosh(t)
    return np.sinh(t) * (1.0 + ch * ch) / ch**4


def v_prime(t):
    """Derivative of ``v``: ``(4 - C - C^2) / cosh^5 t`` with ``C = cosh^2 t``."""
    t = np.asarray(t, dtype=float)
    ch = np.cosh(t)
    c2 = ch * ch
    return (4.0 - c2 - c2 * c2) / ch**5


def key_inequality_check(pi0: float, h: float, n_samples: int = 10001) -> float:
    """Minimum over ``[0, h]`` of ``d/dx[(1/rho0) f'(rho0')]`` for ``rho0 = pi0 cosh(x/pi0)``.

    The derivative equals ``v'(x/pi0) / pi0**2``. Warns when ``h/pi0 > beta``,
    where nonnegativity is no longer guaranteed.
    """
    if pi0 <= 0 or h <= 0:
        raise DomainError("pi0 and h must be positive")
    if h / pi0 > compute_constants().beta:
        warnings.warn(
            f"h/pi0 = {h / pi0:.6g} exceeds beta; the monotonicity bound may fail",
            RuntimeWarning,
            stacklevel=2,
        )
    x = np.linspace(0.0, h, n_samples)
    return float(np.min(v_prime(x / pi0)) / pi0**2)
