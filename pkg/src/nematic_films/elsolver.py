"""Shooting solver for the Euler-Lagrange equation of the film energy.

Minimisers are even, so the boundary-value problem on ``[-h, h]`` is solved
as an initial-value problem from the apex ``x = 0`` with ``rho(0) = a`` and
``rho'(0) = 0``. A coarse scan over ``a`` brackets sign changes of
``g(a) = rho(h; a) - r`` and each bracket is bisected. Integration uses
fixed-step classical RK4 so that certification is deterministic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .catenary import compute_constants, solve_pi
from .errors import DomainError, NoSolutionError, ResolutionError
from .profile import Grid, ProfileCurve

__all__ = [
    "Parameters",
    "Trajectory",
    "ShootingSolution",
    "Certification",
    "el_rhs",
    "first_integral_residual",
    "integrate_from_apex",
    "shoot",
    "el_residual",
    "el_residual_profile",
]

COMPLETED, SLOPE_GUARD, OUT_OF_RANGE = 0, 1, 2
_STATUS_NAMES = {COMPLETED: "completed", SLOPE_GUARD: "slope_guard", OUT_OF_RANGE: "out_of_range"}

DEFAULT_STEPS_PER_HALF = 4000
CERTIFY_DRIFT = 1e-8
CERTIFY_EL = 1e-5
CERTIFY_CELLS = 2000


@dataclass(frozen=True)
class Parameters:
    """Half-height ``h``, ring radius ``r`` and nematic ratio ``c``."""

    h: float
    r: float
    c: float = 0.0

    def __post_init__(self):
        if not (self.h > 0 and self.r > 0):
            raise DomainError("h and r must be positive")
        if not self.c >= 0:
            raise DomainError("c must be nonnegative")

    @property
    def ratio(self) -> float:
        return self.h / self.r

    @property
    def outside_standing_assumption(self) -> bool:
        """True when ``h/r > omega``; existence results are not guaranteed there."""
        return self.ratio > compute_constants().omega

    def with_c(self, c: float) -> "Parameters":
        return Parameters(self.h, self.r, c)


def el_rhs(rho, rho_prime, c):
    """Second derivative ``rho''`` prescribed by the Euler-Lagrange equation."""
    rho = np.asarray(rho, dtype=float)
    rho_prime = np.asarray(rho_prime, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("rho must be positive")
    if c > 0 and np.any(np.abs(rho_prime) >= math.sqrt(2.0)):
        raise DomainError("|rho'| must stay below sqrt(2) when c > 0")
    p2 = rho_prime * rho_prime
    r2 = rho * rho
    num = (1.0 + p2) * ((c + r2) * p2 + r2)
    den = rho * (r2 * p2 + c * (2.0 - p2) + r2)
    out = num / den
    return float(out) if out.ndim == 0 else out


def first_integral_residual(rho, rho_prime, c, apex):
    """``c rho'^2 / (rho (1+rho'^2)^{3/2}) - rho / sqrt(1+rho'^2) + apex``."""
    rho = np.asarray(rho, dtype=float)
    rho_prime = np.asarray(rho_prime, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("rho must be positive")
    q = 1.0 + rho_prime * rho_prime
    out = c * rho_prime**2 / (rho * q**1.5) - rho / np.sqrt(q) + apex
    return float(out) if out.ndim == 0 else out


@numba.njit(cache=True)
def _rhs(rho, p, c):
    p2 = p * p
    r2 = rho * rho
    return (1.0 + p2) * ((c + r2) * p2 + r2) / (rho * (r2 * p2 + c * (2.0 - p2) + r2))


@numba.njit(cache=True)
def _rk4(apex, c, dx, n_steps, slope_cap, rho_cap, rho_out, p_out):
    rho = apex
    p = 0.0
    rho_out[0] = rho
    p_out[0] = p
    for i in range(n_steps):
        k1r = p
        k1p = _rhs(rho, p, c)
        k2r = p + 0.5 * dx * k1p
        k2p = _rhs(rho + 0.5 * dx * k1r, k2r, c)
        k3r = p + 0.5 * dx * k2p
        k3p = _rhs(rho + 0.5 * dx * k2r, k3r, c)
        k4r = p + dx * k3p
        k4p = _rhs(rho + dx * k3r, k4r, c)
        rho = rho + dx / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        p = p + dx / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        rho_out[i + 1] = rho
        p_out[i + 1] = p
        if p >= slope_cap:
            return i + 1, 1
        if not (rho > 0.0 and rho < rho_cap):
            return i + 1, 2
    return n_steps, 0


@dataclass(frozen=True)
class Trajectory:
    """RK4 samples of ``(rho, rho')`` on ``[0, x_end]``."""

    x: np.ndarray
    rho: np.ndarray
    rho_prime: np.ndarray
    status: str
    h: float

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    @property
    def end_value(self) -> float:
        return float(self.rho[-1])


def _n_steps(h: float, step: float | None) -> int:
    if step is None:
        return DEFAULT_STEPS_PER_HALF
    if not step > 0:
        raise DomainError("step must be positive")
    return max(1, int(math.ceil(h / step - 1e-9)))


def integrate_from_apex(apex: float, params: Parameters, step: float | None = None) -> Trajectory:
    """Integrate the EL system from ``x = 0`` to ``x = h`` with classical RK4.

    ``step`` defaults to ``2h/8000``; it is rounded down so an integer number
    of steps covers ``[0, h]``. Integration stops early, with a flagged
    status, once ``rho'`` reaches ``z0`` or ``rho`` leaves ``(0, 2r)``.
    """
    if not 0 < apex <= params.r:
        raise DomainError("apex must lie in (0, r]")
    n = _n_steps(params.h, step)
    dx = params.h / n
    rho = np.empty(n + 1)
    p = np.empty(n + 1)
    k, status = _rk4(apex, params.c, dx, n, compute_constants().z0, 2.0 * params.r, rho, p)
    x = np.arange(k + 1) * dx
    if k == n:
        x[-1] = params.h
    return Trajectory(x=x, rho=rho[: k + 1], rho_prime=p[: k + 1], status=_STATUS_NAMES[status], h=params.h)


def _boundary_gap(apex, params, n, buf_r, buf_p, z0):
    dx = params.h / n
    k, status = _rk4(apex, params.c, dx, n, z0, 2.0 * params.r, buf_r, buf_p)
    if status != COMPLETED:
        return math.inf
    return buf_r[n] - params.r


@dataclass(frozen=True)
class Certification:
    drift: float
    el_residual: float
    max_slope: float
    strictly_convex: bool
    even: bool
    drift_ok: bool
    el_ok: bool
    slope_ok: bool

    @property
    def passed(self) -> bool:
        return self.drift_ok and self.el_ok and self.slope_ok and self.strictly_convex and self.even

    def as_dict(self) -> dict:
        return {
            "drift": self.drift,
            "el_residual": self.el_residual,
            "max_slope": self.max_slope,
            "strictly_convex": self.strictly_convex,
            "even": self.even,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ShootingSolution:
    """Apex value and dense RK4 samples of the even EL solution on ``[0, h]``."""

    params: Parameters
    apex: float
    x: np.ndarray
    rho: np.ndarray
    rho_prime: np.ndarray
    boundary_residual: float
    roots: tuple = ()
    scan: tuple = field(default=(), repr=False)

    @property
    def max_slope(self) -> float:
        return float(np.max(np.abs(self.rho_prime)))

    @property
    def first_integral(self) -> np.ndarray:
        return first_integral_residual(self.rho, self.rho_prime, self.params.c, self.apex)

    @property
    def drift(self) -> float:
        return float(np.max(np.abs(self.first_integral)))

    def profile(self, n_cells: int | None = None) -> ProfileCurve:
        """Even extension to ``[-h, h]``.

        Without ``n_cells`` the RK4 samples are mirrored directly. Otherwise the
        half solution is resampled with cubic Hermite interpolation of
        ``(rho, rho')`` onto the requested grid.
        """
        h = self.params.h
        if n_cells is None:
            grid = Grid(h, 2 * (len(self.x) - 1))
            vals = np.concatenate([self.rho[:0:-1], self.rho])
            return ProfileCurve(grid, vals)
        grid = Grid(h, n_cells)
        spline = CubicHermiteSpline(self.x, self.rho, self.rho_prime)
        x = grid.nodes
        half = spline(np.abs(x[grid.n_cells // 2 :]))
        half[0] = self.apex
        vals = np.concatenate([half[:0:-1], half])
        return ProfileCurve(grid, vals)

    def certify(
        self, drift_tol: float = CERTIFY_DRIFT, el_tol: float = CERTIFY_EL, n_cells: int = CERTIFY_CELLS
    ) -> Certification:
        p = self.params
        z0 = compute_constants().z0
        resampled = self.profile(n_cells)
        el = el_residual(resampled, p.c)
        full = self.profile()
        second = np.diff(full.values, 2)
        convex = bool(np.all(second > 0) and np.all(np.diff(self.rho_prime) > 0))
        even = bool(np.array_equal(full.values, full.values[::-1]))
        drift = self.drift
        return Certification(
            drift=drift,
            el_residual=el,
            max_slope=self.max_slope,
            strictly_convex=convex,
            even=even,
            drift_ok=drift <= drift_tol * p.r,
            el_ok=el <= el_tol,
            slope_ok=self.max_slope < z0,
        )

    def summary(self) -> dict:
        return {
            "h": self.params.h,
            "r": self.params.r,
            "c": self.params.c,
            "apex": self.apex,
            "boundary_residual": self.boundary_residual,
            "max_slope": self.max_slope,
            "drift": self.drift,
            "roots": list(self.roots),
        }


def _bisect(params, lo, hi, glo, ghi, n, buf_r, buf_p, z0, max_iter=200):
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = _boundary_gap(mid, params, n, buf_r, buf_p, z0)
        if gm == 0.0:
            return mid, 0.0
        if (gm > 0) == (ghi > 0):
            hi, ghi = mid, gm
        else:
            lo, glo = mid, gm
    return (lo, glo) if abs(glo) <= abs(ghi) else (hi, ghi)


def shoot(
    params: Parameters,
    tolerance: float = 1e-12,
    step: float | None = None,
    n_scan: int = 256,
) -> ShootingSolution:
    """Solve the EL boundary-value problem by shooting from the apex.

    Scans ``n_scan`` apex values on ``[max(pi1, eps), r]`` (``pi1`` the
    unstable catenary scale when it exists, ``eps = 1e-9 r``), bisects every
    sign change of ``rho(h; a) - r`` and keeps roots with
    ``|rho(h) - r| <= tolerance * r``. Trajectories stopped by the slope
    guard count as ``+inf``. The largest admissible apex is returned.

    Raises
    ------
    NoSolutionError
        No admissible root was bracketed.
    """
    if params.outside_standing_assumption:
        warnings.warn(
            f"h/r = {params.ratio:.6g} exceeds omega; solving outside the standing assumption",
            RuntimeWarning,
            stacklevel=2,
        )
    n = _n_steps(params.h, step)
    z0 = compute_constants().z0
    buf_r = np.empty(n + 1)
    buf_p = np.empty(n + 1)
    cat = solve_pi(params.h, params.r)
    lo = cat.pi1 if cat.pi1 is not None else 1e-9 * params.r
    apexes = np.linspace(max(lo, 1e-9 * params.r), params.r, n_scan)
    gaps = np.array([_boundary_gap(a, params, n, buf_r, buf_p, z0) for a in apexes])
    scan = tuple(zip(apexes.tolist(), gaps.tolist()))

    roots = []
    for i in range(n_scan - 1):
        g0, g1 = gaps[i], gaps[i + 1]
        if g0 == 0.0:
            roots.append((apexes[i], 0.0))
            continue
        if (g0 > 0) != (g1 > 0) and g1 != 0.0:
            a, g = _bisect(params, apexes[i], apexes[i + 1], g0, g1, n, buf_r, buf_p, z0)
            if math.isfinite(g) and abs(g) <= tolerance * params.r:
                roots.append((a, g))
    if not roots:
        raise NoSolutionError(
            f"no apex in [{apexes[0]:.6g}, {apexes[-1]:.6g}] reaches rho(h) = r "
            f"(h={params.h}, r={params.r}, c={params.c})",
            scan=scan,
        )
    apex, gap = max(roots)
    traj = integrate_from_apex(apex, params, step)
    return ShootingSolution(
        params=params,
        apex=float(apex),
        x=traj.x,
        rho=traj.rho,
        rho_prime=traj.rho_prime,
        boundary_residual=abs(float(traj.rho[-1]) - params.r),
        roots=tuple(sorted((float(a) for a, _ in roots), reverse=True)),
        scan=scan,
    )


def el_residual_profile(p: ProfileCurve, c: float) -> np.ndarray:
    """EL defect ``lhs - rhs`` at interior nodes using central differences."""
    if p.grid.n_nodes < 5:
        raise ResolutionError("el_residual needs at least 5 nodes")
    v = p.values
    dx = p.grid.dx
    rho = v[1:-1]
    rp = (v[2:] - v[:-2]) / (2.0 * dx)
    rpp = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / dx**2
    p2 = rp * rp
    r2 = rho * rho
    lhs = (1.0 + p2) * ((c + r2) * p2 + r2)
    rhs = rho * rpp * (r2 * p2 + c * (2.0 - p2) + r2)
    return lhs - rhs


def el_residual(p: ProfileCurve, c: float) -> float:
    """Maximum absolute EL defect normalised by ``r^2`` (``r`` the boundary value)."""
    r = p.boundary_value
    return float(np.max(np.abs(el_residual_profile(p, c)))) / r**2
