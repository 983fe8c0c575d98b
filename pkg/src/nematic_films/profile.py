"""Sampled profile curves on a uniform grid over ``[-h, h]``.

A profile is the piecewise-linear interpolant of its nodal values. The
operations here never change the grid: the convex envelope, the pointwise
maximum with a catenary and the even reflections all return nodal values on
the same nodes.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MismatchError, PositivityError, ResolutionError

__all__ = [
    "Grid",
    "ProfileCurve",
    "ShapeReport",
    "lower_hull_indices",
    "convex_envelope",
    "max_with",
    "symmetrize",
    "shape_report",
    "write_profile_csv",
    "read_profile_csv",
]

ADMISSIBLE_TOL = 1e-12
EVEN_TOL = 1e-9
CONVEX_TOL = -1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform nodes ``x_i = -h + i * 2h / n_cells`` for ``i = 0..n_cells``."""

    h: float
    n_cells: int

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.n_cells < 2 or self.n_cells % 2:
            raise ResolutionError("n_cells must be even and at least 2")

    @classmethod
    def from_nodes(cls, h: float, n_nodes: int) -> "Grid":
        return cls(h, n_nodes - 1)

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def dx(self) -> float:
        return 2.0 * self.h / self.n_cells

    @property
    def nodes(self) -> np.ndarray:
        # mirrored construction keeps x_i == -x_{n-i} exactly
        half = self.n_cells // 2
        left = -self.h + np.arange(half) * self.dx
        return np.concatenate([left, [0.0], -left[::-1]])


class ProfileCurve:
    """Nodal values of a radius function on a :class:`Grid`.

    Values are copied and frozen on construction; every value must be
    strictly positive.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        values = np.array(values, dtype=float)
        if values.shape != (grid.n_nodes,):
            raise ValueError(f"expected {grid.n_nodes} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite")
        if np.any(values <= 0):
            raise PositivityError("profile values must be strictly positive")
        values.flags.writeable = False
        self.grid = grid
        self.values = values

    @classmethod
    def from_function(cls, grid: Grid, func) -> "ProfileCurve":
        return cls(grid, func(grid.nodes))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "ProfileCurve":
        return cls(grid, np.full(grid.n_nodes, float(value)))

    def __repr__(self):
        return f"ProfileCurve(h={self.grid.h}, n_cells={self.grid.n_cells}, apex={self.apex:.6g})"

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def apex(self) -> float:
        return float(self.values[self.grid.n_cells // 2])

    @property
    def boundary_value(self) -> float:
        return float(0.5 * (self.values[0] + self.values[-1]))

    @property
    def admissible(self) -> bool:
        """Both endpoint values agree, i.e. the profile spans equal rings."""
        a, b = self.values[0], self.values[-1]
        return bool(abs(a - b) <= ADMISSIBLE_TOL * max(abs(a), abs(b)))

    def spans(self, r: float) -> bool:
        tol = ADMISSIBLE_TOL * r
        return bool(abs(self.values[0] - r) <= tol and abs(self.values[-1] - r) <= tol)

    @property
    def slopes(self) -> np.ndarray:
        """Forward-difference slope of every cell."""
        return np.diff(self.values) / self.grid.dx

    @property
    def nodal_slopes(self) -> np.ndarray:
        """Average of adjacent cell slopes; one-sided at the endpoints."""
        s = self.slopes
        out = np.empty(self.grid.n_nodes)
        out[1:-1] = 0.5 * (s[:-1] + s[1:])
        out[0] = s[0]
        out[-1] = s[-1]
        return out

    def with_values(self, values) -> "ProfileCurve":
        return ProfileCurve(self.grid, values)

    def __call__(self, x):
        return np.interp(x, self.grid.nodes, self.values)


@dataclass(frozen=True)
class ShapeReport:
    is_even: bool
    is_convex: bool
    min_value: float
    max_slope: float
    even_defect: float
    min_slope_increment: float

    def as_dict(self) -> dict:
        return {
            "is_even": self.is_even,
            "is_convex": self.is_convex,
            "min_value": self.min_value,
            "max_slope": self.max_slope,
        }


def lower_hull_indices(x: np.ndarray, y: np.ndarray) -> list[int]:
    """Indices of the lower convex hull of points sorted by ``x`` (monotone chain)."""
    hull: list[int] = []
    for k in range(len(x)):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            cross = (x[j] - x[i]) * (y[k] - y[i]) - (y[j] - y[i]) * (x[k] - x[i])
            if cross > 0:
                break
            hull.pop()
        hull.append(k)
    return hull


def _is_numerically_convex(p: ProfileCurve) -> bool:
    scale = float(np.max(np.abs(p.values)))
    tol = 64 * np.finfo(float).eps * scale / p.grid.dx
    return bool(np.all(np.diff(p.slopes) >= -tol))


def convex_envelope(p: ProfileCurve) -> ProfileCurve:
    """Greatest convex piecewise-linear function below ``p``, sampled on its nodes.

    Profiles that are already convex up to rounding come back unchanged, which
    makes the operation idempotent bit for bit.
    """
    if _is_numerically_convex(p):
        return p
    x = p.grid.nodes
    idx = lower_hull_indices(x, p.values)
    env = np.interp(x, x[idx], p.values[idx])
    env = np.minimum(env, p.values)
    return p.with_values(env)


def max_with(p: ProfileCurve, cat, rtol: float = 1e-10) -> ProfileCurve:
    """Nodewise ``max(p, cat)`` for a catenary spanning the same rings as ``p``.

    Endpoint values are taken from ``p``.
    """
    x = p.grid.nodes
    cat_vals = np.asarray(cat(x), dtype=float)
    for end in (0, -1):
        if abs(cat_vals[end] - p.values[end]) > rtol * max(abs(p.values[end]), 1.0):
            raise MismatchError(
                f"catenary value {cat_vals[end]:.12g} at x = {x[end]:.6g} does not match "
                f"profile boundary value {p.values[end]:.12g}"
            )
    out = np.maximum(p.values, cat_vals)
    # ring values are data; keep them exactly rather than the catenary's rounding
    out[0], out[-1] = p.values[0], p.values[-1]
    return p.with_values(out)


def symmetrize(p: ProfileCurve, side: str = "left") -> ProfileCurve:
    """Reflect one half of ``p`` across ``x = 0``; the result is exactly even."""
    v = p.values
    mid = p.grid.n_cells // 2
    if side == "left":
        half = v[: mid + 1]
        out = np.concatenate([half, half[-2::-1]])
    elif side == "right":
        half = v[mid:]
        out = np.concatenate([half[:0:-1], half])
    else:
        raise ValueError("side must be 'left' or 'right'")
    return p.with_values(out)


def shape_report(p: ProfileCurve) -> ShapeReport:
    v = p.values
    even_defect = float(np.max(np.abs(v - v[::-1])))
    s = p.slopes
    inc = np.diff(s)
    min_inc = float(np.min(inc)) if inc.size else 0.0
    return ShapeReport(
        is_even=even_defect <= EVEN_TOL,
        is_convex=min_inc >= CONVEX_TOL,
        min_value=float(np.min(v)),
        max_slope=float(np.max(np.abs(s))),
        even_defect=even_defect,
        min_slope_increment=min_inc,
    )


def _atomic_write_text(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def format_number(value: float) -> str:
    return f"{value:.12g}"


def profile_csv_text(p: ProfileCurve) -> str:
    buf = io.StringIO()
    buf.write("x,rho\n")
    for xi, vi in zip(p.grid.nodes, p.values):
        buf.write(f"{format_number(xi)},{format_number(vi)}\n")
    return buf.getvalue()


def write_profile_csv(p: ProfileCurve, path) -> None:
    """Write ``x,rho`` rows, one per node."""
    _atomic_write_text(path, profile_csv_text(p))


def read_profile_csv(path) -> ProfileCurve:
    """Read a profile written by :func:`write_profile_csv`.

    The ``x`` column must describe a uniform grid symmetric about zero.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["x", "rho"]:
            raise ValueError("profile CSV must start with header 'x,rho'")
        rows = [row for row in reader if row]
    try:
        data = np.array([[float(row[0]), float(row[1])] for row in rows])
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed profile CSV: {exc}") from exc
    if data.shape[0] < 3:
        raise ResolutionError("profile CSV needs at least 3 rows")
    x, rho = data[:, 0], data[:, 1]
    h = 0.5 * (x[-1] - x[0])
    grid = Grid(h, len(x) - 1)
    if abs(x[0] + h) > 1e-9 * max(h, 1.0) or np.max(np.abs(x - grid.nodes)) > 1e-8 * max(h, 1.0):
        raise ValueError("profile CSV x column is not a uniform grid symmetric about 0")
    return ProfileCurve(grid, rho)
