"""Surfaces of revolution built from a profile: meshes, area and curvature.

The surface is ``Z(phi, x) = (rho(x) cos phi, rho(x) sin phi, x)``. Triangles
are oriented so that their normals point away from the axis, matching the
surface normal ``Z_phi x Z_x``.

Curvature sign convention: the mean curvature ``H`` is taken with respect to
that outward normal, so a cylinder of radius ``r`` has ``H = -1/(2r)`` and a
catenoid has ``H = 0``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError
from .profile import ProfileCurve, _atomic_write_text, format_number

__all__ = [
    "RevolutionMesh",
    "MeshArea",
    "CurvatureField",
    "build_mesh",
    "mesh_area",
    "face_normals",
    "curvatures",
    "obj_text",
    "write_obj",
    "curvature_csv_text",
    "write_curvature_csv",
]

MIN_AZIMUTHAL = 8
MIN_CURVATURE_NODES = 5


@dataclass(frozen=True)
class RevolutionMesh:
    """Tensor-product triangle mesh over ``(x, phi)``.

    Vertex ``i * n_azimuthal + j`` sits at axial node ``i`` and angle
    ``2*pi*j / n_azimuthal``. Faces are 0-based index triples and wrap in
    ``phi``, so no vertex is duplicated at ``phi = 2*pi``.
    """

    vertices: np.ndarray
    faces: np.ndarray
    n_azimuthal: int
    n_axial: int

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_faces(self) -> int:
        return int(self.faces.shape[0])

    def ring(self, i: int) -> np.ndarray:
        """Vertices of axial ring ``i``."""
        return self.vertices[i * self.n_azimuthal : (i + 1) * self.n_azimuthal]


def build_mesh(p: ProfileCurve, n_azimuthal: int = 64) -> RevolutionMesh:
    if n_azimuthal < MIN_AZIMUTHAL:
        raise ResolutionError(f"n_azimuthal must be at least {MIN_AZIMUTHAL}")
    x = p.grid.nodes
    rho = p.values
    n_ax = len(x)
    phi = 2.0 * np.pi * np.arange(n_azimuthal) / n_azimuthal
    cos, sin = np.cos(phi), np.sin(phi)
    verts = np.empty((n_ax, n_azimuthal, 3))
    verts[:, :, 0] = rho[:, None] * cos[None, :]
    verts[:, :, 1] = rho[:, None] * sin[None, :]
    verts[:, :, 2] = x[:, None]

    i = np.arange(n_ax - 1)[:, None]
    j = np.arange(n_azimuthal)[None, :]
    jn = (j + 1) % n_azimuthal
    a = i * n_azimuthal + j
    b = i * n_azimuthal + jn
    c = (i + 1) * n_azimuthal + j
    d = (i + 1) * n_azimuthal + jn
    # (a, b, c) and (b, d, c) both have edges along Z_phi then Z_x
    lower = np.stack([a, b, c], axis=-1).reshape(-1, 3)
    upper = np.stack([b, d, c], axis=-1).reshape(-1, 3)
    faces = np.empty((2 * lower.shape[0], 3), dtype=np.int64)
    faces[0::2] = lower
    faces[1::2] = upper
    return RevolutionMesh(verts.reshape(-1, 3), faces, n_azimuthal, n_ax)


@dataclass(frozen=True)
class MeshArea:
    area: float
    n_degenerate: int

    def __float__(self):
        return self.area


def _face_areas(m: RevolutionMesh) -> np.ndarray:
    v = m.vertices
    f = m.faces
    e1 = v[f[:, 1]] - v[f[:, 0]]
    e2 = v[f[:, 2]] - v[f[:, 0]]
    return 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)


def face_normals(m: RevolutionMesh) -> np.ndarray:
    """Unnormalised face normals ``(v1 - v0) x (v2 - v0)``."""
    v = m.vertices
    f = m.faces
    return np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])


def mesh_area(m: RevolutionMesh) -> MeshArea:
    """Sum of triangle areas, skipping degenerate faces.

    A face is degenerate when its area is below ``1e-14`` times the squared
    extent of the mesh; such faces are counted and left out of the sum.
    """
    areas = _face_areas(m)
    extent = float(np.max(np.ptp(m.vertices, axis=0))) if m.n_vertices else 0.0
    degenerate = areas <= 1e-14 * extent**2
    return MeshArea(area=float(np.sum(areas[~degenerate])), n_degenerate=int(np.count_nonzero(degenerate)))


@dataclass(frozen=True)
class CurvatureField:
    """Gaussian curvature ``K`` and mean curvature ``H`` at the profile nodes."""

    x: np.ndarray
    K: np.ndarray
    H: np.ndarray

    @property
    def max_abs_H(self) -> float:
        return float(np.max(np.abs(self.H)))

    @property
    def K_relative_spread(self) -> float:
        """``std(K) / |mean(K)|``; infinite when the mean vanishes."""
        mean = float(np.mean(self.K))
        std = float(np.std(self.K))
        return std / abs(mean) if mean != 0.0 else np.inf


def _derivatives(v: np.ndarray, dx: float) -> tuple[np.ndarray, np.ndarray]:
    d1 = np.empty_like(v)
    d2 = np.empty_like(v)
    d1[1:-1] = (v[2:] - v[:-2]) / (2.0 * dx)
    d2[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / dx**2
    # second-order one-sided stencils at the ends, written in differences so
    # that constant data gives exact zeros
    e = np.diff(v)
    d1[0] = (3.0 * e[0] - e[1]) / (2.0 * dx)
    d1[-1] = (3.0 * e[-1] - e[-2]) / (2.0 * dx)
    d2[0] = (-2.0 * e[0] + 3.0 * e[1] - e[2]) / dx**2
    d2[-1] = (2.0 * e[-1] - 3.0 * e[-2] + e[-3]) / dx**2
    return d1, d2


def curvatures(p: ProfileCurve) -> CurvatureField:
    """Per-node ``K`` and ``H`` from finite-difference derivatives of ``p``.

    ``K = -rho'' / (rho (1 + rho'^2)^2)`` and
    ``H = (rho rho'' - (1 + rho'^2)) / (2 rho (1 + rho'^2)^(3/2))``.
    """
    if p.grid.n_nodes < MIN_CURVATURE_NODES:
        raise ResolutionError(f"curvatures need at least {MIN_CURVATURE_NODES} nodes")
    rho = p.values
    d1, d2 = _derivatives(rho, p.grid.dx)
    w = 1.0 + d1 * d1
    K = -d2 / (rho * w * w)
    H = (rho * d2 - w) / (2.0 * rho * w**1.5)
    return CurvatureField(x=p.grid.nodes.copy(), K=K, H=H)


def obj_text(m: RevolutionMesh) -> str:
    buf = io.StringIO()
    fmt = format_number
    for x, y, z in m.vertices:
        buf.write(f"v {fmt(x)} {fmt(y)} {fmt(z)}\n")
    for a, b, c in m.faces + 1:
        buf.write(f"f {a} {b} {c}\n")
    return buf.getvalue()


def write_obj(m: RevolutionMesh, path) -> None:
    """Write ``v x y z`` and 1-based ``f i j k`` records."""
    _atomic_write_text(path, obj_text(m))


def curvature_csv_text(field: CurvatureField) -> str:
    buf = io.StringIO()
    buf.write("x,K,H\n")
    for x, k, h in zip(field.x, field.K, field.H):
        buf.write(f"{format_number(x)},{format_number(k)},{format_number(h)}\n")
    return buf.getvalue()


def write_curvature_csv(field: CurvatureField, path) -> None:
    _atomic_write_text(path, curvature_csv_text(field))
