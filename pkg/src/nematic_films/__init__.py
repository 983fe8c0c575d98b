"""Variational solvers for axisymmetric nematic films spanning two coaxial rings.

The profile ``rho`` on ``[-h, h]`` with ``rho(+-h) = r`` minimises

    E_c(rho) = int rho sqrt(1 + rho'^2) + c rho'^2 / (rho sqrt(1 + rho'^2)) dx.

Submodules
----------
catenary
    Model constants, catenary roots and the c = 0 energy landscape.
profile
    Sampled profiles, convex envelope, catenary barrier and CSV I/O.
energy
    Exact discrete energy, its gradient and the director-field split.
elsolver
    Shooting solver for the Euler-Lagrange equation with certification.
minimizer
    Direct minimisation of the discrete energy and c sweeps.
geometry_export
    Revolution meshes, surface area and curvature fields.
cli
    The ``nematic-films`` command.
"""

from .catenary import (
    CatenaryProfile,
    CatenarySolution,
    ModelConstants,
    Regime,
    catenary_profile,
    classify_ratio,
    compare_catenaries,
    compute_constants,
    e0_closed_form,
    solve_pi,
)
from .elsolver import Parameters, ShootingSolution, el_residual, shoot
from .energy import DirectorField, EnergyBreakdown, PhysicalParams, director_energy, evaluate, gradient
from .errors import (
    DomainError,
    MismatchError,
    MissingSolutionError,
    NematicFilmError,
    NoSolutionError,
    PeriodicityError,
    PositivityError,
    ResolutionError,
)
from .geometry_export import CurvatureField, RevolutionMesh, build_mesh, curvatures, mesh_area
from .minimizer import MinimizeOptions, MinimizeResult, minimize, sweep_c, verify_theorem_properties
from .profile import Grid, ProfileCurve, convex_envelope, max_with, read_profile_csv, write_profile_csv

__version__ = "0.1.0"

__all__ = [
    "CatenaryProfile",
    "CatenarySolution",
    "ModelConstants",
    "Regime",
    "catenary_profile",
    "classify_ratio",
    "compare_catenaries",
    "compute_constants",
    "e0_closed_form",
    "solve_pi",
    "Parameters",
    "ShootingSolution",
    "el_residual",
    "shoot",
    "DirectorField",
    "EnergyBreakdown",
    "PhysicalParams",
    "director_energy",
    "evaluate",
    "gradient",
    "DomainError",
    "MismatchError",
    "MissingSolutionError",
    "NematicFilmError",
    "NoSolutionError",
    "PeriodicityError",
    "PositivityError",
    "ResolutionError",
    "CurvatureField",
    "RevolutionMesh",
    "build_mesh",
    "curvatures",
    "mesh_area",
    "MinimizeOptions",
    "MinimizeResult",
    "minimize",
    "sweep_c",
    "verify_theorem_properties",
    "Grid",
    "ProfileCurve",
    "convex_envelope",
    "max_with",
    "read_profile_csv",
    "write_profile_csv",
]
