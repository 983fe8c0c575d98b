"""Command-line front end.

Every subcommand reads its settings from flags and, optionally, a JSON config
file (``--config``) carrying ``"schema": 1``. Flags override the file. Data
files are written atomically with numbers at 12 significant digits, so the
same settings always produce byte-identical outputs.

Exit codes: 0 success, 2 usage or parse error, 3 no solution,
4 certification or convergence failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import energy
from .catenary import catenary_profile, compute_constants, e0_closed_form, solve_pi
from .elsolver import DEFAULT_STEPS_PER_HALF, Parameters, shoot
from .errors import DomainError, NematicFilmError, NoSolutionError
from .geometry_export import build_mesh, curvatures, mesh_area, write_curvature_csv, write_obj
from .minimizer import MinimizeOptions, minimize, sweep_c, verify_theorem_properties
from .profile import (
    Grid,
    ProfileCurve,
    _atomic_write_text,
    convex_envelope,
    format_number,
    read_profile_csv,
    write_profile_csv,
)

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_SOLUTION = 3
EXIT_CERTIFICATION = 4

CONFIG_SCHEMA = 1

# settings that may come from the config file, with their defaults
DEFAULTS = {
    "h": None,
    "r": None,
    "c": 0.0,
    "nodes": None,
    "step": None,
    "tol": None,
    "out": ".",
    "source": "solve",
    "input": None,
    "n_azimuthal": 64,
    "max_iters": 200,
    "gamma": 1.0,
    "kappa": None,
    "alpha": "sin-phi",
    "amplitude": 1.0,
    "n_phi": 128,
}


class UsageError(Exception):
    pass


def _round12(value):
    """Round floats to 12 significant digits for JSON output; non-finite becomes null."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return float(format_number(value)) if math.isfinite(value) else None
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def _json_text(obj) -> str:
    return json.dumps(_round12(obj), indent=2) + "\n"


def _emit(obj) -> None:
    sys.stdout.write(_json_text(obj))


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- parsing


def _c_list(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad c list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file with \"schema\": 1")
    common.add_argument("--h", type=float, default=argparse.SUPPRESS, help="half-height of the film")
    common.add_argument("--r", type=float, default=argparse.SUPPRESS, help="ring radius")
    common.add_argument("--c", default=argparse.SUPPRESS, help="nematic ratio (sweep: comma list)")
    common.add_argument("--nodes", type=int, default=argparse.SUPPRESS, help="profile nodes")
    common.add_argument("--step", type=float, default=argparse.SUPPRESS, help="RK4 step")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="solver tolerance")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")

    parser = argparse.ArgumentParser(prog="nematic-films", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="print the model constants")
    sub.add_parser("classify", parents=[common], help="classify (h, r) by catenary regime")
    sub.add_parser("catenary", parents=[common], help="write the stable catenary profile")
    sub.add_parser("solve", parents=[common], help="shoot for the EL solution and certify it")
    p = sub.add_parser("minimize", parents=[common], help="minimise the discrete energy directly")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=argparse.SUPPRESS)
    sub.add_parser("sweep", parents=[common], help="minimise over a list of c values")
    p = sub.add_parser("mesh", parents=[common], help="export a revolution mesh and curvatures")
    p.add_argument("--source", choices=["solve", "minimize", "catenary", "csv"], default=argparse.SUPPRESS)
    p.add_argument("--input", default=argparse.SUPPRESS, help="profile CSV for --source csv")
    p.add_argument("--n-azimuthal", dest="n_azimuthal", type=int, default=argparse.SUPPRESS)
    p = sub.add_parser("envelope", parents=[common], help="convex envelope of a profile CSV")
    p.add_argument("input", nargs="?", default=argparse.SUPPRESS, help="profile CSV (x,rho)")
    p = sub.add_parser("director-check", parents=[common], help="print the director energy split")
    p.add_argument("--gamma", type=float, default=argparse.SUPPRESS)
    p.add_argument("--kappa", type=float, default=argparse.SUPPRESS)
    p.add_argument("--alpha", choices=["constant", "sin-phi", "cos-phi", "axial"], default=argparse.SUPPRESS)
    p.add_argument("--amplitude", type=float, default=argparse.SUPPRESS)
    p.add_argument("--n-phi", dest="n_phi", type=int, default=argparse.SUPPRESS)
    p.add_argument("--source", choices=["solve", "catenary", "csv"], default=argparse.SUPPRESS)
    p.add_argument("--input", default=argparse.SUPPRESS, help="profile CSV for --source csv")
    return parser


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    if data.get("schema") != CONFIG_SCHEMA:
        raise UsageError(f"config schema must be {CONFIG_SCHEMA}, got {data.get('schema')!r}")
    unknown = set(data) - set(DEFAULTS) - {"schema", "tolerance", "output_dir"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    data = dict(data)
    data.pop("schema")
    if "tolerance" in data:
        data.setdefault("tol", data.pop("tolerance"))
    if "output_dir" in data:
        data.setdefault("out", data.pop("output_dir"))
    return data


def resolve_settings(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    settings = dict(DEFAULTS)
    given = vars(args)
    if given.get("config"):
        settings.update(load_config(given["config"]))
    for key, value in given.items():
        if key in ("config", "command"):
            continue
        settings[key] = value
    return settings


def _require(settings: dict, *keys) -> None:
    missing = [k for k in keys if settings.get(k) is None]
    if missing:
        raise UsageError("missing required setting(s): " + ", ".join("--" + k for k in missing))


def _single_c(settings: dict) -> float:
    c = settings["c"]
    if isinstance(c, (list, tuple)):
        if len(c) != 1:
            raise UsageError("this command takes a single c value")
        c = c[0]
    try:
        return float(c)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad c value {c!r}") from exc


def _params(settings: dict, c: float | None = None) -> Parameters:
    _require(settings, "h", "r")
    try:
        params = Parameters(float(settings["h"]), float(settings["r"]), _single_c(settings) if c is None else c)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if params.outside_standing_assumption:
        omega = compute_constants().omega
        _warn(
            f"h/r = {format_number(params.ratio)} exceeds omega = {format_number(omega)}; "
            "results assume h/r <= omega and are best-effort here"
        )
    return params


def _out_dir(settings: dict) -> Path:
    out = Path(settings["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _shoot_quiet(params: Parameters, settings: dict):
    kwargs = {}
    if settings.get("tol") is not None:
        kwargs["tolerance"] = float(settings["tol"])
    if settings.get("step") is not None:
        kwargs["step"] = float(settings["step"])
    with warnings.catch_warnings():
        # the CLI prints its own standing-assumption warning
        warnings.simplefilter("ignore", RuntimeWarning)
        return shoot(params, **kwargs)


def _default_nodes(params: Parameters, settings: dict) -> int:
    if settings.get("step") is not None:
        return 2 * max(1, math.ceil(params.h / float(settings["step"]) - 1e-9)) + 1
    return 2 * DEFAULT_STEPS_PER_HALF + 1


def _solution_profile(sol, nodes: int) -> ProfileCurve:
    if nodes == 2 * (len(sol.x) - 1) + 1:
        return sol.profile()
    return sol.profile(nodes - 1)


def _csv_rows(header: str, rows) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(format_number(float(v)) if v is not None else "" for v in row) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def cmd_constants(settings: dict) -> int:
    _emit(compute_constants().as_dict())
    return EXIT_OK


def cmd_classify(settings: dict) -> int:
    _require(settings, "h", "r")
    h, r = float(settings["h"]), float(settings["r"])
    if not (h > 0 and r > 0):
        raise UsageError("h and r must be positive")
    sol = solve_pi(h, r)
    k = compute_constants()
    roots = list(sol.roots())
    energies = {"goldschmidt": r * r}
    if sol.pi0 is not None:
        energies["stable"] = e0_closed_form(h, r, sol.pi0)
        if sol.n_roots == 2:
            energies["unstable"] = e0_closed_form(h, r, sol.pi1)
    _emit(
        {
            "h": h,
            "r": r,
            "ratio": sol.ratio,
            "omega": k.omega,
            "inv_phi_min": k.inv_phi_min,
            "regime": sol.regime.value,
            "roots": roots,
            "energies": energies,
        }
    )
    return EXIT_OK


def cmd_catenary(settings: dict) -> int:
    _require(settings, "h", "r")
    h, r = float(settings["h"]), float(settings["r"])
    if not (h > 0 and r > 0):
        raise UsageError("h and r must be positive")
    sol = solve_pi(h, r)
    if sol.pi0 is None:
        print(f"no catenary spans rings of radius {r} at half-height {h}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    nodes = int(settings["nodes"] or 2 * DEFAULT_STEPS_PER_HALF + 1)
    grid = Grid.from_nodes(h, nodes)
    p = ProfileCurve.from_function(grid, catenary_profile(sol))
    out = _out_dir(settings)
    write_profile_csv(p, out / "catenary.csv")
    _emit({"pi0": sol.pi0, "pi1": sol.pi1, "e0": e0_closed_form(h, r, sol.pi0), "nodes": nodes})
    return EXIT_OK


def cmd_solve(settings: dict) -> int:
    params = _params(settings)
    try:
        sol = _shoot_quiet(params, settings)
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    cert = sol.certify()
    nodes = int(settings["nodes"] or _default_nodes(params, settings))
    p = _solution_profile(sol, nodes)
    out = _out_dir(settings)
    write_profile_csv(p, out / "profile.csv")
    fi = sol.first_integral
    _atomic_write_text(
        out / "trajectory.csv",
        _csv_rows("x,rho,rho_prime,first_integral_residual", zip(sol.x, sol.rho, sol.rho_prime, fi)),
    )
    summary = sol.summary()
    cat = solve_pi(params.h, params.r)
    summary["regime"] = cat.regime.value
    summary["pi0"] = cat.pi0
    summary["energy"] = energy.evaluate(p, params.c).as_dict()
    summary["certification"] = cert.as_dict()
    _atomic_write_text(out / "summary.json", _json_text(summary))
    _emit(summary)
    return EXIT_OK if cert.passed else EXIT_CERTIFICATION


def _minimize_options(params: Parameters, settings: dict) -> MinimizeOptions:
    nodes = int(settings["nodes"] or 401)
    kwargs = {"max_iters": int(settings["max_iters"])}
    if settings.get("tol") is not None:
        kwargs["grad_tol"] = float(settings["tol"])
    return MinimizeOptions.with_nodes(params.h, nodes, **kwargs)


def cmd_minimize(settings: dict) -> int:
    params = _params(settings)
    res = minimize(params, _minimize_options(params, settings))
    check = verify_theorem_properties(res, params)
    out = _out_dir(settings)
    write_profile_csv(res.profile, out / "profile.csv")
    report = {"h": params.h, "r": params.r, "c": params.c, **res.summary(), "checklist": check.as_dict()}
    _atomic_write_text(out / "checklist.json", _json_text(report))
    _emit(report)
    return EXIT_OK if res.converged else EXIT_CERTIFICATION


def cmd_sweep(settings: dict) -> int:
    c_values = settings["c"]
    if not isinstance(c_values, (list, tuple)):
        try:
            c_values = _c_list(c_values)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from exc
    c_values = [float(c) for c in c_values]
    if not c_values or any(c < 0 for c in c_values) or c_values != sorted(c_values):
        raise UsageError("sweep needs a nonempty ascending list of nonnegative c values")
    params = _params(settings, c=c_values[0])
    entries = sweep_c(params, c_values, _minimize_options(params, settings))
    rows = []
    for e in entries:
        if e.failure is None:
            rows.append((e.c, e.apex, e.sup_distance, e.energy.area, e.energy.nematic))
        else:
            rows.append((e.c, None, None, None, None))
    out = _out_dir(settings)
    _atomic_write_text(out / "sweep.csv", _csv_rows("c,apex,sup_dist,energy_area,energy_nematic", rows))
    failed = [e for e in entries if e.failure is not None]
    unconverged = [e for e in entries if e.failure is None and not e.converged]
    _emit(
        {
            "h": params.h,
            "r": params.r,
            "c": c_values,
            "apex": [e.apex for e in entries],
            "sup_dist": [e.sup_distance for e in entries],
            "failures": {format_number(e.c): e.failure for e in failed},
        }
    )
    if failed:
        return EXIT_NO_SOLUTION
    return EXIT_CERTIFICATION if unconverged else EXIT_OK


def _source_profile(settings: dict, params: Parameters | None = None) -> ProfileCurve:
    source = settings["source"]
    if source == "csv":
        if not settings.get("input"):
            raise UsageError("--source csv needs --input")
        return read_profile_csv(settings["input"])
    if params is None:
        params = _params(settings)
    if source == "catenary":
        sol = solve_pi(params.h, params.r)
        if sol.pi0 is None:
            raise NoSolutionError("no catenary spans the rings")
        nodes = int(settings["nodes"] or 401)
        return ProfileCurve.from_function(Grid.from_nodes(params.h, nodes), catenary_profile(sol))
    if source == "minimize":
        return minimize(params, _minimize_options(params, settings)).profile
    sol = _shoot_quiet(params, settings)
    nodes = int(settings["nodes"] or 401)
    return _solution_profile(sol, nodes)


def cmd_mesh(settings: dict) -> int:
    p = _source_profile(settings)
    m = build_mesh(p, int(settings["n_azimuthal"]))
    area = mesh_area(m)
    field = curvatures(p)
    out = _out_dir(settings)
    write_obj(m, out / "mesh.obj")
    write_curvature_csv(field, out / "curvature.csv")
    _emit(
        {
            "n_vertices": m.n_vertices,
            "n_faces": m.n_faces,
            "n_axial": m.n_axial,
            "n_azimuthal": m.n_azimuthal,
            "area": area.area,
            "n_degenerate": area.n_degenerate,
            "profile_area": 2.0 * math.pi * energy.evaluate(p, 0.0).area,
            "max_abs_H": field.max_abs_H,
            "K_relative_spread": field.K_relative_spread,
        }
    )
    return EXIT_OK


def cmd_envelope(settings: dict) -> int:
    if not settings.get("input"):
        raise UsageError("envelope needs an input CSV")
    p = read_profile_csv(settings["input"])
    c = _single_c(settings)
    if c < 0:
        raise UsageError("c must be nonnegative")
    env = convex_envelope(p)
    before = energy.evaluate(p, c)
    after = energy.evaluate(env, c)
    out = _out_dir(settings)
    write_profile_csv(env, out / "envelope.csv")
    report = {
        "c": c,
        "energy_before": before.total,
        "energy_after": after.total,
        "before": before.as_dict(),
        "after": after.as_dict(),
    }
    _atomic_write_text(out / "envelope.json", _json_text(report))
    _emit(report)
    return EXIT_OK


_ALPHA_FIELDS = {
    "constant": lambda a: (lambda x, phi: np.full_like(x, a)),
    "sin-phi": lambda a: (lambda x, phi: a * np.sin(phi)),
    "cos-phi": lambda a: (lambda x, phi: a * np.cos(phi)),
    "axial": lambda a: (lambda x, phi: a * x + 0.0 * phi),
}


def cmd_director_check(settings: dict) -> int:
    gamma = float(settings["gamma"])
    kappa = settings["kappa"]
    if kappa is None:
        kappa = 2.0 * gamma * _single_c(settings)
    try:
        phys = energy.PhysicalParams(gamma=gamma, kappa=float(kappa))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    params = None
    if settings["source"] != "csv":
        params = _params(settings, c=phys.c)
    p = _source_profile(settings, params)
    kind = settings["alpha"]
    if kind not in _ALPHA_FIELDS:
        raise UsageError(f"unknown alpha field {kind!r}")
    func = _ALPHA_FIELDS[kind](float(settings["amplitude"]))
    field = energy.DirectorField.from_function(p.grid, func, int(settings["n_phi"]))
    result = energy.director_energy(p, field, phys)
    report = result.as_dict()
    report["two_pi_gamma_E_c"] = 2.0 * math.pi * phys.gamma * energy.evaluate(p, phys.c).total
    report["alpha"] = kind
    _emit(report)
    return EXIT_OK


COMMANDS = {
    "constants": cmd_constants,
    "classify": cmd_classify,
    "catenary": cmd_catenary,
    "solve": cmd_solve,
    "minimize": cmd_minimize,
    "sweep": cmd_sweep,
    "mesh": cmd_mesh,
    "envelope": cmd_envelope,
    "director-check": cmd_director_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = resolve_settings(args)
        return COMMANDS[args.command](settings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (ValueError, OSError, NematicFilmError) as exc:
        # malformed input files and invalid numeric settings
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
