import json
import math

import mpmath
import numpy as np
import pytest

from nematic_films.catenary import catenary_profile, compute_constants, solve_pi
from nematic_films.cli import EXIT_CERTIFICATION, EXIT_NO_SOLUTION, EXIT_OK, EXIT_USAGE, main
from nematic_films.elsolver import Parameters
from nematic_films.profile import Grid, ProfileCurve, read_profile_csv, write_profile_csv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def csv_rows(path):
    lines = path.read_text().splitlines()
    return lines[0], [ln.split(",") for ln in lines[1:]]


# -- constants and classify ------------------------------------------------------------


def test_constants(capsys):
    code, data, _ = run_json(capsys, "constants")
    assert code == EXIT_OK
    assert set(data) == {"xi_star", "omega", "phi_min", "inv_phi_min", "z0", "beta"}
    assert 0.52 < data["omega"] < 0.53
    assert round(data["inv_phi_min"], 3) == 0.663
    assert data["z0"] == float(f"{math.sqrt((math.sqrt(5) - 1) / 2):.12g}")


@pytest.mark.parametrize(
    ("h", "r", "regime", "n_roots"),
    [(0.55, 0.9, "LocalCatenoid", 2), (1, 3.5, "UniqueCatenoid", 2), (1, 1, "GoldschmidtOnly", 0)],
)
def test_classify(capsys, h, r, regime, n_roots):
    code, data, _ = run_json(capsys, "classify", "--h", h, "--r", r)
    assert code == EXIT_OK
    assert data["regime"] == regime
    assert len(data["roots"]) == n_roots
    assert data["energies"]["goldschmidt"] == pytest.approx(r * r)
    if n_roots:
        assert data["energies"]["stable"] < data["energies"]["unstable"]


def test_classify_bad_flags(capsys):
    code, _, err = run(capsys, "classify", "--h", "1")
    assert code == EXIT_USAGE and "usage" in err
    code, _, err = run(capsys, "classify", "--h", "abc", "--r", "1")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "classify", "--h", "-1", "--r", "1")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "no-such-command")
    assert code == EXIT_USAGE


# -- catenary and solve ------------------------------------------------------------------


def test_catenary_file_matches_closed_form(capsys, tmp_path):
    code, data, _ = run_json(capsys, "catenary", "--h", 1, "--r", 3.5, "--nodes", 201, "--out", tmp_path)
    assert code == EXIT_OK
    p = read_profile_csv(tmp_path / "catenary.csv")
    sol = solve_pi(1.0, 3.5)
    assert np.allclose(p.values, catenary_profile(sol)(p.x), rtol=1e-11)
    assert data["pi0"] == pytest.approx(sol.pi0, rel=1e-11)


def test_catenary_no_solution(capsys, tmp_path):
    code, _, _ = run(capsys, "catenary", "--h", 1, "--r", 1, "--out", tmp_path)
    assert code == EXIT_NO_SOLUTION


def _tie_distance(value) -> float:
    """Distance of ``value`` from a 12-significant-digit rounding tie, in units of the last digit."""
    e = int(mpmath.floor(mpmath.log10(abs(value))))
    scaled = abs(value) / mpmath.mpf(10) ** (e - 11)
    return float(abs(scaled - mpmath.floor(scaled) - mpmath.mpf("0.5")))


def test_solve_c0_matches_catenary_file(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "solve", "--h", 1, "--r", 3.5, "--c", 0, "--out", a)[0] == EXIT_OK
    assert run(capsys, "catenary", "--h", 1, "--r", 3.5, "--out", b)[0] == EXIT_OK
    ha, ra = csv_rows(a / "profile.csv")
    hb, rb = csv_rows(b / "catenary.csv")
    assert ha == hb == "x,rho" and len(ra) == len(rb) == 8001
    assert [x for x, _ in ra] == [x for x, _ in rb]
    pi0 = solve_pi(1.0, 3.5).pi0
    with mpmath.workdps(40):
        for (x, u), (_, v) in zip(ra, rb):
            if u == v:
                continue
            # only values whose exact digits sit at a rounding tie may print differently
            exact = mpmath.mpf(pi0) * mpmath.cosh(mpmath.mpf(x) / pi0)
            assert _tie_distance(exact) <= 1e-3, (x, u, v)
            unit = 10.0 ** (math.floor(math.log10(float(u))) - 11)
            assert abs(float(u) - float(v)) <= 1.000001 * unit


def test_solve_local_catenoid_apex_between_barriers(capsys, tmp_path):
    code, data, err = run_json(capsys, "solve", "--h", 0.55, "--r", 0.9, "--c", 0.1, "--out", tmp_path)
    assert code == EXIT_OK
    assert "exceeds omega" in err
    assert data["pi0"] < data["apex"] < 0.9
    assert data["certification"]["passed"] is True
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary == data
    p = read_profile_csv(tmp_path / "profile.csv")
    assert np.array_equal(p.values, p.values[::-1])
    header, rows = csv_rows(tmp_path / "trajectory.csv")
    assert header == "x,rho,rho_prime,first_integral_residual"
    assert float(rows[0][0]) == 0.0 and float(rows[-1][0]) == 0.55


def test_solve_no_warning_inside_assumption(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--h", 1, "--r", 3.5, "--c", 1, "--nodes", 401, "--out", tmp_path)
    assert code == EXIT_OK and "warning" not in err
    assert read_profile_csv(tmp_path / "profile.csv").grid.n_nodes == 401


def test_solve_no_solution(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--h", 1, "--r", 1, "--c", 0, "--out", tmp_path)
    assert code == EXIT_NO_SOLUTION
    assert "warning" in err


def test_solve_certification_failure(capsys, tmp_path):
    # a very coarse RK4 step fails the drift bound
    code, data, _ = run_json(capsys, "solve", "--h", 1, "--r", 3.5, "--c", 1, "--step", 0.25, "--out", tmp_path)
    assert code == EXIT_CERTIFICATION
    assert data["certification"]["passed"] is False


def test_solve_rejects_bad_parameters(capsys, tmp_path):
    assert run(capsys, "solve", "--h", 1, "--r", 3.5, "--c", -1, "--out", tmp_path)[0] == EXIT_USAGE
    assert run(capsys, "solve", "--h", 0, "--r", 3.5, "--out", tmp_path)[0] == EXIT_USAGE


# -- config ---------------------------------------------------------------------------------


def test_config_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"schema": 1, "h": 1, "r": 3.5, "c": 0.0, "nodes": 101, "output_dir": str(tmp_path / "o")}))
    code, data, _ = run_json(capsys, "solve", "--config", cfg)
    assert code == EXIT_OK and data["apex"] == pytest.approx(solve_pi(1.0, 3.5).pi0, rel=1e-10)
    assert read_profile_csv(tmp_path / "o" / "profile.csv").grid.n_nodes == 101
    code, data2, _ = run_json(capsys, "solve", "--config", cfg, "--c", 1, "--nodes", 201)
    assert code == EXIT_OK and data2["apex"] > data["apex"]
    assert read_profile_csv(tmp_path / "o" / "profile.csv").grid.n_nodes == 201


@pytest.mark.parametrize(
    "content",
    ['{"h": 1, "r": 3.5}', '{"schema": 2, "h": 1, "r": 3.5}', '{"schema": 1, "bogus": 3}', "[1, 2]", "{not json"],
)
def test_bad_config(capsys, tmp_path, content):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(content)
    assert run(capsys, "solve", "--config", cfg)[0] == EXIT_USAGE


def test_missing_config_file(capsys, tmp_path):
    assert run(capsys, "solve", "--config", tmp_path / "nope.json")[0] == EXIT_USAGE


# -- minimize and sweep --------------------------------------------------------------------


def test_minimize_writes_checklist(capsys, tmp_path):
    code, data, _ = run_json(capsys, "minimize", "--h", 1, "--r", 3.5, "--c", 1.225, "--out", tmp_path)
    assert code == EXIT_OK
    check = json.loads((tmp_path / "checklist.json").read_text())
    assert check == data
    assert check["checklist"]["passed"] is True
    assert read_profile_csv(tmp_path / "profile.csv").grid.n_nodes == 401


def test_minimize_unconverged_exits_4(capsys, tmp_path):
    code, data, _ = run_json(capsys, "minimize", "--h", 1, "--r", 3.5, "--c", 1, "--max-iters", 1, "--out", tmp_path)
    assert code == EXIT_CERTIFICATION
    assert data["converged"] is False


def test_sweep_monotone(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--h", 1, "--r", 5, "--c", "0,1,2,10,30,100", "--out", tmp_path)
    assert code == EXIT_OK
    header, rows = csv_rows(tmp_path / "sweep.csv")
    assert header == "c,apex,sup_dist,energy_area,energy_nematic"
    assert [float(r[0]) for r in rows] == [0, 1, 2, 10, 30, 100]
    sup = [float(r[2]) for r in rows]
    apex = [float(r[1]) for r in rows]
    assert all(b < a for a, b in zip(sup, sup[1:]))
    assert all(b > a for a, b in zip(apex, apex[1:]))
    assert sup[-1] < 0.05 * 5


def test_sweep_rejects_unsorted(capsys, tmp_path):
    assert run(capsys, "sweep", "--h", 1, "--r", 5, "--c", "1,0", "--out", tmp_path)[0] == EXIT_USAGE
    assert run(capsys, "sweep", "--h", 1, "--r", 5, "--c", "1,x", "--out", tmp_path)[0] == EXIT_USAGE


def test_sweep_failure_exits_3(capsys, tmp_path, monkeypatch):
    from nematic_films import cli
    from nematic_films.minimizer import MinimizeOptions, sweep_c

    # entries built on a mismatched grid carry a recorded failure for every c
    failing = sweep_c(Parameters(1.0, 5.0), [0.0, 1.0], MinimizeOptions.with_nodes(2.0, 101))
    monkeypatch.setattr(cli, "sweep_c", lambda *args, **kwargs: failing)
    code, data, _ = run_json(capsys, "sweep", "--h", 1, "--r", 5, "--c", "0,1", "--out", tmp_path)
    assert code == EXIT_NO_SOLUTION
    assert set(data["failures"]) == {"0", "1"}
    _, rows = csv_rows(tmp_path / "sweep.csv")
    assert rows == [["0", "", "", "", ""], ["1", "", "", "", ""]]


# -- mesh ---------------------------------------------------------------------------------------


def test_mesh_vertex_count(capsys, tmp_path):
    code, data, _ = run_json(
        capsys, "mesh", "--source", "solve", "--h", 1, "--r", 3.5, "--c", 1, "--nodes", 101, "--n-azimuthal", 32, "--out", tmp_path
    )
    assert code == EXIT_OK
    assert data["n_vertices"] == 101 * 32
    lines = (tmp_path / "mesh.obj").read_text().splitlines()
    assert sum(ln.startswith("v ") for ln in lines) == 101 * 32
    assert sum(ln.startswith("f ") for ln in lines) == 2 * 100 * 32
    assert data["area"] == pytest.approx(data["profile_area"], rel=1e-2)
    header, rows = csv_rows(tmp_path / "curvature.csv")
    assert header == "x,K,H" and len(rows) == 101


def test_mesh_from_csv_and_catenary(capsys, tmp_path):
    p = ProfileCurve.from_function(Grid(1.0, 40), lambda x: 2.0 + 0.2 * x**2)
    src = tmp_path / "p.csv"
    write_profile_csv(p, src)
    code, data, _ = run_json(capsys, "mesh", "--source", "csv", "--input", src, "--n-azimuthal", 16, "--out", tmp_path)
    assert code == EXIT_OK and data["n_vertices"] == 41 * 16
    code, data, _ = run_json(capsys, "mesh", "--source", "catenary", "--h", 1, "--r", 3.5, "--out", tmp_path)
    assert code == EXIT_OK and data["max_abs_H"] < 1e-3
    assert run(capsys, "mesh", "--source", "csv", "--out", tmp_path)[0] == EXIT_USAGE
    assert run(capsys, "mesh", "--source", "csv", "--input", src, "--n-azimuthal", 4, "--out", tmp_path)[0] == EXIT_USAGE


# -- envelope -----------------------------------------------------------------------------------


def test_envelope_of_tent(capsys, tmp_path):
    g = Grid(1.0, 100)
    tent = ProfileCurve(g, 2.0 + 2.0 * (1.0 - np.abs(g.nodes)))
    src = tmp_path / "tent.csv"
    write_profile_csv(tent, src)
    code, data, _ = run_json(capsys, "envelope", src, "--c", 1, "--out", tmp_path / "o")
    assert code == EXIT_OK
    assert data["energy_after"] <= data["energy_before"]
    env = read_profile_csv(tmp_path / "o" / "envelope.csv")
    assert np.allclose(env.values, 2.0)
    assert json.loads((tmp_path / "o" / "envelope.json").read_text()) == data


@pytest.mark.parametrize("text", ["x,rho\n-1,1\n0,oops\n1,1\n", "garbage", "x,rho\n-1,1\n1,1\n"])
def test_envelope_malformed_csv(capsys, tmp_path, text):
    src = tmp_path / "bad.csv"
    src.write_text(text)
    assert run(capsys, "envelope", src, "--out", tmp_path)[0] == EXIT_USAGE


def test_envelope_missing_file(capsys, tmp_path):
    assert run(capsys, "envelope", tmp_path / "absent.csv", "--out", tmp_path)[0] == EXIT_USAGE
    assert run(capsys, "envelope", "--out", tmp_path)[0] == EXIT_USAGE


# -- director-check -----------------------------------------------------------------------------


def test_director_check_constant_alpha(capsys):
    code, data, _ = run_json(capsys, "director-check", "--h", 1, "--r", 3.5, "--c", 1, "--alpha", "constant", "--amplitude", 0.7)
    assert code == EXIT_OK
    assert data["I1"] == pytest.approx(data["two_pi_gamma_E_c"], rel=1e-9)
    assert data["total"] == pytest.approx(data["I1"], rel=1e-9)


def test_director_check_sin_phi(capsys):
    code, data, _ = run_json(capsys, "director-check", "--h", 1, "--r", 3.5, "--c", 1, "--alpha", "sin-phi")
    assert code == EXIT_OK
    assert abs(data["I4"]) <= 1e-9 * data["I1"]
    assert data["I2"] + data["I3"] > 0


def test_director_check_bad_gamma(capsys):
    assert run(capsys, "director-check", "--h", 1, "--r", 3.5, "--gamma", -1)[0] == EXIT_USAGE


# -- determinism ---------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("solve", "--h", 1, "--r", 3.5, "--c", 1, "--nodes", 201),
        ("minimize", "--h", 0.5, "--r", 1, "--c", 0.1, "--nodes", 101),
        ("mesh", "--source", "solve", "--h", 1, "--r", 3.5, "--c", 0.5, "--nodes", 51, "--n-azimuthal", 16),
        ("sweep", "--h", 1, "--r", 3.5, "--c", "0,1,10", "--nodes", 101),
    ],
)
def test_byte_identical_reruns(capsys, tmp_path, argv):
    outs = []
    for name in ("a", "b"):
        code, stdout, _ = run(capsys, *argv, "--out", tmp_path / name)
        assert code == EXIT_OK
        outs.append((stdout, {f.name: f.read_bytes() for f in sorted((tmp_path / name).iterdir())}))
    assert outs[0] == outs[1]
    for blob in outs[0][1].values():
        assert b"\r" not in blob


def test_numbers_have_twelve_digits(capsys):
    _, data, _ = run_json(capsys, "constants")
    k = compute_constants()
    assert data["omega"] == float(f"{k.omega:.12g}")
    assert abs(data["omega"] - k.omega) <= 1e-12
