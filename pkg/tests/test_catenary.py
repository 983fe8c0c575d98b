import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from nematic_films.catenary import (
    CatenaryProfile,
    Regime,
    catenary_profile,
    classify_ratio,
    compare_catenaries,
    compute_constants,
    e0_closed_form,
    f_and_tangent_bound,
    f_nematic,
    f_nematic_prime,
    key_inequality_check,
    mu,
    phi,
    solve_pi,
    u_function,
    v_function,
    v_prime,
)
from nematic_films.errors import DomainError, MissingSolutionError

mp.mp.dps = 40


# -- phi and the constants ---------------------------------------------------


def test_phi_at_one_matches_high_precision_cosh():
    assert phi(1.0) == pytest.approx(float(mp.cosh(1)), rel=1e-15)
    assert phi(1.0) == pytest.approx(1.5430806348, abs=1e-10)


def test_phi_blows_up_near_zero():
    # the exact value 1e8 + 5e-9 rounds to 1e8 in double precision
    assert phi(1e-8) == float(mp.cosh(mp.mpf(1e-8)) / mp.mpf(1e-8))
    assert phi(1e-8) >= 1e8
    assert phi(1e-8) > phi(1e-7) > phi(1e-6)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_phi_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        phi(x)


def test_phi_at_argmin_is_minimum(constants):
    assert phi(constants.phi_argmin) == pytest.approx(constants.phi_min, rel=1e-15)
    xs = np.linspace(0.2, 5.0, 20001)
    assert np.min(phi(xs)) >= constants.phi_min - 1e-15
    assert round(constants.inv_phi_min, 3) == 0.663


def test_omega_bounds_and_rounding(constants):
    assert 0.52 < constants.omega < 0.53
    assert round(constants.omega, 3) == 0.528


def test_constants_agree_with_multiprecision_roots(constants):
    xi = mp.findroot(lambda s: mp.sech(1 / s) ** 2 / s + mp.tanh(1 / s) - 1, 1.5)
    argmin = mp.findroot(lambda x: x * mp.tanh(x) - 1, 1.2)
    assert constants.xi_star == pytest.approx(float(xi), rel=1e-12)
    assert constants.phi_argmin == pytest.approx(float(argmin), rel=1e-12)
    assert constants.omega == pytest.approx(float(1 / (xi * mp.cosh(1 / xi))), rel=1e-12)


def test_constant_identities(constants):
    k = constants
    assert u_function(k.xi_star) == pytest.approx(1.0, abs=1e-12)
    assert k.omega * k.xi_star * math.cosh(1.0 / k.xi_star) == pytest.approx(1.0, abs=1e-10)
    assert k.phi_argmin * math.tanh(k.phi_argmin) == pytest.approx(1.0, abs=1e-12)
    assert k.z0 == pytest.approx(math.sqrt((math.sqrt(5.0) - 1.0) / 2.0), rel=1e-15)
    assert abs(f_nematic_prime(k.z0) - 1.0) <= 1e-12
    assert math.cosh(k.beta) == pytest.approx(math.sqrt((math.sqrt(17.0) - 1.0) / 2.0), rel=1e-12)


@pytest.mark.parametrize("tol", [0.0, -1e-9, 1e-5])
def test_compute_constants_rejects_bad_tolerance(tol):
    with pytest.raises(DomainError):
        compute_constants(tol)


def test_u_crosses_one_only_at_xi_star(constants):
    s = np.linspace(0.05, 20.0, 40001)
    u = u_function(s)
    below = s <= constants.xi_star
    assert np.all(u[below] >= 1.0 - 1e-15)
    assert np.all(u[~below] < 1.0)


def test_f_prime_matches_finite_difference():
    x = np.linspace(0.0, 3.0, 31)
    step = 1e-6
    fd = (f_nematic(x + step) - f_nematic(np.abs(x - step))) / (2 * step)
    assert np.allclose(f_nematic_prime(x[1:]), fd[1:], atol=1e-8)


# -- mu and solve_pi -----------------------------------------------------------


def test_mu_is_unimodal_with_peak_one_over_m(constants):
    xi_m = 1.0 / constants.phi_argmin
    left = np.linspace(0.02, xi_m, 5000)
    right = np.linspace(xi_m, 50.0, 5000)
    assert np.all(np.diff(mu(left)) > 0)
    assert np.all(np.diff(mu(right)) < 0)
    assert mu(xi_m) == pytest.approx(constants.inv_phi_min, rel=1e-14)


def test_solve_pi_goldschmidt_only():
    sol = solve_pi(1.0, 1.0)
    assert sol.pi0 is None and sol.pi1 is None
    assert sol.regime is Regime.GOLDSCHMIDT_ONLY
    assert sol.n_roots == 0 and sol.roots() == ()


def test_solve_pi_two_roots_for_wide_rings():
    sol = solve_pi(1.0, 3.5)
    assert sol.regime is Regime.UNIQUE_CATENOID
    assert sol.n_roots == 2 and sol.pi0 > sol.pi1
    for pi in sol.roots():
        assert abs(pi * math.cosh(1.0 / pi) - 3.5) <= 1e-12 * 3.5


def test_solve_pi_matches_multiprecision_roots():
    sol = solve_pi(1.0, 3.5)
    f = lambda p: p * mp.cosh(1 / p) - mp.mpf("3.5")  # noqa: E731
    assert sol.pi0 == pytest.approx(float(mp.findroot(f, 3.3)), rel=1e-13)
    assert sol.pi1 == pytest.approx(float(mp.findroot(f, 0.33)), rel=1e-13)


def test_double_root_at_one_over_m(constants):
    h = 1.0
    r = h / constants.inv_phi_min
    sol = solve_pi(h, r)
    assert sol.n_roots == 1
    assert sol.pi0 == sol.pi1 == pytest.approx(h / constants.phi_argmin, rel=1e-14)


@pytest.mark.parametrize(("h", "r"), [(0.0, 1.0), (1.0, 0.0), (-1.0, 2.0)])
def test_solve_pi_rejects_degenerate_input(h, r):
    with pytest.raises(DomainError):
        solve_pi(h, r)


def test_classification_boundaries(constants):
    w, inv_m = constants.omega, constants.inv_phi_min
    assert classify_ratio(0.5 * w) is Regime.UNIQUE_CATENOID
    assert classify_ratio(w) is Regime.CROSSOVER
    assert classify_ratio(w + 5e-10) is Regime.CROSSOVER
    assert classify_ratio(0.5 * (w + inv_m)) is Regime.LOCAL_CATENOID
    assert classify_ratio(inv_m) is Regime.LOCAL_CATENOID
    assert classify_ratio(1.0) is Regime.GOLDSCHMIDT_ONLY
    assert solve_pi(0.55, 0.9).regime is Regime.LOCAL_CATENOID


@given(
    h=st.floats(0.05, 20.0),
    lam=st.floats(0.01, 0.66),
)
def test_roots_certify_and_order(h, lam):
    r = h / lam
    sol = solve_pi(h, r)
    assert sol.pi0 is not None
    assert sol.pi0 >= sol.pi1
    for pi in sol.roots():
        assert abs(pi * math.cosh(h / pi) - r) <= 1e-12 * r


@given(lam=st.floats(0.665, 50.0))
def test_no_roots_iff_goldschmidt(lam):
    sol = solve_pi(1.0, 1.0 / lam)
    assert sol.roots() == ()
    assert sol.regime is Regime.GOLDSCHMIDT_ONLY


def test_xi_ordering_below_omega(constants):
    for lam in np.linspace(0.01, constants.omega, 200):
        sol = solve_pi(1.0, 1.0 / lam)
        assert sol.pi1 < constants.xi_star < sol.pi0


def test_stable_slope_bound_below_omega(constants):
    lams = np.linspace(1e-3, constants.omega, 4000)
    slopes = []
    for lam in lams:
        sol = solve_pi(1.0, 1.0 / lam)
        slopes.append(math.sinh(1.0 / sol.pi0))
    assert max(slopes) < constants.z0


# -- catenary profiles and energies -------------------------------------------


def test_stable_profile_hits_rings_and_apex(constants):
    sol = solve_pi(1.0, 3.5)
    cat = catenary_profile(sol)
    assert cat(-1.0) == pytest.approx(3.5, abs=1e-10)
    assert cat(1.0) == pytest.approx(3.5, abs=1e-10)
    assert cat(0.0) == sol.pi0
    assert cat.slope(1.0) == pytest.approx(math.sinh(1.0 / sol.pi0), rel=1e-15)
    assert cat.slope(1.0) < constants.z0


def test_unstable_profile_and_missing_root():
    sol = solve_pi(1.0, 3.5)
    assert catenary_profile(sol, "unstable").pi == sol.pi1
    with pytest.raises(MissingSolutionError):
        catenary_profile(solve_pi(1.0, 1.0))
    with pytest.raises(ValueError):
        catenary_profile(sol, "sideways")


def test_catenary_profile_requires_positive_scale():
    with pytest.raises(DomainError):
        CatenaryProfile(0.0)


def test_e0_closed_form_against_adaptive_quadrature():
    sol = solve_pi(1.0, 3.5)
    cat = catenary_profile(sol)
    val, _ = quad(lambda x: cat(x) * math.sqrt(1 + cat.slope(x) ** 2), -1.0, 1.0, epsabs=0, epsrel=1e-13)
    assert e0_closed_form(1.0, 3.5, sol.pi0) == pytest.approx(val, rel=1e-10)


def test_e0_closed_form_against_trapezoid():
    sol = solve_pi(1.0, 3.5)
    cat = catenary_profile(sol)
    x = np.linspace(-1.0, 1.0, 4001)
    integrand = cat(x) * np.sqrt(1.0 + cat.slope(x) ** 2)
    trap = float(np.trapezoid(integrand, x))
    assert trap == pytest.approx(e0_closed_form(1.0, 3.5, sol.pi0), rel=1e-6)


def test_e0_closed_form_domain():
    assert e0_closed_form(1.0, 2.0, 2.0) == 2.0
    with pytest.raises(DomainError):
        e0_closed_form(1.0, 2.0, 2.5)
    with pytest.raises(DomainError):
        e0_closed_form(1.0, 2.0, 0.0)


def test_crossover_matches_goldschmidt(constants):
    r = 1.0 / constants.omega
    sol = solve_pi(1.0, r)
    assert sol.regime is Regime.CROSSOVER
    assert abs(e0_closed_form(1.0, r, sol.pi0) - r * r) <= 1e-8 * r * r


def test_compare_catenaries_unique_regime():
    cmp = compare_catenaries(1.0, 3.5)
    assert cmp.e_stable < cmp.e_unstable
    assert cmp.e_stable < cmp.goldschmidt
    assert cmp.ordering.startswith("stable")


def test_compare_catenaries_local_regime(constants):
    lam = 0.5 * (constants.omega + constants.inv_phi_min)
    cmp = compare_catenaries(1.0, 1.0 / lam)
    assert cmp.e_stable > cmp.goldschmidt
    assert cmp.e_stable < cmp.e_unstable


def test_compare_catenaries_needs_two_roots(constants):
    with pytest.raises(MissingSolutionError):
        compare_catenaries(1.0, 1.0)
    with pytest.raises(MissingSolutionError):
        compare_catenaries(1.0, 1.0 / constants.inv_phi_min)


# -- bound functions ------------------------------------------------------------


def test_tangent_bound_examples(constants):
    assert f_and_tangent_bound(0.5, 0.5) == 0.0
    z0 = constants.z0
    expected = z0 - float(f_nematic(z0))
    assert f_and_tangent_bound(0.0, z0) == pytest.approx(expected, rel=1e-12)
    assert expected > 0


def test_tangent_bound_grid_scan(constants):
    x = np.linspace(0.0, 10.0, 1000)
    y = np.linspace(0.0, constants.z0, 1000)
    X, Y = np.meshgrid(x, y)
    assert np.min(f_and_tangent_bound(X, Y)) >= -1e-14


def test_tangent_bound_rejects_large_y(constants):
    with pytest.raises(DomainError):
        f_and_tangent_bound(1.0, constants.z0 * 1.001)
    with pytest.raises(DomainError):
        f_and_tangent_bound(-0.1, 0.2)


def test_v_prime_matches_multiprecision_derivative():
    v = lambda t: mp.sinh(t) * (1 + mp.cosh(t) ** 2) / mp.cosh(t) ** 4  # noqa: E731
    for t in (0.0, 0.3, 0.69, 1.5):
        assert v_prime(t) == pytest.approx(float(mp.diff(v, t)), rel=1e-12, abs=1e-14)
    assert v_prime(0.0) == 2.0
    assert v_function(0.0) == 0.0


def test_key_inequality_nonnegative_on_stable_catenary():
    sol = solve_pi(1.0, 3.5)
    m = key_inequality_check(sol.pi0, 1.0, n_samples=10001)
    assert m >= 0
    # at x = 0 the derivative is v'(0)/pi0^2 = 2/pi0^2
    assert key_inequality_check(sol.pi0, 1e-9, n_samples=2) == pytest.approx(2.0 / sol.pi0**2, rel=1e-9)


def test_beta_bound_below_omega(constants):
    for lam in np.linspace(1e-3, constants.omega, 2000):
        sol = solve_pi(1.0, 1.0 / lam)
        assert 1.0 / sol.pi0 <= constants.beta


def test_key_inequality_warns_beyond_beta():
    with pytest.warns(RuntimeWarning):
        key_inequality_check(1.0, 1.0)


def test_constants_as_dict_keys(constants):
    d = constants.as_dict()
    assert set(d) == {"xi_star", "omega", "phi_min", "inv_phi_min", "z0", "beta"}
