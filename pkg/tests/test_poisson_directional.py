import math
import warnings

import numpy as np
import pytest

from sphere_uncertainty import poisson_directional as pd
from sphere_uncertainty.sphere_core import surface_constant
from sphere_uncertainty.uncertainty import gravity_center, momentum_variance

RHOS = np.array(pd.DEFAULT_RHO_GRID)


def _slope(errors, rhos=RHOS):
    return float(np.polyfit(np.log(rhos), np.log(np.abs(errors)), 1)[0])


# beta and coefficients

def test_beta_values():
    assert pd.beta(1, 1, 0) == pytest.approx(1.0)
    for l in range(1, 6):
        assert pd.beta(2.5, l, l) == 0.0
    with pytest.raises(ValueError):
        pd.beta(2, 1, 2)


@pytest.mark.parametrize("lam", [1.5, 2, 3.5])
def test_beta_zero_squared(lam):
    for l in range(1, 8):
        assert pd.beta(lam, l, 0) ** 2 == pytest.approx(l * (l + 2 * lam) / (2 * lam + 1))


def test_lambda_validation():
    with pytest.raises(ValueError):
        pd.dimension_of(1.25)
    with pytest.raises(ValueError):
        pd.dimension_of(0)
    assert pd.dimension_of(2.5) == 6


def test_g_coefficient_support():
    G = pd.g_coefficients(2, 0.3)
    zero, two = (0, 0, 0, 0), (2, 0, 0, 0)
    assert (1, zero) in G.coefficients
    assert (1, two) not in G.coefficients
    assert all(idx.k in (zero, two) for idx in G.coefficients)
    assert all(c.real < 0 for idx, c in G.coefficients.items() if idx.k == two)


def test_g_truncation_warning():
    with pytest.warns(RuntimeWarning):
        pd.g_coefficients(2, 0.1, L=20)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        pd.g_coefficients(2, 0.5)


def test_g_tail_control():
    L = pd.adaptive_degree(2 * 2 + 10, 0.2)
    a = pd.g_coefficients(2, 0.2, L).norm_sq()
    b = pd.g_coefficients(2, 0.2, 2 * L).norm_sq()
    assert abs(a - b) <= 1e-13 * a


# S sums

@pytest.mark.parametrize("mu", [0, 1, 4, 7])
@pytest.mark.parametrize("rho", [0.05, 0.3, 1.0])
def test_s_sum_zero_moment_closed_form(mu, rho):
    assert pd.s_sum_exact(mu, 0, rho) == pytest.approx((1 - math.exp(-2 * rho)) ** -(mu + 1), rel=1e-13)


@pytest.mark.parametrize("mu,m", [(0, 1), (3, 2), (5, 4)])
def test_s_sum_large_rho(mu, m):
    rho = 15.0
    assert pd.s_sum_exact(mu, m, rho) == pytest.approx((mu + 1) * math.exp(-2 * rho), rel=1e-10)


def test_s_sum_monotone_in_rho():
    vals = [pd.s_sum_exact(4, 3, r) for r in (0.01, 0.05, 0.2, 0.8, 2.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_s_sum_argument_checks():
    with pytest.raises(ValueError):
        pd.s_sum_exact(2, 1, 0.0)
    with pytest.raises(ValueError):
        pd.s_sum_asymptotic(2, 4)


def test_s_sum_convergence_cap():
    with pytest.raises(pd.ConvergenceError):
        pd.s_sum_exact(4, 3, 1e-7)


def test_s_sum_leading_coefficient():
    mu, m = 4, 6
    a = pd.s_sum_asymptotic(mu, m)
    assert a.leading_power == -(mu + m + 1)
    expected = 2 * math.factorial(mu + m) / math.factorial(mu) / 2 ** (mu + m + 2)
    assert a.coefficients[0] == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("mu,m", [(4, 3), (4, 6), (6, 8), (3, 0), (5, 2)])
def test_s_sum_remainder_order(mu, m):
    a = pd.s_sum_asymptotic(mu, m)
    err = [pd.s_sum_exact(mu, m, r) - a(r) for r in RHOS]
    assert _slope(err) == pytest.approx(a.error_order, abs=0.3)
    assert a(0.01) / pd.s_sum_exact(mu, m, 0.01) == pytest.approx(1, abs=1e-6)


def test_s_sum_remainder_constant_stable():
    a = pd.s_sum_asymptotic(4, 6)
    c = [(pd.s_sum_exact(4, 6, r) - a(r)) * r ** 7 for r in (0.04, 0.02, 0.01)]
    assert c[1] / c[0] == pytest.approx(1, abs=0.1)
    assert c[2] / c[1] == pytest.approx(1, abs=0.05)


def test_asymptotic_polynomial_invariants():
    with pytest.raises(ValueError):
        pd.AsymptoticPolynomial((0, 1), (1.0,), 2)
    with pytest.raises(ValueError):
        pd.AsymptoticPolynomial((0, 2), (1.0, 1.0), 2)
    with pytest.raises(ValueError):
        pd.AsymptoticPolynomial((0,), (math.inf,), 2)
    p = pd.AsymptoticPolynomial((-1, 0), (2.0, 3.0), 1).scaled(2.0, shift=1)
    assert p(0.5) == pytest.approx(2 * 0.5 * (2 / 0.5 + 3))


# norm, gravity center, variances

@pytest.mark.parametrize("lam", [0.5, 1, 1.5, 2, 3])
def test_norm_series_matches_parseval(lam):
    assert pd.norm_sq_series(lam, 0.1) == pytest.approx(pd.g_coefficients(lam, 0.1).norm_sq(), rel=1e-10)


def test_norm_leading_term_at_lambda_two():
    # 3(lam+2)(lam+3)(2lam+5)/2^(2lam+3) * (lam+1)/Sigma_n^2 at lam = 2
    lead = 3 * 4 * 5 * 9 / 2 ** 7 * 3 / surface_constant(5) ** 2
    asym = pd.norm_sq_asymptotic(2)
    assert asym.leading_power == -9
    assert asym.coefficients[0] == pytest.approx(lead, rel=1e-14)
    assert asym(0.01) / pd.norm_sq_series(2, 0.01) == pytest.approx(1, abs=1e-2)


@pytest.mark.parametrize("lam", [1, 1.5, 2])
@pytest.mark.parametrize("rho", [0.5, 0.1])
def test_gravity_center_three_ways(lam, rho):
    generic = gravity_center(pd.g_coefficients(lam, rho))
    np.testing.assert_allclose(generic[1:], 0.0, atol=0)
    assert pd.gravity_center_G(lam, rho)[0] == pytest.approx(generic[0], rel=1e-10)
    assert pd.xi_from_closed_couplings(lam, rho) == pytest.approx(generic[0], rel=1e-10)


@pytest.mark.parametrize("lam", [1, 2, 2.5])
def test_momentum_variance_two_ways(lam):
    for rho in (0.5, 0.1):
        v = pd.var_m_G(lam, rho)
        assert v > 0
        assert v == pytest.approx(momentum_variance(pd.g_coefficients(lam, rho)), rel=1e-10)


@pytest.mark.parametrize("lam", [1.5, 2, 3])
@pytest.mark.parametrize("name", ["norm", "xi", "var_s", "var_m", "u"])
def test_expansion_remainder_orders(lam, name):
    exact, asym = {
        "norm": (pd.norm_sq_series, pd.norm_sq_asymptotic),
        "xi": (pd.xi_series, pd.xi_asymptotic),
        "var_s": (pd.var_s_G, pd.var_s_G_asymptotic),
        "var_m": (pd.var_m_G, pd.var_m_G_asymptotic),
        "u": (lambda l, r: math.sqrt(pd.var_s_G(l, r) * pd.var_m_G(l, r)), pd.u_G_asymptotic),
    }[name]
    a = asym(lam)
    err = [exact(lam, r) - a(r) for r in RHOS]
    assert _slope(err) == pytest.approx(a.error_order, abs=0.3)


def test_asymptotics_need_lambda_three_halves():
    for f in (pd.norm_sq_asymptotic, pd.xi_asymptotic, pd.var_s_G_asymptotic,
              pd.var_m_G_asymptotic, pd.u_G_asymptotic):
        with pytest.raises(ValueError):
            f(1)


def test_u_limit_value():
    assert pd.u_limit(2) == pytest.approx(math.sqrt(3894 / 270), rel=1e-15)
    assert pd.u_limit(2) == pytest.approx(3.79766, abs=5e-6)


def test_u_at_small_scale_within_first_order_envelope():
    rep = pd.uncertainty_G(2, 0.01)
    u1 = pd.u_G_asymptotic(2).coefficients[1]
    assert abs(rep.u - pd.u_limit(2)) <= abs(u1) * 0.01 * 1.2
    assert rep.bound_ok


@pytest.mark.parametrize("lam", [0.5, 1, 1.5, 2, 3.5])
@pytest.mark.parametrize("rho", [1.0, 0.3, 0.05])
def test_u_above_bound(lam, rho):
    assert pd.uncertainty_G(lam, rho).bound_ok


def test_var_s_limit_at_lambda_two():
    vals = [pd.var_s_G(2, r) / r ** 2 for r in RHOS]
    assert pd.richardson_limit(RHOS, vals) == pytest.approx(59 / 135, rel=1e-6)


def test_u_limit_large_lambda():
    gaps = [pd.u_limit(l) - l - 25 / 12 for l in (10, 20, 40, 80)]
    assert all(abs(a) > abs(b) for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] * 80 == pytest.approx(gaps[-2] * 40, rel=0.1)


# Richardson extrapolation and ratio curve

def test_richardson_exact_on_polynomials():
    x = np.array([0.4, 0.2, 0.1, 0.05])
    assert pd.richardson_limit(x, 3 - 2 * x + 5 * x ** 3) == pytest.approx(3, abs=1e-12)
    with pytest.raises(ValueError):
        pd.richardson_limit([0.1, 0.2], [1.0])


def test_zonal_coefficients_scaled():
    c = pd.zonal_poisson_coefficients(2, 2, 0.1)
    assert c[0] == 0 and c.max() == 1.0


def test_ratio_curve_small():
    rows = pd.ratio_curve([2, 3, 4])
    ratios = [r[-1] for r in rows]
    assert all(r > 1 for r in ratios)
    assert ratios[0] > ratios[1] > ratios[2]
    assert [r[3] for r in rows] == [2, 3, 4]
    with pytest.raises(ValueError):
        pd.ratio_curve([1.5])


def test_zonal_limit_close_to_bound():
    # at large lambda the best zonal wavelet nearly saturates n/2 = lambda + 1/2
    lam = 10
    best = min(pd.zonal_u_limit(lam, m) for m in (9, 10, 11))
    assert lam + 0.5 < best < lam + 1.0
