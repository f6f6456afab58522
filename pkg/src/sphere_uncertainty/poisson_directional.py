"""The second directional derivative G of the Poisson wavelet g_rho^1.

G lives on S^n with n = 2 lambda + 1 and has real coefficients on two index
families: Y_l^(0,...,0) for l >= 1 and Y_l^(2,0,...,0) for l >= 2.  All its
localization quantities reduce to the sums

    S_m^mu(rho) = sum_l binom(l + mu, l) l^m exp(-2 rho l),

which have a four-term small-rho expansion for mu >= 3.  This module keeps
both routes: exact values (series in S_m^mu, or the generic machinery of
:mod:`sphere_uncertainty.uncertainty` fed with :func:`g_coefficients`) and
truncated expansions in rho.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .sphere_core import log_normalization_constant, surface_constant
from .uncertainty import (
    FourierExpansion,
    uncertainty_report,
    zonal_report,
)

__all__ = [
    "DEFAULT_RHO_GRID",
    "ConvergenceError",
    "AsymptoticPolynomial",
    "dimension_of",
    "beta",
    "adaptive_degree",
    "g_coefficients",
    "s_sum_exact",
    "s_sum_asymptotic",
    "norm_sq_series",
    "norm_sq_asymptotic",
    "xi_series",
    "xi_from_closed_couplings",
    "gravity_center_G",
    "xi_asymptotic",
    "var_s_G",
    "var_s_G_asymptotic",
    "var_m_G",
    "var_m_G_asymptotic",
    "u_G_asymptotic",
    "uncertainty_G",
    "u_limit",
    "richardson_limit",
    "zonal_poisson_coefficients",
    "zonal_u_limit",
    "ratio_curve",
]

#: Scales used to extract rho -> 0 limits.
DEFAULT_RHO_GRID = (0.16, 0.08, 0.04, 0.02, 0.01)

_MAX_TERMS = 5_000_000


class ConvergenceError(RuntimeError):
    """A series did not reach its tolerance within the term cap."""


@dataclass(frozen=True)
class AsymptoticPolynomial:
    """sum_j coefficients[j] * rho**powers[j] + O(rho**error_order)."""

    powers: tuple
    coefficients: tuple
    error_order: float

    def __post_init__(self):
        if len(self.powers) != len(self.coefficients):
            raise ValueError("powers and coefficients differ in length")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise ValueError("non-finite coefficient")
        if self.powers and self.error_order <= max(self.powers):
            raise ValueError("error order must lie beyond the retained powers")

    @property
    def leading_power(self):
        return min(self.powers)

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        val = sum(c * rho ** p for p, c in zip(self.powers, self.coefficients))
        return float(val) if np.ndim(val) == 0 else val

    def scaled(self, factor, shift=0.0):
        """factor * rho**shift * self."""
        return AsymptoticPolynomial(tuple(p + shift for p in self.powers),
                                    tuple(factor * c for c in self.coefficients),
                                    self.error_order + shift)


def _check_lambda(lam, minimum=0.5):
    if 2 * lam != int(2 * lam) or lam < minimum:
        raise ValueError(f"lambda must be a half-integer >= {minimum}, got {lam}")


def dimension_of(lam):
    """n = 2 lambda + 1."""
    _check_lambda(lam)
    return int(round(2 * lam + 1))


def beta(lam, l, k1):
    """beta_{l,k1}; the factor (l - k1) makes beta_{l,l} vanish."""
    if not 0 <= k1 <= l:
        raise ValueError(f"beta needs 0 <= k1 <= l, got k1={k1}, l={l}")
    # (2 lam + k1 - 1)/(2 lam + 2 k1 - 1) is exactly 1 at k1 = 0
    ratio = 1.0 if k1 == 0 else (2 * lam + k1 - 1) / (2 * lam + 2 * k1 - 1)
    return math.sqrt((k1 + 1) * ratio * (l - k1) * (l + 2 * lam + k1)
                     / (2 * lam + 2 * k1 + 1))


def adaptive_degree(power, rho, tol=1e-17):
    """Cutoff for sums of l^power exp(-2 rho l).

    Past 5 power/(2 rho) and far enough that the term falls below ``tol``
    times the peak term.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    power = max(power, 1.0)
    peak = power / (2 * rho)
    l = max(int(math.ceil(5 * peak)), 16)
    log_peak = power * math.log(peak) - 2 * rho * peak
    while power * math.log(l) - 2 * rho * l - log_peak > math.log(tol):
        l = int(l * 1.25) + 1
        if l > _MAX_TERMS:
            raise ConvergenceError(f"no cutoff below {_MAX_TERMS} terms (rho={rho})")
    return l


def _binom_shift(l, mu):
    """binom(l + mu, l) for an array l and integer mu >= 0."""
    l = np.asarray(l, dtype=float)
    if float(mu).is_integer():
        out = np.ones_like(l)
        for i in range(1, int(mu) + 1):
            out *= (l + i) / i
        return out
    return np.exp(gammaln(l + mu + 1) - gammaln(l + 1) - gammaln(mu + 1))


def s_sum_exact(mu, m, rho):
    """S_m^mu(rho) by direct summation with an adaptive cutoff."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if mu < 0 or m < 0:
        raise ValueError("mu and m must be nonnegative")
    L = adaptive_degree(mu + m, rho)
    while True:
        l = np.arange(L + 1, dtype=float)
        with np.errstate(divide="ignore"):
            terms = _binom_shift(l, mu) * l ** m * np.exp(-2 * rho * l)
        total = math.fsum(terms)
        if terms[-1] < 1e-16 * total:
            return total
        L *= 2
        if L > _MAX_TERMS:
            raise ConvergenceError(f"S_{m}^{mu}({rho}) did not converge")


def _falling(top, count):
    # top!/(top - count)! for integer top >= count
    return math.prod(range(top - count + 1, top + 1)) if count > 0 else 1


def s_sum_asymptotic(mu, m):
    """Four-term small-rho expansion of S_m^mu; requires mu >= 3.

    Powers rho^-(mu+m+1) .. rho^-(mu+m-2), remainder O(rho^-(mu+m-3)).
    """
    if int(mu) != mu or mu < 3:
        raise ValueError("the four-term expansion needs integer mu >= 3")
    if int(m) != m or m < 0:
        raise ValueError("m must be a nonnegative integer")
    mu, m = int(mu), int(m)
    p = mu + m
    # (p - j)!/(mu - j)! written as products to stay exact
    c = [
        2 * _falling(p, m),
        2 * (mu + 1) * _falling(p - 1, m),
        (mu + 2 / 3) * (mu + 1) * _falling(p - 2, m),
        mu * (mu + 1) ** 2 * _falling(p - 3, m) / 3,
    ]
    scale = 2.0 ** -(p + 2)
    return AsymptoticPolynomial(
        powers=(-(p + 1), -p, -(p - 1), -(p - 2)),
        coefficients=tuple(scale * v for v in c),
        error_order=-(p - 3),
    )


def _s_combo(mu, terms, rho):
    """sum of coef * S_m^mu for terms = [(coef, m), ...]."""
    return math.fsum(coef * s_sum_exact(mu, m, rho) for coef, m in terms)


def _s_combo_asymptotic(mu, terms):
    acc = {}
    for coef, m in terms:
        a = s_sum_asymptotic(mu, m)
        for p, c in zip(a.powers, a.coefficients):
            acc[p] = acc.get(p, 0.0) + coef * c
    return acc


def _norm_terms(lam):
    return [(3, 6), (9 * lam, 5), (2 * lam * (3 * lam - 2), 4), (-4 * lam ** 2, 3)]


def _momentum_terms(lam):
    return [(3, 8), (15 * lam, 7), (4 * lam * (6 * lam - 1), 6),
            (12 * lam ** 2 * (lam - 1), 5), (-8 * lam ** 3, 4)]


def _xi_zonal_terms(lam):
    return [(1, 6), (4 * lam + 3, 5), (4 * lam ** 2 + 10 * lam + 3, 4),
            (8 * lam ** 2 + 8 * lam + 1, 3), (4 * lam ** 2 + 2 * lam, 2)]


def _prefactor(lam):
    n = dimension_of(lam)
    return 2.0 / (surface_constant(n) ** 2 * (2 * lam + 1) * (2 * lam + 3))


def g_coefficients(lam, rho, L=None):
    """Fourier coefficients of G, truncated at degree L (adaptive if None)."""
    n = dimension_of(lam)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if L is None:
        L = adaptive_degree(2 * lam + 10, rho)
    elif L < 2:
        raise ValueError("L must be >= 2")
    else:
        tail = (2 * lam + 10) * math.log(L) - 2 * rho * L
        peak_l = (2 * lam + 10) / (2 * rho)
        if tail - ((2 * lam + 10) * math.log(peak_l) - 2 * rho * peak_l) > math.log(1e-16):
            warnings.warn(f"truncation at L={L} leaves a relative tail above 1e-16",
                          RuntimeWarning, stacklevel=2)
    sigma = surface_constant(n)
    zero = (0,) * (n - 1)
    two = (2,) + (0,) * (n - 2)
    coeffs = {}
    for l in range(1, L + 1):
        log_common = (math.log(rho * l) - rho * l + math.log((l + lam) / lam)
                      - log_normalization_constant(n, (l, zero)) - math.log(sigma))
        common = math.exp(log_common)
        b0 = beta(lam, l, 0)
        coeffs[(l, zero)] = b0 * b0 * common
        if l >= 2:
            coeffs[(l, two)] = -b0 * beta(lam, l, 1) * common
    return FourierExpansion(n, coeffs)


def norm_sq_series(lam, rho):
    """||G||^2 through S-sums."""
    return _prefactor(lam) * rho ** 2 * _s_combo(2 * lam, _norm_terms(lam), rho)


def norm_sq_asymptotic(lam):
    """Four-term expansion of ||G||^2, powers rho^(-2 lam - 5) .. rho^(-2 lam - 2)."""
    _check_lambda(lam, 1.5)
    n = dimension_of(lam)
    c = (lam + 1) / surface_constant(n) ** 2
    p2 = 2.0 ** (-2 * lam)
    coeffs = (
        3 * (lam + 2) * (lam + 3) * (2 * lam + 5) * p2 / 8,
        3 * lam * (lam + 2) ** 2 * (2 * lam + 5) * p2 / 4,
        lam * (lam + 2) * (2 * lam + 3) * (6 * lam ** 2 + 11 * lam - 3) * p2 / 8,
        lam ** 2 * (lam + 1) * (2 * lam + 3) * (2 * lam ** 2 + 3 * lam - 3) * p2 / 4,
    )
    powers = tuple(-2 * lam - j for j in (5, 4, 3, 2))
    return AsymptoticPolynomial(powers, tuple(c * v for v in coeffs), -2 * lam - 1)


def _xi_times_norm(lam, rho):
    n = dimension_of(lam)
    sig2 = surface_constant(n) ** 2
    zonal = rho ** 2 * math.exp(-rho) / (sig2 * (2 * lam + 1) ** 2) \
        * _s_combo(2 * lam, _xi_zonal_terms(lam), rho)
    tess = 8 * lam * (lam + 1) * rho ** 2 * math.exp(-rho) \
        / (sig2 * (2 * lam + 1) * (2 * lam + 3)) \
        * _s_combo(2 * lam + 2, [(1, 4), (-1, 2)], rho)
    return 2 * (zonal + tess)


def xi_series(lam, rho):
    """First component of xi_O(G) through S-sums."""
    return _xi_times_norm(lam, rho) / norm_sq_series(lam, rho)


def xi_from_closed_couplings(lam, rho, L=None):
    """First component of xi_O(G) summing the two specialised couplings
    I_1(l,0,l+1,0) and I_1(l,2,l+1,2) term by term."""
    n = dimension_of(lam)
    G = g_coefficients(lam, rho, L)
    zero = (0,) * (n - 1)
    two = (2,) + (0,) * (n - 2)
    two_lam = n - 1
    coeffs = G.coefficients
    terms = []
    for l in range(1, G.max_degree):
        a0 = math.exp(log_normalization_constant(n, (l, zero))
                      + log_normalization_constant(n, (l + 1, zero)))
        i0 = a0 * lam ** 2 / ((l + lam) * (l + lam + 1)) * math.comb(l + two_lam, l)
        terms.append(2 * coeffs[(l, zero)].real * coeffs[(l + 1, zero)].real * i0)
        if l >= 2:
            a2 = math.exp(log_normalization_constant(n, (l, two))
                          + log_normalization_constant(n, (l + 1, two)))
            i2 = (a2 * lam * (2 * lam - 1) ** 2 * (2 * lam + 1)
                  / (8 * (lam + 1) * (2 * lam + 3) * (l + lam) * (l + lam + 1))
                  * math.comb(l + two_lam + 2, l) * (l - 1) * l)
            terms.append(2 * coeffs[(l, two)].real * coeffs[(l + 1, two)].real * i2)
    return math.fsum(terms) / G.norm_sq()


def gravity_center_G(lam, rho):
    """xi_O(G) as a vector along x_1."""
    out = np.zeros(dimension_of(lam) + 1)
    out[0] = xi_series(lam, rho)
    return out


def xi_asymptotic(lam):
    """xi_1(G) = 1 - a rho^2 + b rho^3 + O(rho^4)."""
    _check_lambda(lam, 1.5)
    a = 0.5 - 4 / (lam + 3) + 14 / (6 * lam + 15)
    b = 2 * lam ** 2 * (3 * lam + 5) / (3 * (lam + 2) * (lam + 3) ** 2 * (2 * lam + 5))
    return AsymptoticPolynomial((0, 2, 3), (1.0, -a, b), 4)


def var_s_G(lam, rho):
    """Space variance of G through S-sums."""
    xi = xi_series(lam, rho)
    return (1 - xi) * (1 + xi) / xi ** 2


def var_s_G_asymptotic(lam):
    _check_lambda(lam, 1.5)
    c2 = (6 * lam ** 2 + 13 * lam + 9) / (3 * (lam + 3) * (2 * lam + 5))
    c3 = -4 * lam ** 2 * (3 * lam + 5) / (3 * (lam + 2) * (lam + 3) ** 2 * (2 * lam + 5))
    return AsymptoticPolynomial((2, 3), (c2, c3), 4)


def var_m_G(lam, rho):
    """Momentum variance of G through S-sums."""
    num = _prefactor(lam) * rho ** 2 * _s_combo(2 * lam, _momentum_terms(lam), rho)
    return num / norm_sq_series(lam, rho)


def var_m_G_asymptotic(lam):
    _check_lambda(lam, 1.5)
    c = (
        (lam + 4) * (2 * lam + 7) / 2,
        lam * (2 * lam + 7) / (lam + 3),
        -lam * (4 * lam ** 4 - 8 * lam ** 3 - 189 * lam ** 2 - 492 * lam - 351)
        / (6 * (lam + 3) ** 2 * (2 * lam + 5)),
        2 * lam ** 2 * (2 * lam ** 4 - 2 * lam ** 3 - 87 * lam ** 2 - 246 * lam - 189)
        / (3 * (lam + 2) * (lam + 3) ** 3 * (2 * lam + 5)),
    )
    return AsymptoticPolynomial((-2, -1, 0, 1), c, 2)


def u_limit(lam):
    """lim_{rho -> 0} U(G) = sqrt((l+4)(2l+7)(6l^2+13l+9) / (6(l+3)(2l+5))), l = lambda."""
    return math.sqrt((lam + 4) * (2 * lam + 7) * (6 * lam ** 2 + 13 * lam + 9)
                     / (6 * (lam + 3) * (2 * lam + 5)))


def u_G_asymptotic(lam):
    """U(G) = u_limit + u_1 rho + O(rho^2)."""
    _check_lambda(lam, 1.5)
    q = 6 * lam ** 2 + 13 * lam + 9
    u1 = (-lam * (9 * lam ** 2 + 5 * lam - 18) / ((lam + 2) * (lam + 3))
          * math.sqrt((2 * lam + 7) / (6 * (lam + 3) * (lam + 4) * (2 * lam + 5) * q)))
    return AsymptoticPolynomial((0, 1), (u_limit(lam), u1), 2)


def uncertainty_G(lam, rho, L=None):
    """Full report for G through the generic coefficient machinery."""
    return uncertainty_report(g_coefficients(lam, rho, L))


def richardson_limit(rhos, values):
    """Value at rho = 0 of the polynomial through (rhos, values) (Neville)."""
    x = np.asarray(rhos, dtype=float)
    p = np.array(values, dtype=float)
    if x.size != p.size or x.size == 0:
        raise ValueError("need matching, nonempty rho and value lists")
    size = x.size
    for k in range(1, size):
        j = size - k
        p[:j] = (x[k:] * p[:j] - x[:j] * p[1:j + 1]) / (x[k:] - x[:j])
    return float(p[0])


def zonal_poisson_coefficients(lam, m, rho, L=None):
    """Coefficients on Y_l^0 of the zonal wavelet g_rho^m, up to a common factor.

    Proportional to (rho l)^m exp(-rho l) (l + lambda)/(lambda A_l^0); the
    largest entry is scaled to one, which leaves every ratio unchanged.
    """
    n = dimension_of(lam)
    if L is None:
        L = adaptive_degree(2 * m + 2 * lam + 2, rho)
    l = np.arange(1, L + 1, dtype=float)
    tau = np.arange(2, n)
    log_a_const = np.sum((n - tau - 2) * math.log(2.0) + np.log(n - tau)
                         + 2 * gammaln(0.5 * (n - tau)) - 0.5 * math.log(math.pi)
                         - gammaln(n - tau))
    log_a = 0.5 * ((n - 3) * math.log(2.0) + gammaln(l + 1) + np.log(n - 1 + 2 * l)
                   + 2 * gammaln(0.5 * (n - 1)) - 0.5 * math.log(math.pi)
                   - gammaln(n - 1 + l) + log_a_const - gammaln(0.5 * (n + 1)))
    logc = m * np.log(rho * l) - rho * l + np.log((l + lam) / lam) - log_a
    out = np.zeros(L + 1)
    out[1:] = np.exp(logc - logc.max())
    return out


def zonal_u_limit(lam, m, rhos=DEFAULT_RHO_GRID):
    """rho -> 0 limit of U(g_rho^m), extrapolated from the given scales."""
    n = dimension_of(lam)
    vals = [zonal_report(n, zonal_poisson_coefficients(lam, m, r)).u for r in rhos]
    return richardson_limit(rhos, vals)


def ratio_curve(lams, rhos=DEFAULT_RHO_GRID):
    """Rows (lambda, u_limit, zonal_min, best m, ratio).

    ``zonal_min`` is the smallest extrapolated limit of U(g_rho^m) over
    m = 1 .. ceil(lambda) + 2.
    """
    rows = []
    for lam in lams:
        _check_lambda(lam, 2)
        limits = {m: zonal_u_limit(lam, m, rhos)
                  for m in range(1, int(math.ceil(lam)) + 3)}
        best = min(limits, key=limits.get)
        ul = u_limit(lam)
        rows.append((float(lam), ul, limits[best], best, ul / limits[best]))
    return rows

