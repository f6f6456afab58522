"""Gegenbauer polynomials, gamma helpers and the single integrals of the
coupling integral.

Every integral over a polar angle reduces, after ``t = cos(theta)``, to a
Gegenbauer pairing with weight ``(1 - t**2)**(order - 1/2)``.  The closed
forms below are all assembled from :func:`log_gegenbauer_norm` in log space.
"""
import math

import numpy as np

__all__ = [
    "L_MAX",
    "log_gamma",
    "binomial",
    "log_binomial",
    "gegenbauer",
    "gegenbauer_table",
    "log_gegenbauer_norm",
    "gegenbauer_l2_pairing",
    "log_theta_integral",
    "theta_integral_1",
    "theta_integral_c",
    "theta_integral_s",
    "phi_integral",
]

#: Largest degree accepted by the recurrences.
L_MAX = 4096

def log_gamma(x):
    """log(Gamma(x)) for real x > 0."""
    if x <= 0:
        raise ValueError(f"log_gamma: pole or negative argument x={x}")
    return math.lgamma(x)


def log_binomial(n, k):
    """log of the generalized binomial coefficient Gamma(n+1)/(Gamma(k+1) Gamma(n-k+1))."""
    if k < 0 or n - k < 0:
        raise ValueError(f"log_binomial: need 0 <= k <= n, got n={n}, k={k}")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binomial(n, k):
    """Binomial coefficient for real ``n`` and integer ``k``.

    Exact integer arithmetic for integer ``n`` (rounded once to float),
    otherwise evaluated through log-gamma differences.
    """
    if k < 0 or n - k < 0:
        return 0.0
    if float(n).is_integer():
        try:
            return float(math.comb(int(n), int(k)))
        except OverflowError:
            return math.inf
    return math.exp(log_binomial(n, k))


def _check_order(lam):
    if lam <= -0.5:
        raise ValueError(f"Gegenbauer order must exceed -1/2, got {lam}")


def gegenbauer_table(lmax, lam, t):
    """Values of C_0^lam(t), ..., C_lmax^lam(t).

    Returns an array of shape ``(lmax + 1,) + shape(t)``.  Upward three-term
    recurrence, stable for lam > 0 on [-1, 1].
    """
    _check_order(lam)
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    if lmax > L_MAX:
        raise ValueError(f"degree {lmax} exceeds L_MAX={L_MAX}")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + 1e-14):
        raise ValueError("Gegenbauer argument outside [-1, 1]")
    out = np.empty((lmax + 1,) + t.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = 2.0 * lam * t
    for l in range(1, lmax):
        out[l + 1] = (2.0 * (l + lam) * t * out[l]
                      - (l + 2.0 * lam - 1.0) * out[l - 1]) / (l + 1.0)
    return out


def gegenbauer(l, lam, t):
    """C_l^lam(t); scalar in, scalar out, arrays broadcast."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    vals = gegenbauer_table(l, lam, t)[l]
    return float(vals) if vals.ndim == 0 else vals


def log_gegenbauer_norm(l, lam):
    """log of int_{-1}^{1} (C_l^lam)^2 (1-t^2)^(lam-1/2) dt, lam > 0."""
    if lam <= 0:
        raise ValueError(f"norm formula needs lam > 0, got {lam}")
    return (math.log(math.pi) + math.lgamma(l + 2 * lam)
            - (2 * lam - 1) * math.log(2.0) - math.lgamma(l + 1)
            - math.log(l + lam) - 2 * math.lgamma(lam))


def gegenbauer_l2_pairing(lam, l1, l2):
    """int_{-1}^{1} C_l1^lam C_l2^lam (1-t^2)^(lam-1/2) dt."""
    if l1 != l2:
        return 0.0
    return math.exp(log_gegenbauer_norm(l1, lam))


# Single integrals.  (a, b) = (k_{iota-1}, k_iota) and (c, d) = (m_{iota-1},
# m_iota); the polar axis iota carries the base order (n - iota)/2.

def _axis_order(n, iota):
    if not 1 <= iota <= n - 1:
        raise ValueError(f"axis index iota={iota} outside 1..{n - 1}")
    return 0.5 * (n - iota)


def _check_pair(a, b, c, d):
    if a < b or c < d or b < 0 or d < 0:
        raise ValueError(f"invalid index pair ({a}, {b}), ({c}, {d})")


def log_theta_integral(kind, n, iota, a, b, c, d):
    """(sign, log|value|) of a polar single integral; sign 0 means zero.

    ``kind`` selects the extra factor: ``"1"`` none, ``"c"`` cos(theta),
    ``"s"`` sin(theta).
    """
    base = _axis_order(n, iota)
    _check_pair(a, b, c, d)
    if kind == "1":
        if a != c or b != d:
            return 0, -math.inf
        return 1, log_gegenbauer_norm(a - b, base + b)
    if kind == "c":
        if b != d or abs(a - c) != 1:
            return 0, -math.inf
        lam = base + b
        l = min(a, c) - b
        # t C_{l+1} = (l+2lam)/(2(l+lam+1)) C_l + ..., then orthogonality
        return 1, (math.log((l + 2 * lam) / (2 * (l + lam + 1)))
                   + log_gegenbauer_norm(l, lam))
    if kind == "s":
        if abs(b - d) != 1 or abs(a - c) != 1:
            return 0, -math.inf
        if b > d:
            a, b, c, d = c, d, a, b
        lam = base + b
        deg = a - b
        if c == a + 1:
            return 1, math.log(lam / (deg + lam)) + log_gegenbauer_norm(deg, lam + 1)
        if deg < 2:
            return 0, -math.inf
        return -1, math.log(lam / (deg + lam)) + log_gegenbauer_norm(deg - 2, lam + 1)
    raise ValueError(f"unknown polar integral kind {kind!r}")


def _signed_exp(pair):
    sign, logv = pair
    return 0.0 if sign == 0 else sign * math.exp(logv)


def theta_integral_1(n, iota, a, b, c, d):
    """C_theta_1: int C_{a-b}^{s+b} C_{c-d}^{s+d} sin^{b+d+n-iota} over [0, pi].

    Here s = (n - iota)/2, (a, b) = (k_{iota-1}, k_iota) and
    (c, d) = (m_{iota-1}, m_iota).  Only b == d is a genuine orthogonality
    statement; for b != d the value 0 is the convention used inside the
    coupling integral, where a vanishing factor on a higher axis already
    kills the product.
    """
    return _signed_exp(log_theta_integral("1", n, iota, a, b, c, d))


def theta_integral_c(n, iota, a, b, c, d):
    """C_theta_c: the same pairing with an extra cos(theta).

    Nonzero only for b == d and |a - c| == 1; symmetric in the two pairs.
    """
    return _signed_exp(log_theta_integral("c", n, iota, a, b, c, d))


def theta_integral_s(n, iota, a, b, c, d):
    """C_theta_s: the same pairing with an extra sin(theta).

    Nonzero only for |b - d| == 1 and |a - c| == 1.  The pair with the larger
    lower index carries order lam + 1; since
    C_L^lam = lam/(L+lam) [C_L^{lam+1} - C_{L-2}^{lam+1}], the value is
    negative when the two degrees differ by two.
    """
    return _signed_exp(log_theta_integral("s", n, iota, a, b, c, d))


def phi_integral(kind, d):
    """Azimuthal integral of exp(i d phi) times 1, cos(phi) or sin(phi).

    ``kind`` is one of ``"1"``, ``"c"``, ``"s"``; ``d = m_{n-1} - k_{n-1}``.
    """
    kind = str(kind)
    if kind == "1":
        return complex(2 * math.pi) if d == 0 else 0j
    if kind == "c":
        return complex(math.pi) if abs(d) == 1 else 0j
    if kind == "s":
        return 1j * d * math.pi if abs(d) == 1 else 0j
    raise ValueError(f"unknown azimuthal integral kind {kind!r}")
