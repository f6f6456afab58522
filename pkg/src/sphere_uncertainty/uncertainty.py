"""Center of gravity, variances and uncertainty product from Fourier
coefficients.

For F = sum F_l^k Y_l^k the gravity center is a sum over index pairs of
conj(F_k) F_m I(k, m), where I(k, m) = int x conj(Y_k) Y_m dsigma.  Only
nu-conjugate pairs contribute: m_i = k_i +- 1 for i < nu and m_i = k_i for
i >= nu, with k_0 = l.  For nu < n the only nonzero component of I is x_nu,
for nu = n the two azimuthal components x_n and x_{n+1}.
"""
import itertools
import json
import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np
from scipy.special import gammaln

from .special_functions import log_theta_integral, phi_integral
from .sphere_core import (
    MultiIndex,
    eval_harmonic,
    log_normalization_constant,
    sphere_lambda,
    surface_constant,
    validate_index,
)

__all__ = [
    "FormatError",
    "ZeroNormError",
    "ZeroGravityCenterError",
    "FourierExpansion",
    "ConjugatePair",
    "UncertaintyReport",
    "conjugacy_order",
    "conjugate_pairs",
    "coupling_integral",
    "pair_sum",
    "gravity_center",
    "momentum_variance",
    "uncertainty_report",
    "zonal_coupling",
    "zonal_report",
    "load_expansion",
    "expansion_from_json",
    "expansion_to_json",
]


class FormatError(ValueError):
    """Malformed coefficient data."""


class ZeroNormError(ValueError):
    """The function has zero L2 norm."""


class ZeroGravityCenterError(ValueError):
    """The gravity center vanishes, so the space variance is undefined."""


class FourierExpansion:
    """Sparse expansion of a function on S^n in the basis Y_l^k.

    ``coefficients`` maps ``(l, k)`` (or :class:`MultiIndex`) to complex
    values.  Zero coefficients are dropped.  Instances are immutable.
    """

    def __init__(self, n, coefficients):
        self._n = int(n)
        coeffs = {}
        for key, val in dict(coefficients).items():
            idx = validate_index(self._n, key)
            if idx in coeffs:
                raise FormatError(f"duplicate index {idx}")
            val = complex(val)
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise FormatError(f"non-finite coefficient at {idx}")
            if val != 0:
                coeffs[idx] = val
        self._coeffs = MappingProxyType(dict(sorted(coeffs.items())))

    @property
    def n(self):
        return self._n

    @property
    def lam(self):
        return sphere_lambda(self._n)

    @property
    def coefficients(self):
        return self._coeffs

    @property
    def max_degree(self):
        return max((idx.l for idx in self._coeffs), default=0)

    def __len__(self):
        return len(self._coeffs)

    def __repr__(self):
        return f"FourierExpansion(n={self._n}, terms={len(self)}, L={self.max_degree})"

    def norm_sq(self):
        """Parseval: sum of |F_l^k|^2."""
        return math.fsum(abs(c) ** 2 for c in self._coeffs.values())

    def scaled(self, factor):
        return FourierExpansion(self._n, {k: factor * v for k, v in self._coeffs.items()})

    def laplacian(self):
        """Expansion of the Laplace-Beltrami operator applied to F."""
        two_lam = 2 * self.lam
        return FourierExpansion(
            self._n, {k: -k.l * (k.l + two_lam) * v for k, v in self._coeffs.items()})

    def evaluate(self, theta, phi):
        """Pointwise values at angles of shape (..., n-1) and (...)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.zeros(theta.shape[:-1], dtype=complex)
        for idx, c in self._coeffs.items():
            out += c * eval_harmonic(self._n, idx, theta, phi)
        return out


@dataclass(frozen=True)
class ConjugatePair:
    """Ordered index pair (k, m) that is nu-conjugate."""

    k: MultiIndex
    m: MultiIndex
    nu: int


@dataclass(frozen=True)
class UncertaintyReport:
    n: int
    xi: np.ndarray
    norm_xi: float
    var_s: float
    var_m: float
    u: float

    @property
    def bound(self):
        return 0.5 * self.n

    @property
    def bound_ok(self):
        return self.u >= self.bound - 1e-12

    def to_dict(self):
        return {
            "xi_O": [float(v) for v in self.xi],
            "norm_xi": float(self.norm_xi),
            "var_S": float(self.var_s),
            "var_M": float(self.var_m),
            "U": float(self.u),
            "bound": self.bound,
            "bound_ok": bool(self.bound_ok),
        }


def conjugacy_order(k_idx, m_idx):
    """nu for which the pair is nu-conjugate, or None."""
    kh, mh = MultiIndex(*k_idx).hat, MultiIndex(*m_idx).hat
    if len(kh) != len(mh):
        raise ValueError("indices belong to different spheres")
    nu = len(kh)
    while nu > 0 and kh[nu - 1] == mh[nu - 1]:
        nu -= 1
    nu_hat = nu
    if nu_hat == 0:
        return None
    if all(abs(kh[i] - mh[i]) == 1 for i in range(nu_hat)):
        return nu_hat
    return None


def _candidates(idx, nu, first_sign=None):
    """Indices m that are nu-conjugate to idx (validity not checked)."""
    hat = idx.hat
    signs0 = (first_sign,) if first_sign else (1, -1)
    for signs in itertools.product(signs0, *([(1, -1)] * (nu - 1))):
        new = tuple(h + s for h, s in zip(hat, signs)) + hat[nu:]
        yield MultiIndex(new[0], new[1:])


def conjugate_pairs(F):
    """All ordered nu-conjugate pairs (k, m) with both indices in the support."""
    coeffs = F.coefficients
    pairs = []
    for idx in coeffs:
        for nu in range(1, F.n + 1):
            for cand in _candidates(idx, nu):
                if cand in coeffs:
                    pairs.append(ConjugatePair(idx, cand, nu))
    return pairs


def _polar(idx):
    k = idx.k
    return (idx.l,) + tuple(k[:-1]) + (abs(k[-1]),)


def coupling_integral(n, k_idx, m_idx, nu=None):
    """I(k, m) = int x conj(Y_k) Y_m dsigma from the factored closed forms.

    Returns a complex vector of length n + 1.  Raises ValueError when the
    pair is not nu-conjugate (then I vanishes identically).
    """
    k_idx, m_idx = validate_index(n, k_idx), validate_index(n, m_idx)
    detected = conjugacy_order(k_idx, m_idx)
    if detected is None or (nu is not None and nu != detected):
        raise ValueError(f"{k_idx} and {m_idx} are not conjugate (nu={nu})")
    nu = detected
    qk, qm = _polar(k_idx), _polar(m_idx)
    sign, logv = 1, (log_normalization_constant(n, k_idx)
                     + log_normalization_constant(n, m_idx)
                     - math.log(surface_constant(n)))
    for iota in range(1, n):
        if iota < nu:
            kind = "s"
        elif iota == nu:
            kind = "c"
        else:
            kind = "1"
        s, lv = log_theta_integral(kind, n, iota, qk[iota - 1], qk[iota],
                                   qm[iota - 1], qm[iota])
        if s == 0:
            return np.zeros(n + 1, dtype=complex)
        sign *= s
        logv += lv
    scale = sign * math.exp(logv)
    out = np.zeros(n + 1, dtype=complex)
    d = m_idx.k[-1] - k_idx.k[-1]
    if nu < n:
        out[nu - 1] = scale * phi_integral("1", d)
    else:
        out[n - 1] = scale * phi_integral("c", d)
        out[n] = scale * phi_integral("s", d)
    return out


def pair_sum(F):
    """sum over all ordered conjugate pairs of conj(F_k) F_m I(k, m).

    Equals ||F||^2 xi_O(F); the imaginary part is roundoff only.
    """
    coeffs = F.coefficients
    re = [[] for _ in range(F.n + 1)]
    im = [[] for _ in range(F.n + 1)]
    for p in conjugate_pairs(F):
        term = np.conj(coeffs[p.k]) * coeffs[p.m] * coupling_integral(F.n, p.k, p.m, p.nu)
        for j in np.flatnonzero(term):
            re[j].append(term[j].real)
            im[j].append(term[j].imag)
    return np.array([complex(math.fsum(r), math.fsum(i)) for r, i in zip(re, im)])


def _check_norm(F):
    norm_sq = F.norm_sq()
    if not norm_sq > 0:
        raise ZeroNormError("function has zero norm")
    return norm_sq


def gravity_center(F):
    """xi_O(F) as a real vector of length n + 1.

    Uses I(m, k) = conj(I(k, m)): each unordered pair is visited once, from
    the lower degree, and contributes 2 Re(conj(F_k) F_m I(k, m)).
    """
    norm_sq = _check_norm(F)
    coeffs = F.coefficients
    acc = [[] for _ in range(F.n + 1)]
    for idx, ck in coeffs.items():
        for nu in range(1, F.n + 1):
            for cand in _candidates(idx, nu, first_sign=1):
                cm = coeffs.get(cand)
                if cm is None:
                    continue
                term = 2 * (np.conj(ck) * cm * coupling_integral(F.n, idx, cand, nu)).real
                for j in np.flatnonzero(term):
                    acc[j].append(term[j])
    return np.array([math.fsum(a) for a in acc]) / norm_sq


def momentum_variance(F):
    """sum l(l + 2 lambda) |F_l^k|^2 / ||F||^2."""
    norm_sq = _check_norm(F)
    two_lam = 2 * F.lam
    return math.fsum(idx.l * (idx.l + two_lam) * abs(c) ** 2
                     for idx, c in F.coefficients.items()) / norm_sq


def _report(n, xi, var_m):
    norm_xi_sq = float(np.dot(xi, xi))
    if norm_xi_sq < 1e-300:
        raise ZeroGravityCenterError("gravity center is zero; space variance undefined")
    norm_xi = math.sqrt(norm_xi_sq)
    var_s = (1.0 - norm_xi) * (1.0 + norm_xi) / norm_xi_sq
    u = math.sqrt(max(var_s, 0.0)) * math.sqrt(var_m)
    return UncertaintyReport(n=n, xi=xi, norm_xi=norm_xi, var_s=var_s, var_m=var_m, u=u)


def uncertainty_report(F):
    """Gravity center, both variances and U(F) = sqrt(var_S var_M)."""
    return _report(F.n, gravity_center(F), momentum_variance(F))


# Zonal functions: coefficients only on Y_l^(0,...,0); the pair sum collapses
# to a single chain l <-> l + 1 along x_1.

def zonal_coupling(n, lmax):
    """I_1(l, 0, l+1, 0) for l = 0..lmax-1 as an array (vectorized)."""
    lam = sphere_lambda(n)
    l = np.arange(lmax, dtype=float)
    # log A_l^0 from the product formula specialised to k = 0
    def log_a(deg):
        tau = np.arange(1, n)
        const = np.sum((n - tau[1:] - 2) * math.log(2.0) + np.log(n - tau[1:])
                       + 2 * gammaln(0.5 * (n - tau[1:])) - 0.5 * math.log(math.pi)
                       - gammaln(n - tau[1:]))
        first = ((n - 3) * math.log(2.0) + gammaln(deg + 1) + np.log(n - 1 + 2 * deg)
                 + 2 * gammaln(0.5 * (n - 1)) - 0.5 * math.log(math.pi)
                 - gammaln(n - 1 + deg))
        return 0.5 * (first + const - gammaln(0.5 * (n + 1)))
    log_cc = (np.log((l + 2 * lam) / (2 * (l + lam + 1))) + math.log(math.pi)
              + gammaln(l + 2 * lam) - (2 * lam - 1) * math.log(2.0)
              - gammaln(l + 1) - np.log(l + lam) - 2 * gammaln(lam))
    log_rest = sum(math.log(math.pi) + math.lgamma(n - iota)
                   - (n - iota - 1) * math.log(2.0) - math.log(0.5 * (n - iota))
                   - 2 * math.lgamma(0.5 * (n - iota)) for iota in range(2, n))
    return np.exp(log_a(l) + log_a(l + 1) - math.log(surface_constant(n))
                  + log_cc + log_rest + math.log(2 * math.pi))


def zonal_report(n, coeffs):
    """Uncertainty report for F = sum_l coeffs[l] Y_l^(0,...,0).

    Array-based equivalent of :func:`uncertainty_report` for long zonal
    expansions.
    """
    f = np.asarray(coeffs, dtype=complex)
    lmax = f.size - 1
    norm_sq = math.fsum(np.abs(f) ** 2)
    if not norm_sq > 0:
        raise ZeroNormError("function has zero norm")
    xi = np.zeros(n + 1)
    if lmax >= 1:
        terms = 2 * (np.conj(f[:-1]) * f[1:]).real * zonal_coupling(n, lmax)
        xi[0] = math.fsum(terms) / norm_sq
    l = np.arange(lmax + 1, dtype=float)
    var_m = math.fsum(l * (l + 2 * sphere_lambda(n)) * np.abs(f) ** 2) / norm_sq
    return _report(n, xi, var_m)


# Coefficient files: {"n": int, "coefficients": [{"l", "k", "re", "im"}, ...]}

_TOP_KEYS = {"n", "coefficients"}
_ENTRY_KEYS = {"l", "k", "re", "im"}


def expansion_from_json(data):
    """Build a FourierExpansion from the parsed JSON document."""
    if not isinstance(data, dict):
        raise FormatError("top level must be a JSON object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise FormatError(f"unknown fields {sorted(extra)}")
    if set(data) != _TOP_KEYS:
        raise FormatError("fields 'n' and 'coefficients' are required")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise FormatError("'n' must be an integer >= 2")
    entries = data["coefficients"]
    if not isinstance(entries, list):
        raise FormatError("'coefficients' must be a list")
    coeffs = {}
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise FormatError(f"entry {pos} is not an object")
        extra = set(entry) - _ENTRY_KEYS
        if extra:
            raise FormatError(f"entry {pos}: unknown fields {sorted(extra)}")
        missing = {"l", "k", "re"} - set(entry)
        if missing:
            raise FormatError(f"entry {pos}: missing fields {sorted(missing)}")
        l, k = entry["l"], entry["k"]
        if not isinstance(l, int) or not isinstance(k, list) or \
                not all(isinstance(v, int) and not isinstance(v, bool) for v in k):
            raise FormatError(f"entry {pos}: 'l' must be an int and 'k' a list of ints")
        re, im = entry["re"], entry.get("im", 0.0)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            raise FormatError(f"entry {pos}: 're' and 'im' must be numbers")
        try:
            idx = validate_index(n, (l, k))
        except ValueError as exc:
            raise FormatError(f"entry {pos}: {exc}") from None
        if idx in coeffs:
            raise FormatError(f"entry {pos}: duplicate index l={l}, k={k}")
        coeffs[idx] = complex(re, im)
    return FourierExpansion(n, coeffs)


def load_expansion(path):
    """Read a coefficient file."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
    return expansion_from_json(data)


def expansion_to_json(F):
    """JSON-ready dict for a FourierExpansion."""
    return {
        "n": F.n,
        "coefficients": [
            {"l": idx.l, "k": list(idx.k), "re": c.real, "im": c.imag}
            for idx, c in F.coefficients.items()
        ],
    }
