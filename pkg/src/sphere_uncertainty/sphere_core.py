"""Geometry of S^n and the complex hyperspherical-harmonic basis.

Coordinates: polar angles theta_1..theta_{n-1} in [0, pi] and an azimuth phi,
with x_1 = cos(theta_1), x_2 = sin(theta_1) cos(theta_2), ..., and
x_n, x_{n+1} = (prod of sines) * (cos(phi), sin(phi)).  The surface measure is
normalized to total mass one.

A basis element Y_l^k is addressed by the degree l and a non-increasing
sequence k = (k_1, ..., k_{n-1}) with l >= k_1 >= ... >= |k_{n-1}|.  The last
entry may be negative; it enters the polar factors through its absolute
value and the azimuthal factor as exp(i k_{n-1} phi).
"""
import math
from typing import NamedTuple

import numpy as np

from .special_functions import gegenbauer_table, log_gegenbauer_norm

__all__ = [
    "MultiIndex",
    "sphere_lambda",
    "surface_constant",
    "dimension_count",
    "enumerate_indices",
    "validate_index",
    "normalization_constant",
    "log_normalization_constant",
    "spherical_to_cartesian",
    "cartesian_to_spherical",
    "eval_harmonic",
    "laplace_eigenvalue",
]


class MultiIndex(NamedTuple):
    """Degree ``l`` together with the sequence ``k`` of length n - 1."""

    l: int
    k: tuple

    @property
    def hat(self):
        """The full sequence (k_0, k_1, ..., k_{n-1}) with k_0 = l."""
        return (self.l,) + tuple(self.k)


def _check_dim(n):
    if int(n) != n or n < 2:
        raise ValueError(f"sphere dimension must be an integer >= 2, got {n}")


def sphere_lambda(n):
    """lambda = (n - 1)/2."""
    _check_dim(n)
    return 0.5 * (n - 1)


def surface_constant(n):
    """Sigma_n = 2 pi^((n+1)/2) / Gamma((n+1)/2), the area of S^n."""
    _check_dim(n)
    return 2.0 * math.pi ** (0.5 * (n + 1)) / math.gamma(0.5 * (n + 1))


def dimension_count(n, l):
    """Number of linearly independent harmonics of degree l on S^n."""
    lam = sphere_lambda(n)
    if l == 0:
        return 1
    val = 2 * (l + lam) * math.exp(math.lgamma(l + 2 * lam) - math.lgamma(l + 1)
                                   - math.lgamma(2 * lam + 1))
    return int(round(val))


def _sequences(upper, length):
    if length == 0:
        yield ()
        return
    if length == 1:
        for v in range(-upper, upper + 1):
            yield (v,)
        return
    for v in range(upper + 1):
        for rest in _sequences(v, length - 1):
            yield (v,) + rest


def enumerate_indices(n, l):
    """All MultiIndex values of degree l on S^n, lexicographically sorted."""
    _check_dim(n)
    if l < 0:
        raise ValueError("degree must be nonnegative")
    return sorted(MultiIndex(l, k) for k in _sequences(l, n - 1))


def validate_index(n, idx):
    """Return ``idx`` as a MultiIndex after checking it against S^n."""
    _check_dim(n)
    l, k = int(idx[0]), tuple(int(v) for v in idx[1])
    if len(k) != n - 1:
        raise ValueError(f"index {idx} needs {n - 1} entries in k for S^{n}")
    seq = (l,) + k[:-1] + (abs(k[-1]),)
    if l < 0 or any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
        raise ValueError(f"index {idx} is not non-increasing with l >= |k_last|")
    return MultiIndex(l, k)


def _polar_sequence(idx):
    """(k_0, ..., k_{n-2}, |k_{n-1}|)."""
    k = idx.k
    return (idx.l,) + tuple(k[:-1]) + (abs(k[-1]),)


def log_normalization_constant(n, idx):
    """log A_l^k from the product formula over the polar axes."""
    idx = validate_index(n, idx)
    q = _polar_sequence(idx)
    total = -math.lgamma(0.5 * (n + 1))
    for tau in range(1, n):
        a, b = q[tau - 1], q[tau]
        total += ((n - tau + 2 * b - 2) * math.log(2.0)
                  + math.lgamma(a - b + 1)
                  + math.log(n - tau + 2 * a)
                  + 2 * math.lgamma(0.5 * (n - tau) + b)
                  - 0.5 * math.log(math.pi)
                  - math.lgamma(n - tau + a + b))
    return 0.5 * total


def normalization_constant(n, idx):
    """A_l^k making Y_l^k unit-norm under the normalized measure."""
    return math.exp(log_normalization_constant(n, idx))


def _normalization_from_norms(n, idx):
    # Same constant obtained as Sigma_n / (2 pi prod(polar norms)); kept for tests.
    idx = validate_index(n, idx)
    q = _polar_sequence(idx)
    log_prod = sum(log_gegenbauer_norm(q[t - 1] - q[t], 0.5 * (n - t) + q[t])
                   for t in range(1, n))
    return math.sqrt(surface_constant(n) / (2 * math.pi) * math.exp(-log_prod))


def spherical_to_cartesian(theta, phi):
    """Map angles to points of S^n.

    ``theta`` has shape (..., n-1), ``phi`` shape (...); returns (..., n+1).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.asarray(phi, dtype=float)
    m = theta.shape[-1]
    out = np.empty(theta.shape[:-1] + (m + 2,))
    sprod = np.ones(theta.shape[:-1])
    for i in range(m):
        out[..., i] = sprod * np.cos(theta[..., i])
        sprod = sprod * np.sin(theta[..., i])
    out[..., m] = sprod * np.cos(phi)
    out[..., m + 1] = sprod * np.sin(phi)
    return out


def cartesian_to_spherical(x):
    """Inverse of :func:`spherical_to_cartesian` for unit vectors.

    Returns ``(theta, phi)`` with phi in [0, 2 pi).
    """
    x = np.asarray(x, dtype=float)
    dim = x.shape[-1]
    theta = np.empty(x.shape[:-1] + (dim - 2,))
    for i in range(dim - 2):
        tail = np.sqrt(np.sum(x[..., i + 1:] ** 2, axis=-1))
        theta[..., i] = np.arctan2(tail, x[..., i])
    phi = np.mod(np.arctan2(x[..., -1], x[..., -2]), 2 * np.pi)
    return theta, phi


def eval_harmonic(n, idx, theta, phi):
    """Y_l^k at the given angles (vectorized); complex result."""
    idx = validate_index(n, idx)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape[-1] != n - 1:
        raise ValueError(f"theta must have {n - 1} trailing entries")
    phi = np.asarray(phi, dtype=float)
    q = _polar_sequence(idx)
    val = np.full(theta.shape[:-1], normalization_constant(n, idx))
    for tau in range(1, n):
        a, b = q[tau - 1], q[tau]
        th = theta[..., tau - 1]
        val = val * gegenbauer_table(a - b, 0.5 * (n - tau) + b, np.cos(th))[a - b]
        if b:
            val = val * np.sin(th) ** b
    return val * np.exp(1j * idx.k[-1] * phi)


def laplace_eigenvalue(n, l):
    """Eigenvalue -l(l + 2 lambda) of the Laplace-Beltrami operator."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    return -l * (l + 2 * sphere_lambda(n))
