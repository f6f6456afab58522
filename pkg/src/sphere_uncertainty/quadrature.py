"""Brute-force integration over S^n.

Tensor product of Gauss-Jacobi rules in t = cos(theta_iota) and an
equispaced trapezoid rule in phi.  With the node counts chosen in
:func:`build_grid` the rule integrates every polynomial of degree <= D in the
Cartesian coordinates exactly (up to roundoff), which makes it an independent
oracle for the series formulas.
"""
import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .sphere_core import (
    eval_harmonic,
    spherical_to_cartesian,
    surface_constant,
    validate_index,
)

__all__ = [
    "DEFAULT_MAX_NODES",
    "QuadratureGrid",
    "gauss_jacobi",
    "build_grid",
    "integrate",
    "gravity_center_direct",
    "momentum_direct",
    "coupling_integral_direct",
]

DEFAULT_MAX_NODES = 10_000_000


def gauss_jacobi(npts, alpha, beta):
    """Nodes and weights for int_{-1}^{1} f(t) (1-t)^alpha (1+t)^beta dt.

    Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
    """
    if npts < 1:
        raise ValueError("need at least one node")
    if alpha <= -1 or beta <= -1:
        raise ValueError("Jacobi parameters must exceed -1")
    k = np.arange(npts, dtype=float)
    ab = alpha + beta
    diag = np.empty(npts)
    if alpha == beta:
        diag[:] = 0.0
    else:
        s = 2 * k + ab
        with np.errstate(divide="ignore", invalid="ignore"):
            diag[:] = (beta ** 2 - alpha ** 2) / (s * (s + 2))
        if abs(ab) < 1e-300:
            diag[0] = (beta - alpha) / (ab + 2)
    j = np.arange(1, npts, dtype=float)
    s = 2 * j + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.sqrt(4 * j * (j + alpha) * (j + beta) * (j + ab)
                      / (s ** 2 * (s + 1) * (s - 1)))
    if npts > 1 and abs(ab + 1) < 1e-300:
        # s - 1 vanishes at j = 1 when alpha + beta = -1
        off[0] = math.sqrt(4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab)))
    if npts == 1:
        nodes, vecs = diag.copy(), np.ones((1, 1))
    else:
        nodes, vecs = eigh_tridiagonal(diag, off)
    log_mass = ((ab + 1) * math.log(2.0) + math.lgamma(alpha + 1)
                + math.lgamma(beta + 1) - math.lgamma(ab + 2))
    weights = math.exp(log_mass) * vecs[0] ** 2
    return nodes, weights


@dataclass(frozen=True)
class QuadratureGrid:
    """Flattened tensor grid on S^n.

    ``theta`` has shape (N, n-1), ``phi`` and ``weights`` shape (N,), and
    ``x`` the Cartesian nodes (N, n+1).  Weights sum to one.
    """

    n: int
    degree: int
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    x: np.ndarray

    @property
    def size(self):
        return self.weights.size


def _max_nodes(max_nodes):
    if max_nodes is not None:
        return int(max_nodes)
    env = os.environ.get("UNCERT_MAX_NODES")
    return int(env) if env else DEFAULT_MAX_NODES


def build_grid(n, degree, max_nodes=None):
    """Grid exact for polynomials of degree ``degree + 1`` on S^n.

    The extra degree covers the factor x in int x |F|^2 for bandlimited F
    with 2L <= degree.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    n_theta = -(-(degree + 2) // 2) + 1
    n_phi = degree + 2
    n_phi += n_phi % 2  # even count keeps the grid antipodally symmetric
    total = n_theta ** (n - 1) * n_phi
    cap = _max_nodes(max_nodes)
    if total > cap:
        raise MemoryError(f"grid needs {total} nodes, cap is {cap}")

    axes, axis_w = [], []
    for iota in range(1, n):
        alpha = 0.5 * (n - iota - 1)
        t, w = gauss_jacobi(n_theta, alpha, alpha)
        axes.append(np.arccos(np.clip(t, -1.0, 1.0)))
        axis_w.append(w)
    axes.append(2 * np.pi * np.arange(n_phi) / n_phi)
    axis_w.append(np.full(n_phi, 2 * np.pi / n_phi))

    mesh = np.meshgrid(*axes, indexing="ij")
    wmesh = np.meshgrid(*axis_w, indexing="ij")
    theta = np.stack([m.ravel() for m in mesh[:-1]], axis=-1)
    phi = mesh[-1].ravel()
    weights = np.prod([w.ravel() for w in wmesh], axis=0) / surface_constant(n)
    x = spherical_to_cartesian(theta, phi)
    return QuadratureGrid(n=n, degree=degree, theta=theta, phi=phi,
                          weights=weights, x=x)


def integrate(grid, f):
    """Weighted node sum approximating int_{S^n} f dsigma.

    ``f`` is either an array of node values (leading axis = nodes) or a
    callable ``f(theta, phi)`` returning one.
    """
    vals = f(grid.theta, grid.phi) if callable(f) else f
    vals = np.asarray(vals)
    if vals.shape[0] != grid.size:
        raise ValueError("value array does not match the grid")
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand is not finite on the grid")
    return np.tensordot(grid.weights, vals, axes=(0, 0))


def _values(grid, f):
    return np.asarray(f(grid.theta, grid.phi) if callable(f) else f)


def gravity_center_direct(grid, f):
    """(1/||F||^2) int x |F|^2 by quadrature."""
    vals = _values(grid, f)
    dens = np.abs(vals) ** 2
    norm_sq = integrate(grid, dens)
    if norm_sq <= 0:
        raise ZeroDivisionError("function vanishes on the grid")
    return integrate(grid, grid.x * dens[:, None]) / norm_sq


def momentum_direct(grid, f, lap_f):
    """-(1/||F||^2) int (Laplace-Beltrami F) conj(F) by quadrature."""
    vals = _values(grid, f)
    lap = _values(grid, lap_f)
    norm_sq = integrate(grid, np.abs(vals) ** 2)
    if norm_sq <= 0:
        raise ZeroDivisionError("function vanishes on the grid")
    return float(np.real(-integrate(grid, lap * np.conj(vals)) / norm_sq))


def coupling_integral_direct(grid, k_idx, m_idx):
    """int x conj(Y_k) Y_m dsigma by quadrature; complex vector of length n+1."""
    n = grid.n
    k_idx, m_idx = validate_index(n, k_idx), validate_index(n, m_idx)
    yk = eval_harmonic(n, k_idx, grid.theta, grid.phi)
    ym = eval_harmonic(n, m_idx, grid.theta, grid.phi)
    return integrate(grid, grid.x * (np.conj(yk) * ym)[:, None])
