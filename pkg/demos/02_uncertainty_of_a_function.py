"""Uncertainty product of a bandlimited function, series vs brute force."""
import math

import numpy as np

from sphere_uncertainty import FourierExpansion, MultiIndex, uncertainty_report
from sphere_uncertainty.quadrature import build_grid, gravity_center_direct, momentum_direct
from sphere_uncertainty.sphere_core import enumerate_indices

# %% F = 1 + sqrt(3) x_1 on S^2 is Y_0 + Y_1 in the orthonormal zonal basis
F = FourierExpansion(2, {MultiIndex(0, (0,)): 1.0, MultiIndex(1, (0,)): 1.0})
rep = uncertainty_report(F)
print("xi_O   =", rep.xi)
print("var_S  =", rep.var_s, " var_M =", rep.var_m)
print("U      =", rep.u, " (sqrt 2 =", math.sqrt(2), ")  bound n/2 =", rep.bound)

# %% a random complex function on S^3, degree <= 4
rng = np.random.default_rng(0)
coeffs = {idx: complex(*rng.normal(size=2)) for l in range(5) for idx in enumerate_indices(3, l)}
G = FourierExpansion(3, coeffs)
rep = uncertainty_report(G)

# %% the same quantities from a tensor Gauss-Jacobi grid
grid = build_grid(3, 2 * G.max_degree)
vals = G.evaluate(grid.theta, grid.phi)
xi_q = gravity_center_direct(grid, vals)
vm_q = momentum_direct(grid, vals, G.laplacian().evaluate(grid.theta, grid.phi))
print(f"\n{len(G)} coefficients, {grid.size} nodes")
print("max |xi series - xi grid| =", np.max(np.abs(rep.xi - xi_q)))
print("|var_M series - grid|     =", abs(rep.var_m - vm_q))
print("U =", rep.u, ">= n/2 =", rep.bound, rep.bound_ok)
