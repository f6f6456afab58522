"""Polar integrals of Gegenbauer products: closed forms against quadrature."""
import numpy as np

from sphere_uncertainty.checks import theta_quadrature
from sphere_uncertainty.special_functions import (
    gegenbauer,
    theta_integral_1,
    theta_integral_c,
    theta_integral_s,
)

# %% Gegenbauer polynomials by upward recurrence
t = np.linspace(-1, 1, 5)
print("C_3^1.5(t) =", gegenbauer(3, 1.5, t))

# %% closed forms vs Gauss-Jacobi on the raw integrand, axis 1 of S^4
n, iota = 4, 1
cases = [
    ("1", theta_integral_1, (3, 1, 3, 1)),
    ("c", theta_integral_c, (3, 1, 4, 1)),
    ("s", theta_integral_s, (3, 1, 4, 2)),   # degrees 2 and 2: order-shifted pairing
    ("s", theta_integral_s, (4, 1, 3, 2)),   # degrees 3 and 1: negative value
]
print(f"\n{'kind':>4} {'(a,b,c,d)':>14} {'closed':>14} {'quadrature':>14}")
for kind, fn, args in cases:
    closed = fn(n, iota, *args)
    quad = theta_quadrature(kind, n, iota, *args)
    print(f"{kind:>4} {str(args):>14} {closed:14.10f} {quad:14.10f}")
