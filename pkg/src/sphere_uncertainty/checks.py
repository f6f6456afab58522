"""Oracle verification suite: closed forms and series against brute force.

Each entry of :data:`ALL_CHECKS` returns a :class:`CheckResult`.
``level="quick"`` shrinks sample counts and parameter grids; ``"full"`` runs
the acceptance sizes.  Everything is seeded, so results are reproducible.
"""
import itertools
import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from . import poisson_directional as pd
from .quadrature import (
    build_grid,
    coupling_integral_direct,
    gauss_jacobi,
    gravity_center_direct,
    momentum_direct,
)
from .special_functions import (
    gegenbauer,
    phi_integral,
    theta_integral_1,
    theta_integral_c,
    theta_integral_s,
)
from .sphere_core import MultiIndex, enumerate_indices
from .sweeps import SweepSpec, write_csv
from .uncertainty import (
    FourierExpansion,
    ZeroGravityCenterError,
    conjugacy_order,
    coupling_integral,
    gravity_center,
    momentum_variance,
    uncertainty_report,
)

__all__ = ["CheckResult", "ALL_CHECKS", "run_all", "random_expansion", "theta_quadrature"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<28s} {self.detail}  ({self.seconds:.1f}s)"


def _timed(name, fn):
    def wrapper(level="full", seed=0):
        t0 = time.perf_counter()
        passed, detail = fn(level, seed)
        return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)
    wrapper.__name__ = fn.__name__
    wrapper.check_name = name
    return wrapper


def theta_quadrature(kind, n, iota, a, b, c, d):
    """Gauss-Jacobi value of a polar single integral, straight from its integrand."""
    base = 0.5 * (n - iota)
    power = b + d + n - iota + (1 if kind == "s" else 0)
    # sin^power dtheta = (1 - t^2)^((power - 1)/2) dt
    alpha = 0.5 * (power - 1)
    npts = (a + c) // 2 + 4
    t, w = gauss_jacobi(npts, alpha, alpha)
    vals = gegenbauer(a - b, base + b, t) * gegenbauer(c - d, base + d, t)
    if kind == "c":
        vals = vals * t
    return float(np.dot(w, vals))


_CLOSED = {"1": theta_integral_1, "c": theta_integral_c, "s": theta_integral_s}


def _closed_form_cases(max_index):
    """Arguments for which each closed form is a statement about the integral."""
    for n in range(2, 7):
        for iota in range(1, n):
            for a, b, c, d in itertools.product(range(max_index + 1), repeat=4):
                if a < b or c < d:
                    continue
                if b == d:
                    yield "1", n, iota, a, b, c, d
                    yield "c", n, iota, a, b, c, d
                if abs(b - d) == 1:
                    yield "s", n, iota, a, b, c, d


def _check_closed_forms(level, seed):
    max_index = 6 if level == "full" else 4
    worst, count = 0.0, 0
    for kind, n, iota, a, b, c, d in _closed_form_cases(max_index):
        closed = _CLOSED[kind](n, iota, a, b, c, d)
        quad = theta_quadrature(kind, n, iota, a, b, c, d)
        # Cauchy-Schwarz scale keeps the test relative for exact zeros
        scale = math.sqrt(theta_quadrature("1", n, iota, a, b, a, b)
                          * theta_quadrature("1", n, iota, c, d, c, d))
        err = abs(closed - quad) / max(abs(closed), scale)
        worst = max(worst, err)
        count += 1
    phi_nodes = 2 * np.pi * np.arange(64) / 64
    for dd in range(-6, 7):
        base = np.exp(1j * dd * phi_nodes) * (2 * np.pi / 64)
        for kind, extra in (("1", 1.0), ("c", np.cos(phi_nodes)), ("s", np.sin(phi_nodes))):
            quad = complex(np.sum(base * extra))
            err = abs(phi_integral(kind, dd) - quad) / (2 * np.pi)
            worst = max(worst, err)
            count += 1
    return worst <= 1e-10, f"{count} integrals, worst rel. err {worst:.2e} (tol 1e-10)"


def _all_indices(n, lmax):
    return [idx for l in range(lmax + 1) for idx in enumerate_indices(n, l)]


def _check_structure(level, seed):
    rng = np.random.default_rng(seed)
    n_random = 500 if level == "full" else 100
    worst_zero, worst_match, bad_support = 0.0, 0.0, 0
    violating, conforming = 0, 0
    for n in (2, 3):
        grid = build_grid(n, 8)
        idxs = _all_indices(n, 4)
        target = n_random // 2
        seen = 0
        while seen < target:
            k, m = (idxs[i] for i in rng.integers(len(idxs), size=2))
            if conjugacy_order(k, m) is not None:
                continue
            direct = coupling_integral_direct(grid, k, m)
            worst_zero = max(worst_zero, float(np.max(np.abs(direct))))
            seen += 1
        violating += seen
        for k, m in itertools.product(idxs, repeat=2):
            nu = conjugacy_order(k, m)
            if nu is None:
                continue
            conforming += 1
            direct = coupling_integral_direct(grid, k, m)
            series = coupling_integral(n, k, m, nu)
            worst_match = max(worst_match, float(np.max(np.abs(direct - series))))
            expected = {nu - 1} if nu < n else {n - 1, n}
            nonzero = set(np.flatnonzero(np.abs(direct) > 1e-10))
            if nonzero != expected:
                bad_support += 1
    ok = worst_zero <= 1e-10 and worst_match <= 1e-10 and bad_support == 0
    return ok, (f"{violating} violating pairs max|I| {worst_zero:.1e}; "
                f"{conforming} conjugate pairs, support mismatches {bad_support}, "
                f"closed-form err {worst_match:.1e}")


def random_expansion(rng, n, lmax, density=1.0):
    """Complex Gaussian coefficients on every index up to degree ``lmax``."""
    coeffs = {}
    for idx in _all_indices(n, lmax):
        if density >= 1.0 or rng.random() < density:
            coeffs[idx] = complex(rng.normal(), rng.normal())
    if not coeffs:
        coeffs[enumerate_indices(n, 0)[0]] = 1.0
    return FourierExpansion(n, coeffs)


def _check_series_oracle(level, seed):
    rng = np.random.default_rng(seed + 1)
    count = 50 if level == "full" else 12
    worst_xi = worst_m = 0.0
    grids = {n: build_grid(n, 11) for n in (2, 3)}
    for i in range(count):
        n = 2 + i % 2
        lmax = int(rng.integers(1, 6))
        F = random_expansion(rng, n, lmax)
        grid = grids[n]
        vals = F.evaluate(grid.theta, grid.phi)
        xi_direct = gravity_center_direct(grid, vals)
        worst_xi = max(worst_xi, float(np.max(np.abs(xi_direct - gravity_center(F)))))
        vm_direct = momentum_direct(grid, vals, F.laplacian().evaluate(grid.theta, grid.phi))
        worst_m = max(worst_m, abs(vm_direct - momentum_variance(F)))
    ok = worst_xi <= 1e-9 and worst_m <= 1e-9
    return ok, f"{count} functions, max |dxi| {worst_xi:.1e}, |dvar_M| {worst_m:.1e} (tol 1e-9)"


def _zonal_wavelets():
    """Zonal Poisson wavelets on S^2..S^4; these sit close to the bound."""
    for lam in (0.5, 1.0, 1.5):
        n = pd.dimension_of(lam)
        for m in (1, 2, 3):
            for rho in (0.5, 0.1):
                c = pd.zonal_poisson_coefficients(lam, m, rho)
                coeffs = {MultiIndex(l, (0,) * (n - 1)): float(v)
                          for l, v in enumerate(c) if v != 0}
                yield FourierExpansion(n, coeffs)


def _check_bound(level, seed):
    rng = np.random.default_rng(seed + 2)
    count = 200 if level == "full" else 40
    reports = [uncertainty_report(F) for F in _zonal_wavelets()]
    while len(reports) < count:
        n = 2 + len(reports) % 3
        lmax = int(rng.integers(1, 5 if n < 4 else 4))
        F = random_expansion(rng, n, lmax, density=float(rng.uniform(0.2, 1.0)))
        try:
            reports.append(uncertainty_report(F))
        except ZeroGravityCenterError:
            continue
    violations = sum(not rep.bound_ok for rep in reports)
    closest = min(rep.u - rep.bound for rep in reports)
    return violations == 0, (f"{len(reports)} functions (18 zonal wavelets), "
                             f"min U - n/2 = {closest:.3e}, violations {violations}")


def _remainder_slope(exact, approx, rhos):
    err = np.array([abs(exact(r) - approx(r)) for r in rhos])
    return float(np.polyfit(np.log(rhos), np.log(err), 1)[0])


def _check_s_asymptotics(level, seed):
    rhos = np.array(pd.DEFAULT_RHO_GRID)
    worst, parts = 0.0, []
    for mu, m in ((4, 3), (4, 6), (6, 8)):
        asym = pd.s_sum_asymptotic(mu, m)
        slope = _remainder_slope(lambda r: pd.s_sum_exact(mu, m, r), asym, rhos)
        dev = abs(slope - asym.error_order)
        worst = max(worst, dev)
        parts.append(f"({mu},{m}):{slope:.2f}")
    return worst <= 0.3, "slopes " + " ".join(parts) + f", max dev {worst:.3f} (tol 0.3)"


def _check_double_path(level, seed):
    lams = (1, 1.5, 2, 2.5) if level == "full" else (1, 2)
    rhos = (0.5, 0.2, 0.1) if level == "full" else (0.5, 0.2)
    worst = 0.0
    for lam in lams:
        for rho in rhos:
            G = pd.g_coefficients(lam, rho)
            generic_xi = gravity_center(G)
            pairs = (
                (pd.norm_sq_series(lam, rho), G.norm_sq()),
                (pd.xi_series(lam, rho), generic_xi[0]),
                (pd.var_m_G(lam, rho), momentum_variance(G)),
            )
            for special, generic in pairs:
                worst = max(worst, abs(special / generic - 1))
            worst = max(worst, float(np.max(np.abs(generic_xi[1:]))))
    return worst <= 1e-10, f"{len(lams) * len(rhos)} (lambda, rho) points, worst rel. err {worst:.1e} (tol 1e-10)"


def _check_limits(level, seed):
    lam = 2
    rhos = pd.DEFAULT_RHO_GRID
    reps = [pd.uncertainty_G(lam, r) for r in rhos]
    vm = pd.richardson_limit(rhos, [rep.var_m * r ** 2 for rep, r in zip(reps, rhos)])
    vs = pd.richardson_limit(rhos, [rep.var_s / r ** 2 for rep, r in zip(reps, rhos)])
    u = pd.richardson_limit(rhos, [rep.u for rep in reps])
    errs = (abs(vm / 33 - 1), abs(vs / (59 / 135) - 1), abs(u / pd.u_limit(2) - 1))
    return max(errs) <= 1e-3, (f"rho^2 var_M->{vm:.6f} (33), var_S/rho^2->{vs:.6f} (59/135), "
                               f"U->{u:.6f} ({pd.u_limit(2):.6f}); max rel {max(errs):.1e} (tol 1e-3)")


def _check_large_lambda(level, seed):
    gaps = [abs(pd.u_limit(lam) - lam - 25 / 12) for lam in (10, 20, 40)]
    r1, r2 = gaps[0] / gaps[1], gaps[1] / gaps[2]
    ok = gaps[0] > gaps[1] > gaps[2] and all(1.6 <= r <= 2.4 for r in (r1, r2))
    return ok, f"gaps {gaps[0]:.4f} {gaps[1]:.4f} {gaps[2]:.4f}, ratios {r1:.3f} {r2:.3f} (in [1.6, 2.4])"


def _check_ratio_curve(level, seed):
    step = 0.5 if level == "full" else 2.0
    lams = tuple(np.arange(2.0, 20.0 + step / 2, step))
    rows = pd.ratio_curve(lams)
    ratio = {lam: r for lam, _, _, _, r in rows}
    values = [r for *_, r in rows]
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    above = min(values) > 1
    tail = ratio[20.0] - 1 < (ratio[4.0] - 1) / 2
    return decreasing and above and tail, (
        f"{len(rows)} lambdas, ratio(2)={values[0]:.4f} ratio(4)={ratio[4.0]:.4f} "
        f"ratio(20)={ratio[20.0]:.4f}, decreasing={decreasing}, >1={above}")


def _check_determinism(level, seed):
    spec = SweepSpec(lams=(2.0, 2.5), rhos=(0.5, 0.2), mode="exact")
    with tempfile.TemporaryDirectory() as tmp:
        paths = [os.path.join(tmp, f"run{i}.csv") for i in range(2)]
        for p in paths:
            write_csv(spec, p)
        blobs = [open(p, "rb").read() for p in paths]
    return blobs[0] == blobs[1], f"two sweep runs, {len(blobs[0])} bytes, identical={blobs[0] == blobs[1]}"


ALL_CHECKS = (
    _timed("closed_forms_vs_quadrature", _check_closed_forms),
    _timed("structure_theorem", _check_structure),
    _timed("series_vs_oracle", _check_series_oracle),
    _timed("uncertainty_bound", _check_bound),
    _timed("s_sum_asymptotics", _check_s_asymptotics),
    _timed("double_path_G", _check_double_path),
    _timed("limiting_values", _check_limits),
    _timed("large_lambda", _check_large_lambda),
    _timed("ratio_curve", _check_ratio_curve),
    _timed("sweep_determinism", _check_determinism),
)


def run_all(level="full", seed=0, stop_on_failure=False):
    """Run every check in order; returns the list of results."""
    results = []
    for check in ALL_CHECKS:
        res = check(level, seed)
        results.append(res)
        if stop_on_failure and not res.passed:
            break
    return results
