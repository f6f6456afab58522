"""Directional Poisson wavelet G: exact values, small-scale expansions, limits."""
from sphere_uncertainty import poisson_directional as pd

lam = 2.0  # S^5

# %% exact (generic coefficient machinery) vs asymptotic expansion
vs_a, vm_a, u_a = pd.var_s_G_asymptotic(lam), pd.var_m_G_asymptotic(lam), pd.u_G_asymptotic(lam)
print(f"{'rho':>6} {'var_S':>12} {'asym':>12} {'var_M':>12} {'asym':>12} {'U':>9} {'asym':>9}")
for rho in pd.DEFAULT_RHO_GRID:
    rep = pd.uncertainty_G(lam, rho)
    print(f"{rho:6.2f} {rep.var_s:12.4e} {vs_a(rho):12.4e} {rep.var_m:12.4e} {vm_a(rho):12.4e}"
          f" {rep.u:9.6f} {u_a(rho):9.6f}")

# %% Richardson extrapolation to rho = 0
rhos = pd.DEFAULT_RHO_GRID
reps = [pd.uncertainty_G(lam, r) for r in rhos]
print("\nrho^2 var_M ->", pd.richardson_limit(rhos, [p.var_m * r * r for p, r in zip(reps, rhos)]), "(33)")
print("var_S/rho^2 ->", pd.richardson_limit(rhos, [p.var_s / r / r for p, r in zip(reps, rhos)]),
      "(59/135 =", 59 / 135, ")")
print("U           ->", pd.richardson_limit(rhos, [p.u for p in reps]), "(", pd.u_limit(lam), ")")

# %% S-sum expansion and its remainder order
a = pd.s_sum_asymptotic(4, 6)
for rho in (0.04, 0.02, 0.01):
    err = pd.s_sum_exact(4, 6, rho) - a(rho)
    print(f"rho={rho}: remainder * rho^7 = {err * rho ** 7:.6f}")

# %% large dimensions: U limit approaches lambda + 25/12
for l in (10, 20, 40, 80):
    print(f"lambda={l:3d}  u_limit - lambda - 25/12 = {pd.u_limit(l) - l - 25 / 12:+.5f}")
