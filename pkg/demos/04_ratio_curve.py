"""How far G is from the best zonal Poisson wavelet, as the dimension grows.

Writes ratio_curve.csv next to the working directory; plot it with any tool.
"""
import numpy as np

from sphere_uncertainty.sweeps import SweepSpec, write_csv
from sphere_uncertainty import poisson_directional as pd

lams = tuple(np.arange(2.0, 12.5, 1.0))

# %% table: numerator, zonal minimum over m, ratio
print(f"{'lambda':>6} {'u_limit':>9} {'zonal_min':>9} {'best m':>6} {'ratio':>7}")
for lam, ul, zmin, m, ratio in pd.ratio_curve(lams):
    print(f"{lam:6.1f} {ul:9.5f} {zmin:9.5f} {m:6d} {ratio:7.4f}")

# %% the same as a CSV sweep (byte-identical on every run)
text = write_csv(SweepSpec(lams=lams, mode="ratio"), "ratio_curve.csv")
print("\n" + text.split("\n")[0], "...", f"({text.count(chr(10)) - 1} rows)")
