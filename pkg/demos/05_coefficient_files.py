"""Coefficient files and the command line."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

from sphere_uncertainty import poisson_directional as pd
from sphere_uncertainty.uncertainty import expansion_to_json, load_expansion

tmp = Path(tempfile.mkdtemp())

# %% write the wavelet G at a coarse scale as a coefficient file
G = pd.g_coefficients(1.5, 0.5)
path = tmp / "g.json"
path.write_text(json.dumps(expansion_to_json(G)))
print(path, "holds", len(load_expansion(path)), "coefficients")

# %% `report` reads the file and prints JSON
cmd = [sys.executable, "-m", "sphere_uncertainty"]
out = subprocess.run(cmd + ["report", str(path)], capture_output=True, text=True)
print(out.stdout)

# %% errors carry an ERROR: prefix and a distinct exit code
path.write_text(json.dumps({"n": 2, "coefficients": [{"l": 0, "k": [0], "re": 1}]}))
out = subprocess.run(cmd + ["report", str(path)], capture_output=True, text=True)
print("exit", out.returncode, out.stderr.strip())
