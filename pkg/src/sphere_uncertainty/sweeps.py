"""Parameter sweeps over (lambda, rho) written as CSV tables."""
import csv
import io
import math
from dataclasses import dataclass, field

from . import poisson_directional as pd

__all__ = ["SweepSpec", "MODES", "sweep_rows", "format_csv", "write_csv"]

MODES = ("exact", "asymptotic", "ratio")

_COLUMNS = {
    "exact": ("lambda", "rho", "var_S", "var_M", "U"),
    "asymptotic": ("lambda", "rho", "var_S", "var_M", "U"),
    "ratio": ("lambda", "rho", "U", "u_limit", "zonal_min", "ratio"),
}


@dataclass(frozen=True)
class SweepSpec:
    lams: tuple
    rhos: tuple = pd.DEFAULT_RHO_GRID
    mode: str = "exact"
    columns: tuple = field(default=None)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not self.lams:
            raise ValueError("empty lambda list")
        for lam in self.lams:
            if 2 * lam != int(2 * lam) or lam < 0.5:
                raise ValueError(f"lambda must be a half-integer >= 1/2, got {lam}")
        if self.mode == "ratio" and min(self.lams) < 2:
            raise ValueError("ratio mode needs lambda >= 2")
        if self.mode == "asymptotic" and min(self.lams) < 1.5:
            raise ValueError("asymptotics require lambda >= 3/2")
        if not self.rhos or any(not r > 0 for r in self.rhos):
            raise ValueError("rho values must be positive and nonempty")
        if self.columns is not None:
            unknown = set(self.columns) - set(_COLUMNS[self.mode])
            if unknown:
                raise ValueError(f"unknown columns {sorted(unknown)} for mode {self.mode}")

    @property
    def header(self):
        if self.columns is None:
            return _COLUMNS[self.mode]
        return tuple(c for c in _COLUMNS[self.mode] if c in self.columns)


def _row_exact(lam, rho):
    rep = pd.uncertainty_G(lam, rho)
    return {"lambda": lam, "rho": rho, "var_S": rep.var_s, "var_M": rep.var_m, "U": rep.u}


def _row_asymptotic(lam, rho):
    vs = pd.var_s_G_asymptotic(lam)(rho)
    vm = pd.var_m_G_asymptotic(lam)(rho)
    return {"lambda": lam, "rho": rho, "var_S": vs, "var_M": vm,
            "U": pd.u_G_asymptotic(lam)(rho)}


def sweep_rows(spec):
    """Rows as dicts in deterministic (lambda, rho) order."""
    rows = []
    if spec.mode == "ratio":
        for lam, ul, zmin, _, ratio in pd.ratio_curve(spec.lams, spec.rhos):
            rows.append({"lambda": lam, "rho": "limit", "U": ul, "u_limit": ul,
                         "zonal_min": zmin, "ratio": ratio})
        return rows
    make = _row_exact if spec.mode == "exact" else _row_asymptotic
    for lam in spec.lams:
        for rho in spec.rhos:
            rows.append(make(float(lam), float(rho)))
    return rows


def _fmt(value):
    if isinstance(value, str):
        return value
    if not math.isfinite(value):
        return repr(float(value))
    return "%.17g" % value


def format_csv(spec, rows):
    """CSV text: header row, LF line endings, 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = spec.header
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in header])
    return buf.getvalue()


def write_csv(spec, path):
    """Run the sweep and write it to ``path`` in one go."""
    text = format_csv(spec, sweep_rows(spec))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
