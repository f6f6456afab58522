"""Command-line front end: ``report``, ``poisson``, ``sweep`` and ``verify``.

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 undefined
quantity, 4 convergence failure, 5 I/O failure.  Every error path prints a
single line starting with ``ERROR:`` on stderr.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from . import poisson_directional as pd
from .checks import run_all
from .sweeps import MODES, SweepSpec, write_csv
from .uncertainty import (
    FormatError,
    ZeroGravityCenterError,
    ZeroNormError,
    load_expansion,
    uncertainty_report,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNDEFINED, EXIT_CONVERGENCE, EXIT_IO = range(6)


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False)


def _number_list(text, name):
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise CliError(EXIT_INPUT, f"{name}: expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise CliError(EXIT_INPUT, f"{name}: empty list")
    return values


def _check_lambda(lam, minimum=0.5):
    if not math.isfinite(lam) or 2 * lam != int(2 * lam) or lam < minimum:
        raise CliError(EXIT_INPUT, f"lambda must be a half-integer >= {minimum:g}, got {lam:g}")


def cmd_report(args):
    try:
        F = load_expansion(args.coeff_file)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.coeff_file}: {exc.strerror}") from None
    except FormatError as exc:
        raise CliError(EXIT_INPUT, f"malformed coefficient file: {exc}") from None
    try:
        rep = uncertainty_report(F)
    except ZeroNormError:
        raise CliError(EXIT_UNDEFINED, "function has zero norm") from None
    except ZeroGravityCenterError:
        raise CliError(EXIT_UNDEFINED, "gravity center is zero") from None
    print(_dump(rep.to_dict()))
    return EXIT_OK


def _poisson_asymptotic(lam, rho):
    return {
        "var_S": pd.var_s_G_asymptotic(lam)(rho),
        "var_M": pd.var_m_G_asymptotic(lam)(rho),
        "U": pd.u_G_asymptotic(lam)(rho),
    }


def cmd_poisson(args):
    lam, rho, mode = args.lam, args.rho, args.mode
    _check_lambda(lam)
    if not (math.isfinite(rho) and rho > 0):
        raise CliError(EXIT_INPUT, f"rho must be positive, got {rho:g}")
    if mode != "exact" and lam < 1.5:
        raise CliError(EXIT_INPUT, "asymptotics require λ ≥ 3/2")
    out = {"lambda": lam, "rho": rho, "n": pd.dimension_of(lam)}
    if mode != "asymptotic":
        out["exact"] = pd.uncertainty_G(lam, rho).to_dict()
    if mode != "exact":
        out["asymptotic"] = _poisson_asymptotic(lam, rho)
        out["u_limit"] = pd.u_limit(lam)
    if mode == "both":
        ex, asy = out["exact"], out["asymptotic"]
        out["relative_gaps"] = {key: asy[key] / ex[key] - 1 for key in ("var_S", "var_M", "U")}
    print(_dump(out))
    return EXIT_OK


def _lams(args):
    if args.lam_range is not None:
        start, stop, step = args.lam_range
        if not step > 0 or stop < start:
            raise CliError(EXIT_INPUT, "--lam-range needs start <= stop and step > 0")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(float(start + i * step) for i in range(count))
    return _number_list(args.lam, "--lam")


def _rhos(args):
    if args.rho_geom is not None:
        start, stop, count = args.rho_geom
        if not (start > 0 and stop > 0) or count < 1 or count != int(count):
            raise CliError(EXIT_INPUT, "--rho-geom needs positive endpoints and an integer count")
        return tuple(float(v) for v in np.geomspace(start, stop, int(count)))
    if args.rho is not None:
        return _number_list(args.rho, "--rho")
    return pd.DEFAULT_RHO_GRID


def cmd_sweep(args):
    columns = None if args.columns is None else tuple(c.strip() for c in args.columns.split(","))
    try:
        spec = SweepSpec(lams=_lams(args), rhos=_rhos(args), mode=args.mode, columns=columns)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    out_dir = os.path.dirname(os.path.abspath(args.output))
    if not os.path.isdir(out_dir) or not os.access(out_dir, os.W_OK):
        raise CliError(EXIT_IO, f"cannot write {args.output}")
    try:
        write_csv(spec, args.output)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.output}: {exc.strerror}") from None
    return EXIT_OK


def cmd_verify(args):
    failed = None
    for res in run_all(level=args.level, seed=args.seed):
        line = res.line() if args.timings else res.line().rsplit("  (", 1)[0]
        print(line, flush=True)
        if not res.passed and failed is None:
            failed = res.name
    if failed is not None:
        raise CliError(EXIT_VERIFY, f"invariant failed: {failed}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sphere-uncertainty",
        description="Uncertainty products on S^n from hyperspherical-harmonic coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="uncertainty report for a coefficient file (JSON on stdout)")
    p.add_argument("coeff_file")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("poisson", help="directional Poisson wavelet at one (lambda, rho)")
    p.add_argument("--lam", type=float, required=True, help="lambda = (n-1)/2, half-integer")
    p.add_argument("--rho", type=float, required=True, help="scale rho > 0")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="mode", action="store_const", const="exact")
    g.add_argument("--asymptotic", dest="mode", action="store_const", const="asymptotic")
    g.add_argument("--both", dest="mode", action="store_const", const="both")
    p.set_defaults(func=cmd_poisson, mode="exact")

    p = sub.add_parser("sweep", help="CSV table over a (lambda, rho) grid")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lam", help="comma-separated lambda values")
    g.add_argument("--lam-range", nargs=3, type=float, metavar=("START", "STOP", "STEP"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rho", help="comma-separated rho values (default 0.16,...,0.01)")
    g.add_argument("--rho-geom", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--mode", choices=MODES, default="exact")
    p.add_argument("--columns", help="comma-separated subset of the mode's columns")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--level", choices=("quick", "full"), default="full")
    p.add_argument("--max-nodes", type=int, help="quadrature node cap (overrides UNCERT_MAX_NODES)")
    p.add_argument("--timings", action="store_true", help="append run times (output no longer byte-stable)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            print("ERROR: invalid arguments (see --help)", file=sys.stderr)
            return EXIT_INPUT
        return EXIT_OK
    if getattr(args, "max_nodes", None) is not None:
        os.environ["UNCERT_MAX_NODES"] = str(args.max_nodes)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return exc.code
    except pd.ConvergenceError as exc:
        print(f"ERROR: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except MemoryError as exc:
        print(f"ERROR: resource limit: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
