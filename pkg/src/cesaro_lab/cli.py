"""Command-line entry point: ``cesaro-lab <command> [options]``.

Exit codes: 0 every verdict holds / every root found, 1 some check FAILS,
2 some result is inconclusive, 3 usage, parameter or IO error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .functions import f_lambda, identity, neg_log, z_binomial
from .geometry import (chain_explorer, close_to_convex_check, gegenbauer_cosine_positivity,
                       gegenbauer_mean_coeffs, zero_free_closed_disc)
from .quadrature import QUAD_ABS_TOL, RootStatus, mustar_curve, solve_mu0, solve_mustar
from .report import Report, emit
from .sequences import Params, ParameterError, coeff_table
from .series import SchemeError, TriangularScheme
from .subordination import (BoundaryGrid, PreconditionError, check_halfplane,
                            check_hypergeometric_stability, check_matrix_stability, check_stability,
                            check_starlike_ratio)
from .trig import EPS, GridSpec, positivity_scan
from .verdicts import EVAL_BUDGET, Status

THREADS_ENV = "CESARO_THREADS"
EXIT_OK, EXIT_FAILS, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer")


def _pmap(fn, items, threads: int) -> list:
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _orders(args) -> range:
    lo = args.n if args.n_from is None else args.n_from
    if lo < 0 or args.n < lo:
        raise UsageError("need 0 <= --n-from <= --n")
    return range(lo, args.n + 1)


def _resolve_mu(args) -> float:
    if args.mu_factor is None:
        if args.mu is None:
            raise UsageError("give --mu or --mu-factor")
        return args.mu
    return args.mu_factor * solve_mu0(args.b, args.c).critical


def _boundary_grid(args) -> BoundaryGrid:
    return BoundaryGrid.default(args.radii, args.angles)


def _verdict_record(v, **keys) -> dict:
    rec = dict(keys)
    rec.update(status=v.status.value, margin=v.margin, samples=v.samples,
               exploratory=v.exploratory)
    if v.witness is not None:
        rec["witness_re"], rec["witness_im"] = v.witness.real, v.witness.imag
    if v.reason:
        rec["reason"] = v.reason
    return rec


# --- commands -----------------------------------------------------------------

def cmd_coeffs(args):
    exact = args.exact
    b, c, mu = (Fraction(args.b), Fraction(args.c), Fraction(args.mu)) if exact else (args.b, args.c, args.mu)
    table = coeff_table(args.n, b, c, mu)
    rows = []
    for k, ck in enumerate(table.c_seq):
        row = {"k": k, "c_k": str(ck) if exact else float(ck)}
        if k <= args.n:
            row["B_k"] = str(table.big_b[k]) if exact else float(table.big_b[k])
            row["d_k"] = str(table.d_seq[k]) if exact else float(table.d_seq[k])
        rows.append(row)
    curve = [("c_k", list(range(len(rows))), [float(ck) for ck in table.c_seq])]
    return rows, ["k", "B_k", "d_k", "c_k"], [], {}, curve, ("k", "c_k")


SCAN_KINDS = {"cosine": ("cosine", 1), "odd-sine": ("sine", 1), "even-sine": ("sine", 0)}


def cmd_scan(args):
    mu = _resolve_mu(args)
    kinds = list(SCAN_KINDS) if args.kind == "all" else [args.kind]
    grid = GridSpec(points=args.points, refinement=args.refinement)
    exploratory = args.b < args.c

    def job(item):
        n, kind = item
        trig, odd = SCAN_KINDS[kind]
        if kind == "even-sine" and n == 0:
            return None
        table = coeff_table(n, args.b, args.c, mu)
        rep = positivity_scan(table, trig, 2 * n + odd, grid, exploratory=exploratory)
        rec = _verdict_record(rep.verdict, n=n, kind=kind)
        rec.update(min_value=rep.min_value, argmin=rep.argmin, certified=rep.certified,
                   lipschitz_bound=rep.lipschitz_bound, cells=rep.cells)
        return rec

    items = [(n, k) for n in _orders(args) for k in kinds]
    rows = [r for r in _pmap(job, items, _threads(args)) if r is not None]
    cols = ["n", "kind", "status", "margin", "min_value", "argmin", "certified", "lipschitz_bound",
            "cells", "samples", "exploratory"]
    statuses = [r["status"] for r in rows]
    return rows, cols, statuses, {"mu": mu}, [], ("n", "min")


def _root_rows(r, **keys):
    rec = dict(keys)
    rec.update(root=r.root, critical=r.critical, residual=r.residual, evaluations=r.evaluations,
               status=r.status.value, saturated=r.saturated, bracket=list(r.bracket),
               sign_changes=[list(s) for s in r.sign_changes])
    return rec


def _unique_root(status: str, sign_changes: int) -> bool:
    # a lone sign change brackets the only root even when the map is not monotone
    return status == "FOUND" or (status == RootStatus.NOT_MONOTONE_WARNING.value and sign_changes == 1)


def _root_status(r) -> str:
    return "FOUND" if _unique_root(r.status.value, len(r.sign_changes)) else "INCONCLUSIVE"


def cmd_solve_mu0(args):
    r = solve_mu0(args.b, args.c, args.tol)
    return [_root_rows(r, b=args.b, c=args.c)], None, [_root_status(r)], {}, [], ("mu", "I")


def cmd_solve_mustar(args):
    r = solve_mustar(args.rho, args.b, args.c, args.tol)
    return [_root_rows(r, rho=args.rho, b=args.b, c=args.c)], None, [_root_status(r)], {}, [], ("mu", "I")


def mustar_rho_grid(points: int, rho_min: float) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, points)
    grid[0] = rho_min
    return grid


def cmd_mustar_curve(args):
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    rhos = mustar_rho_grid(args.points, args.rho_min)
    pts = mustar_curve(args.b, args.c, rhos, args.tol, workers=_threads(args))
    rows = [{"rho": p.rho, "mustar": p.mustar, "residual": p.residual, "evaluations": p.evaluations,
             "status": p.status} for p in pts]
    statuses = ["FOUND" if p.status == "SATURATED" or _unique_root(p.status, p.sign_changes)
                else "INCONCLUSIVE" for p in pts]
    curve = [(f"beta={args.b - 1:g}, c={args.c:g}", [p.rho for p in pts], [p.mustar for p in pts])]
    return rows, ["rho", "mustar", "residual", "evaluations", "status"], statuses, {}, curve, ("rho", "mu*")


def _random_scheme(n: int, seed: int) -> TriangularScheme:
    rng = np.random.default_rng(seed)
    return TriangularScheme.from_ratios(list(rng.uniform(0.05, 1.0, n)))


def cmd_check_stability(args):
    grid = _boundary_grid(args)

    def job(n):
        if args.scheme == "cesaro":
            v = check_stability(Params(b=args.b, c=args.c, mu=args.mu, n=n), grid,
                                exploratory=args.exploratory)
        elif args.scheme == "identity":
            v = check_matrix_stability(TriangularScheme.identity(n), args.mu, grid)
        else:
            v = check_matrix_stability(_random_scheme(n, args.seed + n), args.mu, grid)
        return _verdict_record(v, n=n, scheme=args.scheme)

    rows = _pmap(job, _orders(args), _threads(args))
    return rows, None, [r["status"] for r in rows], {}, [], ("n", "margin")


FUNCTIONS = {
    "extremal": lambda lam: z_binomial(2 - 2 * lam),
    "identity": lambda lam: identity(),
    "koebe-half": lambda lam: z_binomial(1.0),
}


def cmd_check_ratio(args):
    grid = _boundary_grid(args)

    def job(n):
        if args.mode == "starlike":
            v = check_starlike_ratio(FUNCTIONS[args.f](args.lam), args.lam, n, args.b, args.c, grid)
        else:
            v = check_hypergeometric_stability(args.rho, args.mu, n, args.b, args.c, grid)
        return _verdict_record(v, n=n, mode=args.mode)

    rows = _pmap(job, _orders(args), _threads(args))
    return rows, None, [r["status"] for r in rows], {}, [], ("n", "margin")


def cmd_check_conjecture2(args):
    grid = _boundary_grid(args)
    if args.mu_factor is not None:
        crit = solve_mustar(args.rho, args.b, args.c).critical
        mu = args.mu_factor * crit
    elif args.mu is not None:
        mu = args.mu
    else:
        raise UsageError("give --mu or --mu-factor")

    def job(n):
        v = check_halfplane(Params(b=args.b, c=args.c, mu=mu, rho=args.rho, n=n), grid)
        return _verdict_record(v, n=n, rho=args.rho, mu=mu)

    rows = _pmap(job, _orders(args), _threads(args))
    return rows, None, [r["status"] for r in rows], {"mu": mu}, [], ("n", "margin")


def cmd_gegenbauer(args):
    xs = [float(x) for x in args.x.split(",")]
    grid = GridSpec(points=args.points, refinement=args.refinement)

    def job(item):
        n, x = item
        z = zero_free_closed_disc(gegenbauer_mean_coeffs(n, args.lam, x, args.b, args.c))
        rep = gegenbauer_cosine_positivity(args.lam, [x], n, args.b, args.c, grid)
        return [
            _verdict_record(z, n=n, x=x, check="zero-free"),
            _verdict_record(rep.verdict, n=n, x=x, check="cosine-positivity"),
        ]

    rows = [r for pair in _pmap(job, [(n, x) for n in _orders(args) for x in xs], _threads(args)) for r in pair]
    return rows, None, [r["status"] for r in rows], {}, [], ("n", "margin")


def cmd_ctc(args):
    grid = _boundary_grid(args)
    f = {"F-lambda": lambda: f_lambda(args.lam), "neg-log": neg_log, "identity": identity}[args.f]()

    def job(n):
        v = close_to_convex_check(f, args.lam, n, args.b, args.c, grid)
        rec = _verdict_record(v, n=n, f=f.name)
        rec["min_re_ratio"] = v.details.get("min_re_ratio", math.nan)
        rec["min_abs_mean_derivative"] = v.details.get("min_abs_mean_derivative", math.nan)
        return rec

    rows = _pmap(job, _orders(args), _threads(args))
    return rows, None, [r["status"] for r in rows], {}, [], ("n", "margin")


def cmd_chain(args):
    f = {"F-lambda": lambda: f_lambda(args.lam), "neg-log": neg_log}[args.f]()
    bundle = chain_explorer(f, args.b, args.c, args.k, args.n_max, args.theta, lam=args.lam)
    rows = []
    curves = []
    for label, n, pts in bundle.curves:
        curves.append((label, pts.real.tolist(), pts.imag.tolist()))
        for i, p in enumerate(pts):
            rows.append({"curve": label, "n": "" if n is None else n, "index": i, "re": p.real, "im": p.imag})
    extra = {"containment": [{"inner": a, "outer": "f" if b is None else b, "score": s}
                             for a, b, s in bundle.containment], "meta": bundle.meta}
    return rows, ["curve", "n", "index", "re", "im"], [], extra, curves, ("Re", "Im")


# --- parser ---------------------------------------------------------------------

def _common(p, *, orders=False, bc=True, boundary=False, scan=False):
    if bc:
        p.add_argument("--b", type=float, default=1.0)
        p.add_argument("--c", type=float, default=1.0)
    if orders:
        p.add_argument("--n", type=int, default=10, help="largest order")
        p.add_argument("--n-from", type=int, default=None, help="smallest order (default: --n)")
    if boundary:
        p.add_argument("--radii", type=int, default=64)
        p.add_argument("--angles", type=int, default=1024)
    if scan:
        p.add_argument("--points", type=int, default=4096)
        p.add_argument("--refinement", type=int, default=12)
    p.add_argument("--format", choices=["json", "csv", "svg"], default="json")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--svg", default=None, help="also write the SVG figure here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")
    p.add_argument("--timing", action="store_true", help="add wall time (breaks byte determinism)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cesaro-lab", description="Generalized Cesàro means laboratory")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", help="B_k, d_k and c_k tables")
    _common(p)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--exact", action="store_true", help="rational arithmetic")
    p.set_defaults(run=cmd_coeffs)

    p = sub.add_parser("scan-positivity", help="cosine / sine sum positivity")
    _common(p, orders=True, scan=True)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--mu-factor", type=float, default=None, help="mu = factor * mu0'(b, c)")
    p.add_argument("--kind", choices=["all", *SCAN_KINDS], default="all")
    p.set_defaults(run=cmd_scan)

    p = sub.add_parser("solve-mu0", help="critical exponent of the cosine integral")
    _common(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(run=cmd_solve_mu0)

    p = sub.add_parser("solve-mustar", help="critical exponent mu*(rho, b-1, c)")
    _common(p)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(run=cmd_solve_mustar)

    p = sub.add_parser("mustar-curve", help="mu* over a rho grid (CSV/SVG figure data)")
    _common(p)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--rho-min", type=float, default=1e-3, help="replaces rho = 0 in the grid")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(run=cmd_mustar_curve)

    p = sub.add_parser("check-stability", help="(1-z)^mu sigma_n(f_mu) < (1-z)^mu")
    _common(p, orders=True, boundary=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--scheme", choices=["cesaro", "identity", "random"], default="cesaro")
    p.add_argument("--exploratory", action="store_true", help="allow (b, c) outside the stable regime")
    p.set_defaults(run=cmd_check_stability)

    p = sub.add_parser("check-ratio", help="starlike and hypergeometric ratio subordinations")
    _common(p, orders=True, boundary=True)
    p.add_argument("--mode", choices=["starlike", "hypergeometric"], default="starlike")
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--f", choices=sorted(FUNCTIONS), default="extremal")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.5)
    p.set_defaults(run=cmd_check_ratio)

    p = sub.add_parser("check-conjecture2", help="Re[(1-z)^(2rho-1) sigma_n(f_mu)] > 0")
    _common(p, orders=True, boundary=True)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--mu-factor", type=float, default=None, help="mu = factor * mu*(rho, b-1, c)")
    p.set_defaults(run=cmd_check_conjecture2)

    p = sub.add_parser("gegenbauer", help="zero-freeness and cosine positivity of Gegenbauer means")
    _common(p, orders=True, scan=True)
    p.add_argument("--lam", type=float, default=0.25)
    p.add_argument("--x", default="-1,0,1", help="comma separated x values")
    p.set_defaults(run=cmd_gegenbauer)

    p = sub.add_parser("ctc", help="close-to-convexity of normalized means")
    _common(p, orders=True, boundary=True)
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--f", choices=["F-lambda", "neg-log", "identity"], default="F-lambda")
    p.set_defaults(run=cmd_ctc)

    p = sub.add_parser("chain", help="boundary curves of s_1, s_2, ... and f")
    _common(p)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--theta", type=int, default=512)
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--f", choices=["F-lambda", "neg-log"], default="neg-log")
    p.set_defaults(run=cmd_chain)
    return parser


def exit_code(statuses) -> int:
    statuses = [s.value if isinstance(s, Status) else s for s in statuses]
    if any(s == "FAILS" for s in statuses):
        return EXIT_FAILS
    if any(s not in ("HOLDS_SAMPLED", "FOUND") for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _config(args) -> dict:
    skip = {"run", "output", "svg", "threads", "timing", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        start = time.perf_counter()
        rows, cols, statuses, extra, curves, axes = args.run(args)
        code = exit_code(statuses)
        extra = dict(extra)
        extra["exit_code"] = code
        if args.timing:
            extra["timing_seconds"] = time.perf_counter() - start
        tolerances = {"eval_budget": EVAL_BUDGET, "quad_abs_tol": QUAD_ABS_TOL, "machine_eps": EPS}
        for key in ("tol",):
            if key in vars(args):
                tolerances["root_tol"] = getattr(args, key)
        report = Report(args.command, _config(args), rows, __version__, EVAL_BUDGET, tolerances,
                        curves, cols, axes, extra)
        payload = emit(report, args.format)
        if args.output == "-":
            stdout.write(payload.decode())
            stdout.flush()
        else:
            with open(args.output, "wb") as fh:
                fh.write(payload)
        if args.svg:
            with open(args.svg, "wb") as fh:
                fh.write(emit(report, "svg"))
        return code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, PreconditionError, SchemeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
