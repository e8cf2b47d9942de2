"""Singular integrals behind the critical exponents and their roots in mu.

Both integrals have the shape

    int_0^L g(t) t^(mu-1) (1 - t/L)^(b-c) dt

with g smooth.  On [0, 1] the substitution t = s^(1/mu) turns t^(mu-1) dt
into ds/mu and removes the endpoint singularity; (1, L] is regular.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .sequences import ParameterError

QUAD_ABS_TOL = 1e-12
MU_FLOOR = 1e-6
SUBSTITUTION_MU_MIN = 0.05


class Kind(enum.Enum):
    MU0_PRIME = "mu0_prime"
    MUSTAR = "mustar"


@dataclass(frozen=True)
class IntegralKind:
    tag: Kind
    rho: float | None = None

    def __post_init__(self):
        if self.tag is Kind.MUSTAR and not (self.rho is not None and 0 < self.rho <= 1):
            raise ParameterError(f"MUSTAR needs rho in (0, 1] (got {self.rho})")

    @classmethod
    def mu0_prime(cls) -> IntegralKind:
        return cls(Kind.MU0_PRIME)

    @classmethod
    def mustar(cls, rho: float) -> IntegralKind:
        return cls(Kind.MUSTAR, rho)

    @property
    def upper(self) -> float:
        if self.tag is Kind.MU0_PRIME:
            return 1.5 * math.pi
        return (self.rho + 1) * math.pi

    def oscillator(self, t):
        if self.tag is Kind.MU0_PRIME:
            return np.cos(t)
        return np.sin(t - self.rho * math.pi)


class RootStatus(str, enum.Enum):
    FOUND = "FOUND"
    NO_SIGN_CHANGE = "NO_SIGN_CHANGE"
    NOT_MONOTONE_WARNING = "NOT_MONOTONE_WARNING"


@dataclass
class RootResult:
    root: float
    bracket: tuple[float, float]
    residual: float
    evaluations: int
    status: RootStatus
    trace: list[tuple[float, float]] = field(default_factory=list, repr=False)
    sign_changes: list[tuple[float, float]] = field(default_factory=list)
    endpoint_values: tuple[float, float] | None = None
    saturated: bool = False

    @property
    def critical(self) -> float:
        """The critical exponent: the root, or 1 when the integral never
        leaves the sign it has near mu = 0 (the constraint does not bind)."""
        if self.status is not RootStatus.NO_SIGN_CHANGE:
            return self.root
        return 1.0 if self.saturated else math.nan


def _quad(fun, a, b, points=None):
    val, _err = integrate.quad(fun, a, b, epsabs=QUAD_ABS_TOL, epsrel=1e-13, limit=400,
                               points=points)
    return val


def weighted_integral(g, mu: float, exponent: float, upper: float) -> float:
    """int_0^upper g(t) t^(mu-1) (1 - t/upper)^exponent dt for mu in (0, 1]."""
    if not 0 < mu <= 1:
        raise ParameterError(f"mu must lie in (0, 1] (got {mu})")
    if exponent < 0:
        raise ParameterError("negative endpoint exponent (b < c) is out of scope")

    def weight(t):
        return g(t) * (1.0 - t / upper) ** exponent

    split = min(1.0, upper)
    if mu >= SUBSTITUTION_MU_MIN:
        inv = 1.0 / mu
        # t = s^(1/mu) on [0, split]: t^(mu-1) dt = ds/mu
        head = _quad(lambda s: weight(s ** inv), 0.0, split ** mu) / mu
    else:
        # s^(1/mu) is too steep here; subtract the t^(mu-1) pole instead
        w0 = float(weight(0.0))
        head = w0 * split ** mu / mu + _quad(lambda t: (weight(t) - w0) * t ** (mu - 1.0), 0.0, split)
    if split >= upper:
        return head
    tail = _quad(lambda t: weight(t) * t ** (mu - 1.0), split, upper)
    return head + tail


def integral_value(kind: IntegralKind, mu: float, b: float, c: float) -> float:
    if b < c:
        raise ParameterError(f"b < c is out of scope (b={b}, c={c})")
    return weighted_integral(kind.oscillator, mu, b - c, kind.upper)


def truncated_raw_integral(kind: IntegralKind, mu: float, b: float, c: float, delta: float = 1e-10) -> float:
    """Same integral without the substitution, cut off at t = delta (cross-check only)."""
    L = kind.upper

    def f(t):
        return kind.oscillator(t) * t ** (mu - 1.0) * (1.0 - t / L) ** (b - c)

    edges = np.concatenate([[delta], np.geomspace(max(delta, 1e-8), 1.0, 12)[1:], [L]])
    return sum(_quad(f, lo, hi) for lo, hi in zip(edges[:-1], edges[1:]))


def sine_kernel_integral(mu: float, exponent: float, phi: float, rho: float) -> float:
    """int_0^phi t^(mu-1) (1 - t/phi)^exponent sin(t - rho pi) dt."""
    return weighted_integral(lambda t: np.sin(t - rho * math.pi), mu, exponent, phi)


def solve_root(kind: IntegralKind, b: float, c: float, tol: float = 1e-12, *,
               lo: float = MU_FLOOR, hi: float = 1.0, prescan: int = 64,
               monotone_probes: int = 8) -> RootResult:
    """Root in mu of integral_value on (lo, hi] by safeguarded secant/bisection.

    A ``prescan``-point scan lists every sign change; the first one is refined.
    The map is only spot-checked for monotonicity.  Without a sign change the
    result is NO_SIGN_CHANGE; ``saturated`` is set when the integral keeps
    the sign of its mu -> 0 divergence on the whole range.
    """
    evals = 0

    def F(mu):
        nonlocal evals
        evals += 1
        return integral_value(kind, mu, b, c)

    f_hi = F(hi)
    f_lo = F(lo)
    grid = np.linspace(lo, hi, prescan + 1)
    values = [f_lo] + [F(m) for m in grid[1:-1]] + [f_hi]
    changes = [(float(grid[i]), float(grid[i + 1])) for i in range(prescan)
               if np.sign(values[i]) != np.sign(values[i + 1]) and values[i] != 0]
    if abs(f_hi) <= tol:
        changes = [c_ for c_ in changes if c_[1] < hi] or [(float(grid[-2]), hi)]
        return RootResult(hi, (float(grid[-2]), hi), f_hi, evals, _monotone_status(values),
                          [(hi, f_hi)], changes, (f_lo, f_hi))
    if not changes:
        saturated = bool(f_lo != 0 and all(np.sign(v) == np.sign(f_lo) for v in values))
        return RootResult(math.nan, (lo, hi), math.nan, evals, RootStatus.NO_SIGN_CHANGE,
                          [], [], (f_lo, f_hi), saturated)

    a, bb = changes[0]
    fa, fb = values[list(grid).index(a)], values[list(grid).index(bb)]
    trace = []
    x, fx = a, fa
    while True:
        # secant proposal, bisection when it leaves the middle of the bracket
        x = bb - fb * (bb - a) / (fb - fa) if fb != fa else 0.5 * (a + bb)
        width = bb - a
        if not (a + 0.05 * width < x < bb - 0.05 * width):
            x = 0.5 * (a + bb)
        fx = F(x)
        trace.append((x, fx))
        if np.sign(fx) == np.sign(fa):
            a, fa = x, fx
        else:
            bb, fb = x, fx
        if (abs(fx) <= tol and bb - a <= 1e3 * tol) or bb - a <= 1e-15 or fx == 0:
            break
        if len(trace) > 200:
            break
    root = x if abs(fx) <= min(abs(fa), abs(fb)) else (a if abs(fa) < abs(fb) else bb)
    res = fx if root == x else (fa if root == a else fb)
    status = _monotone_status(values, monotone_probes)
    return RootResult(float(root), (a, bb), float(res), evals, status, trace, changes, (f_lo, f_hi))


def _monotone_status(values, probes: int = 8) -> RootStatus:
    idx = np.linspace(0, len(values) - 1, probes + 2).round().astype(int)
    diffs = np.diff(np.asarray(values)[idx])
    if np.all(diffs > 0) or np.all(diffs < 0):
        return RootStatus.FOUND
    return RootStatus.NOT_MONOTONE_WARNING


def solve_mu0(b: float, c: float, tol: float = 1e-12) -> RootResult:
    return solve_root(IntegralKind.mu0_prime(), b, c, tol)


def solve_mustar(rho: float, b: float, c: float, tol: float = 1e-12) -> RootResult:
    return solve_root(IntegralKind.mustar(rho), b, c, tol)


@dataclass(frozen=True)
class CurvePoint:
    rho: float
    mustar: float
    residual: float
    evaluations: int
    status: str
    sign_changes: int = 0


def _curve_point(rho: float, b: float, c: float, tol: float) -> CurvePoint:
    r = solve_mustar(rho, b, c, tol)
    if r.status is RootStatus.NO_SIGN_CHANGE:
        status = "SATURATED" if r.saturated else r.status.value
        return CurvePoint(float(rho), r.critical, 0.0 if r.saturated else math.nan,
                          r.evaluations, status)
    return CurvePoint(float(rho), r.root, r.residual, r.evaluations, r.status.value, len(r.sign_changes))


def mustar_curve(b: float, c: float, rho_grid, tol: float = 1e-10, workers: int = 1) -> list[CurvePoint]:
    """mu*(rho, b-1, c) over ``rho_grid``; output order follows the grid.

    Points without a root become NaN gaps unless the integral is saturated,
    in which case mu* = 1.
    """
    rho_grid = [float(r) for r in rho_grid]
    for rho in rho_grid:
        if not 0 < rho <= 1:
            raise ParameterError(f"rho must lie in (0, 1] (got {rho})")
    if workers <= 1:
        return [_curve_point(rho, b, c, tol) for rho in rho_grid]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: _curve_point(r, b, c, tol), rho_grid))
