"""Gegenbauer sums, zero-freeness in the closed disc, close-to-convexity and
the boundary curves of successive normalized means."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .functions import Analytic, as_analytic
from .sequences import ParameterError, big_b_table, mean_weights, stable_regime
from .subordination import BoundaryGrid, PreconditionError, membership_points, schwarz_verdict, worst_margin
from .trig import GridSpec, ScanReport, positivity_scan
from .verdicts import EVAL_BUDGET, Verdict, fails, holds, inconclusive

MIN_ARC = 1e-13


@dataclass(frozen=True)
class GegenbauerParams:
    lam: float
    x: float
    degree: int

    def __post_init__(self):
        if not -1 <= self.x <= 1:
            raise ParameterError(f"x must lie in [-1, 1] (got {self.x})")
        if self.degree < 0:
            raise ParameterError("degree must be nonnegative")

    @property
    def exploratory(self) -> bool:
        return not 0 < self.lam < 0.5


def gegenbauer_table(n: int, lam: float, x: float) -> np.ndarray:
    """C_0^lam(x), ..., C_n^lam(x) by k C_k = 2x(k+lam-1) C_{k-1} - (k+2lam-2) C_{k-2}."""
    out = np.empty(n + 1)
    out[0] = 1.0
    if n >= 1:
        out[1] = 2 * lam * x
    for k in range(2, n + 1):
        out[k] = (2 * x * (k + lam - 1) * out[k - 1] - (k + 2 * lam - 2) * out[k - 2]) / k
    return out


def gegenbauer(k: int, lam: float, x: float) -> float:
    return float(gegenbauer_table(k, lam, x)[k])


def gegenbauer_mean_coeffs(n: int, lam: float, x: float, b, c) -> np.ndarray:
    """(B_{n-k}/B_n) C_k^lam(x), k = 0..n."""
    return mean_weights(n, float(b), float(c)) * gegenbauer_table(n, lam, x)


# --- zero-freeness ---------------------------------------------------------

def _trim(coeffs) -> np.ndarray:
    a = np.asarray(getattr(coeffs, "coeffs", coeffs)).astype(complex)
    nz = np.flatnonzero(a)
    if nz.size == 0:
        raise ValueError("the zero polynomial has no winding number")
    return a[: nz[-1] + 1]


def winding_number(coeffs, *, initial: int | None = None, max_segments: int = 2_000_000):
    """Winding number of P(e^{i t}), t in [0, 2 pi], about 0.

    Each arc of length h is accepted once L h < max(|P_a|, |P_b|) with
    L = sum k |a_k|: the image of the arc then stays in a disc around one
    endpoint that excludes 0, so the principal increment is exact (and
    below pi/2).  Returns (winding, min |P| seen, unresolved arc or None).
    """
    a = _trim(coeffs)
    deg = a.size - 1
    L = float(np.sum(np.arange(a.size) * np.abs(a)))
    npts = initial or max(64, 8 * deg)
    t = np.linspace(0.0, 2 * np.pi, npts + 1)
    P = np.polynomial.polynomial.polyval(np.exp(1j * t), a)
    ta, tb, Pa, Pb = t[:-1], t[1:], P[:-1], P[1:]
    total = 0.0
    min_abs = float(np.min(np.abs(P)))
    count = 0
    while ta.size:
        h = tb - ta
        inc = np.angle(Pb / np.where(Pa == 0, 1, Pa))
        ok = (L * h < np.maximum(np.abs(Pa), np.abs(Pb))) & (np.abs(inc) < np.pi / 2)
        total += math.fsum(inc[ok])
        bad = ~ok
        if not np.any(bad):
            break
        ta, tb, Pa, Pb, h = ta[bad], tb[bad], Pa[bad], Pb[bad], h[bad]
        count += ta.size
        if np.min(h) < MIN_ARC or count > max_segments:
            i = int(np.argmin(np.minimum(np.abs(Pa), np.abs(Pb))))
            return None, min_abs, (float(ta[i]), float(tb[i]))
        tm = 0.5 * (ta + tb)
        Pm = np.polynomial.polynomial.polyval(np.exp(1j * tm), a)
        min_abs = min(min_abs, float(np.min(np.abs(Pm))))
        ta, tb = np.concatenate([ta, tm]), np.concatenate([tm, tb])
        Pa, Pb = np.concatenate([Pa, Pm]), np.concatenate([Pm, Pb])
    return int(round(total / (2 * np.pi))), min_abs, None


def zero_free_closed_disc(P) -> Verdict:
    """Verdict on P(z) != 0 for |z| <= 1 by the argument principle."""
    a = _trim(P)
    budget = EVAL_BUDGET * max(1.0, float(np.sum(np.abs(a))))
    if a.size == 1:
        return holds(float(abs(a[0])), 1, details={"zeros_inside": 0})
    w, min_abs, arc = winding_number(a)
    if w is None:
        return inconclusive(f"zero on or near the unit circle around t in [{arc[0]:.6g}, {arc[1]:.6g}]",
                            min_abs, details={"min_abs": min_abs})
    details = {"zeros_inside": w, "min_abs": min_abs}
    if w != 0:
        return fails(-float(w), a.size, 0j, float(w), details=details,
                     reason=f"{w} zero(s) inside the unit disc")
    if min_abs <= budget:
        return inconclusive("near-boundary zero", min_abs, details=details)
    return holds(min_abs, a.size, details=details)


def kakeya_deltas(weights, n_list, b, c):
    """Coefficients of sum_j w_j sigma_{n_j}(1/(1-z)), k = 0..max n_j."""
    top = max(n_list)
    out = [0 * weights[0]] * (top + 1)
    for w, n in zip(weights, n_list):
        big = big_b_table(n, b, c)
        for k in range(n + 1):
            out[k] = out[k] + w * big[n - k] / big[n]
    return out


# --- Gegenbauer positivity ---------------------------------------------------

def gegenbauer_cosine_positivity(lam: float, x_grid, n: int, b, c,
                                 grid: GridSpec | None = None) -> ScanReport:
    """sum_k (B_{n-k}/B_n) C_k^lam(x) cos k theta > 0 on (0, pi) for each x.

    Returns the report of the worst x (FAILS over INCONCLUSIVE over HOLDS,
    then smallest minimum).  lam outside (0, 1/4] is flagged exploratory.
    """
    exploratory = not 0 < lam <= 0.25 or b < c
    rank = {"FAILS": 0, "INCONCLUSIVE": 1, "HOLDS_SAMPLED": 2}
    worst = None
    for x in x_grid:
        rep = positivity_scan(gegenbauer_mean_coeffs(n, lam, float(x), b, c), "cosine", None, grid,
                              exploratory=exploratory)
        rep.details["x"] = float(x)
        key = (rank[rep.verdict.status.value], rep.min_value)
        if worst is None or key < worst[0]:
            worst = (key, rep)
    return worst[1]


# --- close-to-convexity --------------------------------------------------------

def convex_margin(f: Analytic, lam: float, z) -> tuple[float, complex]:
    """min Re(1 + z f''/f') - lam over the samples."""
    with np.errstate(divide="ignore", invalid="ignore"):
        m = (1 + z * f.second_derivative(z) / f.derivative(z)).real - lam
    return worst_margin(m, z)


def normalized_mean_derivative(f: Analytic, n: int, b, c, z) -> np.ndarray:
    """(B_n/B_{n-1}) s_n(f)'(z)."""
    a = f.coeffs(n)
    big = big_b_table(n, float(b), float(c))
    k = np.arange(1, n + 1)
    d = k * a[1:] * big[n - k] / big[n - 1]
    return np.polynomial.polynomial.polyval(z, d)


def close_to_convex_check(f, lam: float, n: int, b, c, grid: BoundaryGrid | None = None) -> Verdict:
    """(B_n/B_{n-1}) s_n(f)'/f' < (1 - z)^(2 - 2 lam) for f in C(lam)."""
    if not 0.5 <= lam < 1:
        raise ParameterError(f"lambda must lie in [1/2, 1) (got {lam})")
    if not stable_regime(b, c):
        raise ParameterError(f"(b, c) = ({b}, {c}) is outside b >= max(c, 2c - 1)")
    if n < 1:
        raise ParameterError("n must be >= 1")
    f = as_analytic(f)
    grid = grid or BoundaryGrid.default()
    z = grid.points()
    budget = EVAL_BUDGET * max(1.0, n / 64)
    margin, at = convex_margin(f, lam, membership_points(z))
    if margin < -budget:
        raise PreconditionError(f"{f.name} fails Re(1 + z f''/f') > {lam} at z = {at:.6g}")
    dmean = normalized_mean_derivative(f, n, b, c, z)
    ratio = dmean / f.derivative(z)
    v = schwarz_verdict(ratio, z, 2 - 2 * lam, budget)
    v.details["min_re_ratio"] = float(np.min(ratio.real))
    v.details["min_abs_mean_derivative"] = float(np.min(np.abs(dmean)))
    return v


# --- subordination chain ---------------------------------------------------------

@dataclass
class CurveBundle:
    curves: list  # (label, n or None, complex polyline)
    meta: dict = field(default_factory=dict)
    containment: list = field(default_factory=list)  # (n, n + 1, score)


def inside_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd rule; ``polygon`` is a closed complex polyline."""
    x, y = points.real[:, None], points.imag[:, None]
    xa, ya = polygon.real[None, :-1], polygon.imag[None, :-1]
    xb, yb = polygon.real[None, 1:], polygon.imag[None, 1:]
    crosses = (ya > y) != (yb > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = xa + (y - ya) * (xb - xa) / (yb - ya)
    hit = crosses & (x < xint)
    return (np.count_nonzero(hit, axis=1) % 2) == 1


def chain_explorer(f, b, c, k: int, n_max: int, theta_samples: int = 512, *,
                   lam: float = 0.5, f_radius: float = 1 - 1e-3) -> CurveBundle:
    """Boundary images of s_n^{(b-1+k, c)}(f) for n = 1..n_max, then f itself.

    f is drawn on |z| = f_radius since it need not extend to the circle.
    Containment of curve n in curve n + 1 is a vertex fraction, not a verdict.
    """
    f = as_analytic(f)
    check_grid = BoundaryGrid.default(16, 256, unit_circle=False)
    margin, at = convex_margin(f, lam, membership_points(check_grid.points()))
    if margin < -EVAL_BUDGET:
        raise PreconditionError(f"{f.name} fails Re(1 + z f''/f') > {lam} at z = {at:.6g}")
    theta = 2 * np.pi * np.arange(theta_samples + 1) / theta_samples
    circle = np.exp(1j * theta)
    circle[-1] = circle[0]
    bb = float(b) + k
    a = f.coeffs(n_max)
    curves = []
    for n in range(1, n_max + 1):
        w = mean_weights(n, bb, float(c))
        pts = np.polynomial.polynomial.polyval(circle, a[: n + 1] * w)
        pts[-1] = pts[0]
        curves.append((f"s_{n}", n, pts))
    fz = f(f_radius * circle)
    fz[-1] = fz[0]
    curves.append(("f", None, fz))
    scores = []
    for (_, n1, p1), (_, n2, p2) in zip(curves[:-1], curves[1:]):
        score = float(np.mean(inside_polygon(p1[:-1], p2)))
        scores.append((n1, n2, score))
    meta = {"f": f.name, "b": float(b), "c": float(c), "k": k, "n_max": n_max,
            "theta_samples": theta_samples, "f_radius": f_radius}
    return CurveBundle(curves, meta, scores)
