"""Sine and cosine sums with the c_k coefficients, and certified positivity scans.

A scan splits (lo, hi) into two endpoint neighbourhoods and a closed middle
interval.  Near an endpoint where the sum vanishes, positivity follows from
the first non-vanishing derivative there plus the Taylor remainder bound
M_{m+1} = sum k^{m+1} |c_k|.  The middle interval is covered by cells; a
cell with centre t and half width r is certified once

    f(t) - L r > 0                   (L = sum k |c_k|), or
    f(t) - |f'(t)| r - M_2 r^2/2 > 0,

otherwise it is bisected, up to ``refinement`` levels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sequences import CoefficientTable, binomial_coeffs, coeff_table, mean_weights
from .verdicts import Status, Verdict, fails, holds, inconclusive

EPS = np.finfo(float).eps
MAX_ENDPOINT_ORDER = 5


class ConsistencyError(AssertionError):
    """Two evaluation routes of the same quantity disagree."""


@dataclass(frozen=True)
class GridSpec:
    lo: float = 0.0
    hi: float = math.pi
    points: int = 4096
    refinement: int = 12
    max_cells: int = 1 << 17  # per refinement level

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.points < 16:
            raise ValueError("need at least 16 grid points")


@dataclass
class ScanReport:
    verdict: Verdict
    min_value: float
    argmin: float
    certified: bool
    lipschitz_bound: float
    cells: int = 0
    endpoint_widths: tuple[float, float] = (0.0, 0.0)
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict.status is Status.HOLDS_SAMPLED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.to_dict(),
            "min_value": self.min_value,
            "argmin": self.argmin,
            "certified": self.certified,
            "lipschitz_bound": self.lipschitz_bound,
            "cells": self.cells,
        }


def _coefficients(source, kind: str, upper: int | None) -> np.ndarray:
    if isinstance(source, CoefficientTable):
        coeffs = source.as_float()
    else:
        coeffs = np.asarray(source, dtype=float)
    if upper is not None:
        if upper > coeffs.size - 1:
            raise ValueError(f"upper index {upper} exceeds table length {coeffs.size - 1}")
        coeffs = coeffs[: upper + 1]
    if kind == "sine":
        coeffs = coeffs.copy()
        coeffs[0] = 0.0
    elif kind != "cosine":
        raise ValueError(f"kind must be 'cosine' or 'sine' (got {kind!r})")
    return coeffs


def trig_sum(source, kind: str, upper: int | None, theta: float) -> float:
    """sum_{k<=upper} c_k cos(k theta), or sum_{1<=k<=upper} c_k sin(k theta); compensated."""
    coeffs = _coefficients(source, kind, upper)
    fn = math.cos if kind == "cosine" else math.sin
    return math.fsum(float(c) * fn(k * theta) for k, c in enumerate(coeffs))


def trig_values(coeffs: np.ndarray, kind: str, theta, deriv: int = 0) -> np.ndarray:
    """j-th derivative of the sum at each theta (vectorized)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    k = np.arange(coeffs.size, dtype=float)
    phase = deriv * math.pi / 2
    args = np.outer(theta, k) + phase
    basis = np.cos(args) if kind == "cosine" else np.sin(args)
    return basis @ (coeffs * k ** deriv)


def _moments(coeffs: np.ndarray, top: int) -> np.ndarray:
    k = np.arange(coeffs.size, dtype=float)
    return np.array([np.sum(k ** j * np.abs(coeffs)) for j in range(top + 1)])


def _eval_error(moments: np.ndarray, j: int, span: float) -> float:
    # rounding in the dot product plus the argument error of cos(k theta)
    nxt = moments[j + 1] if j + 1 < moments.size else moments[j] * moments.size
    return 16 * EPS * (moments[j] + span * nxt)


def _endpoint_width(coeffs, kind, e, sign, moments, span, cap):
    """Width of a certified neighbourhood of endpoint e, or a reason it fails."""
    for m in range(MAX_ENDPOINT_ORDER):
        val = float(trig_values(coeffs, kind, e, m)[0]) * sign ** m
        if abs(val) > 10 * _eval_error(moments, m, span):
            if val < 0:
                return None, f"derivative of order {m} at {e:.17g} points inward negative"
            if moments[m + 1] == 0:
                return cap, m
            width = 0.5 * (m + 1) * val / moments[m + 1]
            return min(width, cap), m
    return None, f"sum vanishes to order {MAX_ENDPOINT_ORDER} at {e:.17g}"


def positivity_scan(source, kind: str, upper: int | None = None, grid: GridSpec | None = None,
                    *, exploratory: bool = False) -> ScanReport:
    """Certify sum > 0 on the open interval (grid.lo, grid.hi)."""
    grid = grid or GridSpec()
    coeffs = _coefficients(source, kind, upper)
    moments = _moments(coeffs, MAX_ENDPOINT_ORDER + 1)
    L = float(moments[1])
    span = max(abs(grid.lo), abs(grid.hi))
    err0 = _eval_error(moments, 0, span)
    err1 = _eval_error(moments, 1, span)
    cap = (grid.hi - grid.lo) / 4

    w_lo, info_lo = _endpoint_width(coeffs, kind, grid.lo, +1, moments, span, cap)
    w_hi, info_hi = _endpoint_width(coeffs, kind, grid.hi, -1, moments, span, cap)

    a = grid.lo + (w_lo or 0.0)
    b = grid.hi - (w_hi or 0.0)
    h = (b - a) / grid.points
    centers = a + h * (np.arange(grid.points) + 0.5)
    radii = np.full(grid.points, h / 2)
    seen_t, seen_v = [], []
    cells = 0
    uncertified = []
    witness = None

    for depth in range(grid.refinement + 1):
        if centers.size == 0:
            break
        v = trig_values(coeffs, kind, centers)
        seen_t.append(centers)
        seen_v.append(v)
        cells += centers.size
        neg = v < -10 * err0
        if np.any(neg):
            i = int(np.argmin(np.where(neg, v, np.inf)))
            witness = (float(centers[i]), float(v[i]))
            break
        ok = v - L * radii > err0
        pending = ~ok
        if np.any(pending):
            d1 = trig_values(coeffs, kind, centers[pending], 1)
            lower = v[pending] - (np.abs(d1) + err1) * radii[pending] - moments[2] * radii[pending] ** 2 / 2
            ok_second = lower > err0
            idx = np.flatnonzero(pending)
            ok[idx[ok_second]] = True
        left = ~ok
        if not np.any(left):
            centers = centers[:0]
            break
        if depth == grid.refinement or 2 * np.count_nonzero(left) > grid.max_cells:
            uncertified = centers[left]
            break
        c_left, r_left = centers[left], radii[left] / 2
        centers = np.concatenate([c_left - r_left, c_left + r_left])
        radii = np.concatenate([r_left, r_left])
        order = np.argsort(centers, kind="stable")
        centers, radii = centers[order], radii[order]

    all_t = np.concatenate(seen_t) if seen_t else np.array([0.5 * (grid.lo + grid.hi)])
    all_v = np.concatenate(seen_v) if seen_v else trig_values(coeffs, kind, all_t)
    order = np.argsort(all_t, kind="stable")
    all_t, all_v = all_t[order], all_v[order]
    i_min = int(np.argmin(all_v))
    min_value, argmin = float(all_v[i_min]), float(all_t[i_min])

    details = {"endpoint_orders": [info_lo if w_lo is not None else None,
                                   info_hi if w_hi is not None else None]}
    widths = (w_lo or 0.0, w_hi or 0.0)

    def report(verdict, certified):
        verdict.exploratory = exploratory
        return ScanReport(verdict, min_value, argmin, certified, L, cells, widths, details)

    if witness is not None:
        return report(fails(witness[1], cells, witness[0], witness[1]), False)
    for e, sign, w, info in ((grid.lo, 1, w_lo, info_lo), (grid.hi, -1, w_hi, info_hi)):
        if w is None:
            # look for an actual sign change right next to the endpoint
            probe = e + sign * np.geomspace(1e-2, 1e-8, 25) * (grid.hi - grid.lo)
            pv = trig_values(coeffs, kind, probe)
            if np.any(pv < -10 * err0):
                j = int(np.argmin(pv))
                return report(fails(float(pv[j]), cells, float(probe[j]), float(pv[j])), False)
            return report(inconclusive(info, min_value, cells), False)
    if len(uncertified):
        t0 = float(uncertified[0])
        return report(inconclusive(f"cell at {t0:.17g} not certified after {depth} refinements",
                                   min_value, cells), False)
    return report(holds(min_value, cells), True)


def parity_identity_residual(table: CoefficientTable, phi: float) -> float:
    """sin(phi/2) sum c_k cos(k phi) - cos(phi/2) sum c_k sin(k(pi - phi)); zero when c_{2k} = c_{2k+1}."""
    upper = 2 * table.n + 1
    lhs = math.sin(phi / 2) * trig_sum(table, "cosine", upper, phi)
    rhs = math.cos(phi / 2) * trig_sum(table, "sine", upper, math.pi - phi)
    return lhs - rhs


def re_pn(table: CoefficientTable, phi: float, *, rtol: float = 1e-12) -> float:
    """Re[(1 - e^{2i phi}) (sum_k d_k e^{2ik phi})^2].

    Evaluated directly and through the factorization
    (sum c_k e^{ik phi})(sum (-1)^k c_k e^{ik phi}); disagreement raises
    :class:`ConsistencyError`.
    """
    d = np.asarray(table.d_seq, dtype=float)
    c = table.as_float()
    w = np.exp(2j * phi * np.arange(d.size))
    direct = (1 - np.exp(2j * phi)) * np.sum(d * w) ** 2
    k = np.arange(c.size)
    e = np.exp(1j * phi * k)
    factored = np.sum(c * e) * np.sum((-1.0) ** k * c * e)
    scale = np.sum(np.abs(c)) ** 2
    if abs(direct - factored) > rtol * max(1.0, scale):
        raise ConsistencyError(f"Re P_n routes disagree at phi={phi}: {direct} vs {factored}")
    return float(direct.real)


def _d_coeffs(n, b, c, mu) -> np.ndarray:
    return mean_weights(n, float(b), float(c)) * binomial_coeffs(float(mu), n)


def conj2_boundary_sum(n: int, b, c, mu, rho, phi) -> np.ndarray | float:
    """sum_k (B_{n-k}/B_n)((mu)_k/k!) sin((k + rho - 1/2) phi - rho pi); vectorized over phi."""
    d = _d_coeffs(n, b, c, mu)
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=float))
    k = np.arange(n + 1, dtype=float)
    vals = np.sin(np.outer(phi_arr, k + rho - 0.5) - rho * math.pi) @ d
    return float(vals[0]) if np.ndim(phi) == 0 else vals


def halfplane_boundary_value(n: int, b, c, mu, rho, phi) -> np.ndarray | float:
    """Re[(1 - z)^{2 rho - 1} sigma_n(f_mu, z)] at z = e^{i phi}, by complex arithmetic."""
    d = _d_coeffs(n, b, c, mu)
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=float))
    z = np.exp(1j * phi_arr)
    sigma = np.polynomial.polynomial.polyval(z, d)
    vals = ((1 - z) ** (2 * rho - 1) * sigma).real
    return float(vals[0]) if np.ndim(phi) == 0 else vals


@dataclass(frozen=True)
class AsymptoticRatio:
    ratio: float
    scaled_sum: float
    limit: float
    inconclusive: bool


def asymptotic_ratio(n: int, b, c, mu, rho, phi, *, limit: float | None = None) -> AsymptoticRatio:
    """(phi/n)^mu sum_k d_k sin((k+rho-1/2) phi/n - rho pi) divided by its n -> infinity limit

        (1/Gamma(mu)) int_0^phi t^(mu-1) (1 - t/phi)^(b-c) sin(t - rho pi) dt.
    """
    from .quadrature import sine_kernel_integral

    if not 0 < mu < 1:
        raise ValueError("mu must lie in (0, 1)")
    scaled = (phi / n) ** mu * conj2_boundary_sum(n, b, c, mu, rho, phi / n)
    if limit is None:
        limit = sine_kernel_integral(mu, float(b) - float(c), phi, rho) / math.gamma(mu)
    if abs(limit) < 1e-12:
        return AsymptoticRatio(math.nan, scaled, limit, True)
    return AsymptoticRatio(scaled / limit, scaled, limit, False)


def table_for(n: int, b, c, mu) -> CoefficientTable:
    return coeff_table(n, b, c, mu)
