"""Sampled verdicts for subordinations of the form G < (1 - z)^p.

For 0 < |p| < 2 the map (1 - z)^p is univalent on the disc, so G < (1 - z)^p
exactly when h = 1 - G^(1/p) (principal branch) is a Schwarz function.
Every check samples |h(z)| <= |z| on a polar grid; strict real-part
claims are sampled through the normalized margin Re W / |W|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import Analytic, as_analytic, binomial
from .sequences import Params, ParameterError, binomial_coeffs, mean_weights, stable_regime
from .series import TriangularScheme, phi_rho_mu
from .trig import conj2_boundary_sum
from .verdicts import EVAL_BUDGET, Verdict, fails, holds, inconclusive

R_MAX_ANALYTIC = 1 - 1e-9


class PreconditionError(ValueError):
    """A sampled membership or hypothesis check failed."""


@dataclass(frozen=True)
class BoundaryGrid:
    """Polar sample set: ``radii`` in (0, 1) times ``angles`` offset by half a step.

    ``unit_circle`` adds |z| = 1, used only for polynomial evaluands.
    """

    radii: tuple
    angles: int
    unit_circle: bool = True

    def __post_init__(self):
        radii = tuple(sorted(float(r) for r in self.radii))
        if not radii or radii[0] <= 0 or radii[-1] > R_MAX_ANALYTIC:
            raise ValueError("radii must lie in (0, 1 - 1e-9]")
        if self.angles < 4:
            raise ValueError("need at least 4 angles")
        object.__setattr__(self, "radii", radii)

    @classmethod
    def default(cls, radii: int = 64, angles: int = 1024, r_max: float = 1 - 1e-6,
                unit_circle: bool = True) -> BoundaryGrid:
        return cls(tuple(1 - np.geomspace(0.95, 1 - r_max, radii)), angles, unit_circle)

    def refined(self) -> BoundaryGrid:
        return BoundaryGrid.default(2 * len(self.radii), 2 * self.angles, self.radii[-1], self.unit_circle)

    @property
    def thetas(self) -> np.ndarray:
        return 2 * np.pi * (np.arange(self.angles) + 0.5) / self.angles

    def points(self, *, circle: bool = False) -> np.ndarray:
        """Grid points, angle-major with radii ascending (shape angles x radii)."""
        radii = np.array(self.radii + ((1.0,) if circle and self.unit_circle else ()))
        return np.exp(1j * self.thetas)[:, None] * radii[None, :]


def _budget(degree: int) -> float:
    return EVAL_BUDGET * max(1.0, degree / 64)


def _mean_poly(coeffs: np.ndarray, n: int, b, c) -> np.ndarray:
    return coeffs[: n + 1] * mean_weights(n, float(b), float(c))


def _polyval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, coeffs[-1], dtype=complex)
    for a in coeffs[-2::-1]:
        out = out * z + a
    return out


def schwarz_verdict(G: np.ndarray, z: np.ndarray, p: float, budget: float) -> Verdict:
    """Decide G < (1 - z)^p from samples of G on the grid z (angles x radii)."""
    if not 0 < abs(p) < 2:
        return inconclusive(f"target power {p} outside (-2, 2) \\ {{0}}: (1-z)^p not univalent")
    if np.any(~np.isfinite(G)):
        return inconclusive("evaluand is not finite on the grid", samples=G.size)
    if np.min(np.abs(G)) <= budget:
        i = int(np.argmin(np.abs(G)))
        return inconclusive(f"evaluand vanishes near z = {z.flat[i]:.6g}; branch undefined",
                            samples=G.size)
    h = 1 - np.power(G.astype(complex), 1.0 / p)
    absz = np.abs(z)
    slack = absz - np.abs(h)
    ratio = np.max(np.abs(h) / absz, axis=0)
    details = {"max_h_over_z_by_radius": [float(x) for x in ratio]}
    v = nonstrict_verdict(slack, z, budget)
    v.details.update(details)
    if v.fails:
        v.witness_value = float(np.abs(h.flat[np.argmin(slack)]))
    return v


def nonstrict_verdict(slack: np.ndarray, z: np.ndarray, budget: float) -> Verdict:
    """slack >= 0 sampled: FAILS beyond 10 budgets, INCONCLUSIVE between 1 and 10."""
    i = int(np.argmin(slack))
    worst = float(slack.flat[i])
    if -worst > 10 * budget:
        return fails(worst, slack.size, z.flat[i], worst)
    if -worst > budget:
        return inconclusive("bound violated within the error band", worst, slack.size,
                            witness=complex(z.flat[i]))
    return holds(worst, slack.size)


def positive_verdict(values: np.ndarray, z: np.ndarray, budget: float) -> Verdict:
    """Strict positivity of ``values`` (already normalized) on the grid."""
    i = int(np.argmin(values))
    worst = float(values.flat[i])
    if worst < -10 * budget:
        return fails(worst, values.size, z.flat[i], worst)
    if worst <= 10 * budget:
        return inconclusive("margin within the error band", worst, values.size,
                            witness=complex(z.flat[i]))
    return holds(worst, values.size)


def _grid(grid):
    return grid if grid is not None else BoundaryGrid.default()


# --- stability -----------------------------------------------------------

def stability_form(n: int, b, c, mu: float, z) -> np.ndarray:
    """(1 - z)^mu sigma_n(f_mu, z)."""
    sigma = _polyval(_mean_poly(binomial_coeffs(float(mu), n).astype(complex), n, b, c), z)
    return np.power(1 - z, mu) * sigma


def stability_h(n: int, b, c, mu: float, z) -> np.ndarray:
    return 1 - np.power(stability_form(n, b, c, mu, z), 1.0 / mu)


def check_stability(params: Params, grid: BoundaryGrid | None = None, *,
                    exploratory: bool = False) -> Verdict:
    """(1 - z)^mu sigma_n(f_mu, z) < (1 - z)^mu, sampled."""
    n, b, c, mu = params.n, params.b, params.c, params.mu
    if not stable_regime(b, c) and not exploratory:
        raise ParameterError(f"(b, c) = ({b}, {c}) is outside b >= max(c, 2c - 1)")
    grid = _grid(grid)
    z = grid.points()
    if mu == 0:
        return holds(float(np.min(np.abs(z))), z.size, reason="f_0 = 1, h = 0")
    v = schwarz_verdict(stability_form(n, b, c, mu, z), z, mu, _budget(n))
    v.exploratory = exploratory
    return v


def ratio_form(f: Analytic, n: int, b, c, z) -> np.ndarray:
    """sigma_n(f, z) / f(z)."""
    return _polyval(_mean_poly(f.coeffs(n), n, b, c), z) / f(z)


def check_stable_wrt(f, target, n: int, b, c, grid: BoundaryGrid | None = None) -> Verdict:
    """sigma_n(f)/f < 1/F where 1/F = (1 - z)^p.

    ``target`` is the power p, or an Analytic F = (1 - z)^(-p).
    """
    f = as_analytic(f)
    if isinstance(target, Analytic):
        if target.binomial_power is None:
            return inconclusive(f"target {target.name} is not of the form (1-z)^(-p)")
        p = target.binomial_power
    else:
        p = float(target)
    z = _grid(grid).points()
    fz = f(z)
    if np.min(np.abs(fz)) <= _budget(n):
        return inconclusive("f vanishes on the sampled set")
    return schwarz_verdict(ratio_form(f, n, b, c, z), z, p, _budget(n))


def membership_points(z) -> np.ndarray:
    """Check-grid samples plus a uniform interior grid.

    The default radii crowd toward the circle; membership tests also need the
    interior, where a critical point of f can hide.
    """
    interior = np.exp(1j * 2 * np.pi * (np.arange(256) + 0.5) / 256)[:, None] * np.linspace(0.02, 0.98, 49)
    return np.concatenate([np.ravel(z), interior.ravel()])


def worst_margin(m: np.ndarray, z: np.ndarray) -> tuple[float, complex]:
    """Smallest margin and its sample; non-finite values count as -inf."""
    m = np.where(np.isfinite(m), m, -np.inf)
    i = int(np.argmin(m))
    return float(m.flat[i]), complex(z.flat[i])


def starlike_margin(F: Analytic, lam: float, z) -> tuple[float, complex]:
    """min Re(z F'/F) - lam over the samples and where it occurs."""
    with np.errstate(divide="ignore", invalid="ignore"):
        m = (z * F.derivative(z) / F(z)).real - lam
    return worst_margin(m, z)


def _require_starlike(F: Analytic, lam: float, z, budget: float):
    z = membership_points(z)
    margin, at = starlike_margin(F, lam, z)
    if margin < -budget:
        raise PreconditionError(f"{F.name} fails Re(zF'/F) > {lam} at z = {at:.6g} (margin {margin:.3g})")


def check_starlike_ratio(f, lam: float, n: int, b, c, grid: BoundaryGrid | None = None) -> Verdict:
    """z sigma_n(f/z, z)/f(z) < (1 - z)^(2 - 2 lam) for f in S*(lam)."""
    if not 0.5 <= lam < 1:
        raise ParameterError(f"lambda must lie in [1/2, 1) (got {lam})")
    f = as_analytic(f)
    z = _grid(grid).points()
    budget = _budget(n)
    _require_starlike(f, lam, z, budget)
    a = f.coeffs(n + 1)
    if abs(a[0]) > 0:
        raise ParameterError("f must vanish at 0")
    g = a[1:]  # coefficients of f/z
    ratio = z * _polyval(_mean_poly(g, n, b, c), z) / f(z)
    return schwarz_verdict(ratio, z, 2 - 2 * lam, budget)


def check_halfplane(params: Params, grid: BoundaryGrid | None = None) -> Verdict:
    """Re[(1 - z)^(2 rho - 1) sigma_n(f_mu, z)] > 0 on the disc.

    The margin is Re W/|W|.  On |z| = 1 it equals -S(phi)/|sigma_n(e^{i phi})|
    with S the boundary sine sum, which is what is sampled there.
    """
    n, b, c, mu, rho = params.n, params.b, params.c, params.mu, params.rho
    if not 0 < mu <= 1:
        raise ParameterError(f"mu must lie in (0, 1] (got {mu})")
    grid = _grid(grid)
    z = grid.points()
    coeffs = _mean_poly(binomial_coeffs(float(mu), n).astype(complex), n, b, c)
    W = np.power(1 - z, 2 * rho - 1) * _polyval(coeffs, z)
    parts = [(W.real / np.abs(W)), z]
    if grid.unit_circle:
        phi = grid.thetas
        S = conj2_boundary_sum(n, b, c, mu, rho, phi)
        sigma = np.abs(_polyval(coeffs, np.exp(1j * phi)))
        edge = -S / sigma
        margin = np.concatenate([parts[0], edge[:, None]], axis=1)
        pts = np.concatenate([z, np.exp(1j * phi)[:, None]], axis=1)
    else:
        margin, pts = parts
    return positive_verdict(margin, pts, _budget(n))


def check_product_rule(alpha: float, beta: float, grid: BoundaryGrid | None = None, *,
                       n: int | None = None, b=1.0, c=1.0, target_power: float | None = None) -> Verdict:
    """F < (1-z)^alpha and G < (1-z)^beta give FG < (1-z)^(alpha+beta).

    With ``n`` unset, F and G are the powers themselves; otherwise they are
    the stability forms (1 - z)^alpha sigma_n(f_alpha) and likewise for beta.
    ``target_power`` overrides alpha + beta (negative controls).
    """
    if alpha <= 0 or beta <= 0:
        raise ParameterError("alpha and beta must be positive")
    z = _grid(grid).points()
    if n is None:
        F, G = np.power(1 - z, alpha), np.power(1 - z, beta)
    else:
        F, G = stability_form(n, b, c, alpha, z), stability_form(n, b, c, beta, z)
    p = alpha + beta if target_power is None else target_power
    return schwarz_verdict(F * G, z, p, _budget(n or 0))


def hadamard_phi(f: Analytic, rho: float, mu: float, z, m: int = 4096) -> np.ndarray:
    """(phi_{rho,mu} * f)(z) for f in A_0, where phi = sum (rho)_k/(mu)_k z^k.

    Closed form when f = (1 - t z)^(-mu); otherwise a degree-m truncation.
    """
    if f.binomial_power is not None and math.isclose(f.binomial_power, mu):
        return np.power(1 - z, -rho)
    coeffs = phi_rho_mu(rho, mu, m + 1).coeffs[1:] * f.coeffs(m)
    return _polyval(coeffs, z)


def check_hypergeometric_stability(rho: float, mu: float, n: int, b, c,
                                   grid: BoundaryGrid | None = None, f: Analytic | None = None) -> Verdict:
    """sigma_n(f)/(phi_{rho,mu} * f) < (1 - z)^rho, f in A_0 with z f in S*(1 - mu/2)."""
    if not 0 < mu <= rho <= 1:
        raise ParameterError(f"need 0 < mu <= rho <= 1 (got rho={rho}, mu={mu})")
    if not stable_regime(b, c):
        raise ParameterError(f"(b, c) = ({b}, {c}) is outside b >= max(c, 2c - 1)")
    f = f or binomial(mu)
    grid = _grid(grid)
    z = grid.points()
    budget = _budget(n)
    _require_starlike(f.times_z(), 1 - mu / 2, z, budget)
    if f.binomial_power is None or not math.isclose(f.binomial_power, mu):
        z = z[:, np.array(grid.radii) <= 0.99]
    ratio = _polyval(_mean_poly(f.coeffs(n), n, b, c), z) / hadamard_phi(f, rho, mu, z)
    return schwarz_verdict(ratio, z, rho, budget)


def check_matrix_stability(H: TriangularScheme, mu: float, grid: BoundaryGrid | None = None) -> Verdict:
    """(1 - z)^mu H_n(f_mu, z) < (1 - z)^mu for a valid scheme with h_{n1} <= 1."""
    if not -1 <= mu <= 1:
        raise ParameterError(f"mu must lie in [-1, 1] (got {mu})")
    if H.n >= 1 and H.h(H.n, 1) > 1:
        raise PreconditionError(f"h[n,1] = {float(H.h(H.n, 1))} > 1")
    z = _grid(grid).points()
    if mu == 0:
        return holds(float(np.min(np.abs(z))), z.size, reason="f_0 = 1, h = 0")
    row = np.asarray(H.rows[H.n], dtype=float)
    poly = binomial_coeffs(float(mu), H.n) * row
    G = np.power(1 - z, mu) * _polyval(poly.astype(complex), z)
    return schwarz_verdict(G, z, mu, _budget(H.n))


def check_argument_bound(f, lam: float, weights, n_list, b, c,
                         grid: BoundaryGrid | None = None) -> Verdict:
    """|arg sum_k w_k sigma_k(f, z)| <= 2 pi (1 - lam) on the closed disc, f in A_0.

    Also runs the winding-number zero test on the combination (a polynomial);
    its verdict is stored under details["zero_free"].
    """
    from .geometry import zero_free_closed_disc

    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) != len(n_list) or np.any(w < 0) or not math.isclose(w.sum(), 1.0, abs_tol=1e-12):
        raise ParameterError("weights must be nonnegative, sum to 1 and match n_list")
    f = as_analytic(f)
    grid = _grid(grid)
    z = grid.points(circle=True)
    top = max(n_list)
    budget = _budget(top)
    _require_starlike(f.times_z(), lam, grid.points(), budget)
    a = f.coeffs(top)
    combo = np.zeros(top + 1, dtype=complex)
    for wk, nk in zip(w, n_list):
        combo[: nk + 1] += wk * _mean_poly(a, nk, b, c)
    values = _polyval(combo, z)
    zero = zero_free_closed_disc(combo)
    slack = 2 * math.pi * (1 - lam) - np.abs(np.angle(values))
    v = nonstrict_verdict(slack, z, budget)
    v.details["zero_free"] = zero.to_dict()
    v.details["min_abs"] = float(np.min(np.abs(values)))
    v.details["min_real"] = float(np.min(values.real))
    return v
