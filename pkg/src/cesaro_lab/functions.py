"""Closed-form analytic test functions with their Taylor coefficients.

Subordination checks evaluate f near the unit circle, where a truncated
series is useless, so each test function carries f, f', f'' in closed
form next to a coefficient generator used for the Cesàro means.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sequences import binomial_coeffs
from .series import PowerSeries


@dataclass(frozen=True)
class Analytic:
    name: str
    coeff_fn: Callable[[int], np.ndarray]
    f: Callable
    d1: Callable
    d2: Callable
    polynomial: bool = False
    binomial_power: float | None = None  # f = (1 - z)^(-power) exactly

    def coeffs(self, m: int) -> np.ndarray:
        return np.asarray(self.coeff_fn(m), dtype=complex)

    def series(self, m: int) -> PowerSeries:
        return PowerSeries(self.coeffs(m))

    def __call__(self, z):
        return self.f(np.asarray(z, dtype=complex))

    def derivative(self, z):
        return self.d1(np.asarray(z, dtype=complex))

    def second_derivative(self, z):
        return self.d2(np.asarray(z, dtype=complex))

    def times_z(self) -> Analytic:
        f, d1, d2 = self.f, self.d1, self.d2
        return Analytic(
            f"z*{self.name}",
            lambda m: np.concatenate([[0.0], self.coeffs(m - 1)]) if m >= 1 else np.zeros(1),
            lambda z: z * f(z),
            lambda z: f(z) + z * d1(z),
            lambda z: 2 * d1(z) + z * d2(z),
            polynomial=self.polynomial,
        )

    def dilate(self, t: float) -> Analytic:
        """z -> f(t z); keeps f(0) and is analytic on a larger disc for t < 1."""
        if not 0 < t <= 1:
            raise ValueError("dilation factor must lie in (0, 1]")
        f, d1, d2 = self.f, self.d1, self.d2
        return Analytic(
            f"{self.name}(t={t:g})",
            lambda m: self.coeffs(m) * t ** np.arange(m + 1),
            lambda z: f(t * z),
            lambda z: t * d1(t * z),
            lambda z: t * t * d2(t * z),
            polynomial=self.polynomial,
            binomial_power=self.binomial_power if t == 1 else None,
        )


def binomial(mu: float) -> Analytic:
    """f_mu(z) = (1 - z)^(-mu)."""
    mu = float(mu)
    return Analytic(
        f"f_{mu:g}",
        lambda m: binomial_coeffs(mu, m),
        lambda z: (1 - z) ** (-mu),
        lambda z: mu * (1 - z) ** (-mu - 1),
        lambda z: mu * (mu + 1) * (1 - z) ** (-mu - 2),
        binomial_power=mu,
    )


def z_binomial(a: float) -> Analytic:
    """z (1 - z)^(-a); starlike of order 1 - a/2."""
    return binomial(a).times_z()


def neg_log() -> Analytic:
    """-log(1 - z), convex of order 1/2."""

    def coeffs(m):
        out = np.zeros(m + 1)
        out[1:] = 1.0 / np.arange(1, m + 1)
        return out

    return Analytic(
        "-log(1-z)",
        coeffs,
        lambda z: -np.log(1 - z),
        lambda z: 1 / (1 - z),
        lambda z: 1 / (1 - z) ** 2,
    )


def polynomial(p) -> Analytic:
    p = p if isinstance(p, PowerSeries) else PowerSeries(p)
    dp = p.derivative()
    d2p = dp.derivative()

    def coeffs(m):
        out = np.zeros(m + 1, dtype=complex)
        k = min(m, p.degree)
        out[: k + 1] = p.to_float().coeffs[: k + 1]
        return out

    return Analytic("polynomial", coeffs, p, dp, d2p, polynomial=True)


def identity() -> Analytic:
    return polynomial([0, 1])


def as_analytic(f) -> Analytic:
    if isinstance(f, Analytic):
        return f
    return polynomial(f)


def f_lambda(lam: float) -> Analytic:
    """F_lam with F_lam(0) = 0 and F_lam' = (1 - z)^(2 lam - 2); convex of order lam."""
    a = 2 - 2 * float(lam)
    if abs(a - 1) < 1e-15:
        return neg_log()

    def coeffs(m):
        out = np.zeros(m + 1)
        if m >= 1:
            out[1:] = binomial_coeffs(a, m - 1) / np.arange(1, m + 1)
        return out

    return Analytic(
        f"F_{lam:g}",
        coeffs,
        lambda z: ((1 - z) ** (1 - a) - 1) / (a - 1),
        lambda z: (1 - z) ** (-a),
        lambda z: a * (1 - z) ** (-a - 1),
    )
