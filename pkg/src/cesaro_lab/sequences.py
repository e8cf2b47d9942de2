"""Pochhammer symbols, the B_k weights and the c_k coefficient tables.

Every routine has two arithmetic paths.  Passing ``Fraction`` (or ``int``)
arguments selects exact rational arithmetic, which the test-suite uses as an
oracle; passing floats selects binary64.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

EXACT_PRODUCT_MAX_K = 64


class ParameterError(ValueError):
    """Raised when a parameter tuple violates a standing hypothesis."""


class PochhammerOverflow(RuntimeWarning):
    pass


def is_exact(*values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _as_exact(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def pochhammer(x, k: int):
    """Rising factorial (x)_k = x (x+1) ... (x+k-1).

    Exact for rational ``x``.  For floats the plain product is used up to
    k = 64 and a log-gamma difference beyond; an overflow returns +inf (with
    the sign of the product) and emits :class:`PochhammerOverflow`.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if is_exact(x):
        out = Fraction(1)
        x = _as_exact(x)
        for j in range(k):
            out *= x + j
        return out
    x = float(x)
    if k <= EXACT_PRODUCT_MAX_K:
        out = 1.0
        for j in range(k):
            out *= x + j
        if math.isinf(out):
            warnings.warn(f"(x)_k overflow at x={x}, k={k}", PochhammerOverflow, stacklevel=2)
        return out
    # a nonpositive integer start makes the product vanish
    if x <= 0 and x == math.floor(x) and k > -x:
        return 0.0
    log_abs, sign = log_pochhammer(x, k)
    if log_abs > 709.0:
        warnings.warn(f"(x)_k overflow at x={x}, k={k}", PochhammerOverflow, stacklevel=2)
        return sign * math.inf
    return sign * math.exp(log_abs)


def log_pochhammer(x: float, k: int) -> tuple[float, float]:
    """Return (log|(x)_k|, sign) via log-gamma differences."""
    from scipy.special import gammasgn

    x = float(x)
    log_abs = math.lgamma(x + k) - math.lgamma(x)
    sign = float(gammasgn(x + k) * gammasgn(x))
    return log_abs, sign


def binomial_coeffs(mu, m: int):
    """(mu)_k / k! for k = 0..m, by the ratio recursion (no overflow)."""
    if is_exact(mu):
        mu = _as_exact(mu)
        out = [Fraction(1)]
        for k in range(1, m + 1):
            out.append(out[-1] * (mu + k - 1) / k)
        return np.array(out, dtype=object)
    out = np.empty(m + 1)
    out[0] = 1.0
    for k in range(1, m + 1):
        out[k] = out[k - 1] * (mu + k - 1) / k
    return out


def check_bc(b, c) -> None:
    if not (b > 0 and c > 0):
        raise ParameterError(f"need b, c > 0 (got b={b}, c={c})")
    if not b + 1 > c:
        raise ParameterError(f"need b + 1 > c (got b={b}, c={c})")


def big_b(k: int, b, c):
    """B_0 = 1 and B_k = ((b)_k/(c)_k)(1+b-c)/b for k >= 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Fraction(1) if is_exact(b, c) else 1.0
    if is_exact(b, c) or k <= EXACT_PRODUCT_MAX_K:
        return big_b_table(k, b, c)[k]
    b, c = float(b), float(c)
    log_val = (math.lgamma(b + k) - math.lgamma(b) - math.lgamma(c + k) + math.lgamma(c)
               + math.log((1 + b - c) / b))
    return math.exp(log_val)


def big_b_table(n: int, b, c):
    """B_0..B_n via B_1 = (1+b-c)/c and B_{k+1} = B_k (b+k)/(c+k) for k >= 1."""
    if is_exact(b, c):
        b, c = _as_exact(b), _as_exact(c)
        out = [Fraction(1)]
        if n >= 1:
            out.append((1 + b - c) / c)
        for k in range(1, n):
            out.append(out[-1] * (b + k) / (c + k))
        return np.array(out, dtype=object)
    b, c = float(b), float(c)
    out = np.empty(n + 1)
    out[0] = 1.0
    if n >= 1:
        ratios = (b + np.arange(1, n)) / (c + np.arange(1, n))
        out[1] = (1 + b - c) / c
        out[2:] = out[1] * np.cumprod(ratios)
    return out


def mean_weights(n: int, b, c):
    """Cesàro weights B_{n-k}/B_n for k = 0..n."""
    check_bc(b, c)
    table = big_b_table(n, b, c)
    return table[::-1] / table[n]


@dataclass(frozen=True)
class Params:
    """Parameter tuple shared by every check; ``lam`` is the order lambda."""

    b: float = 1.0
    c: float = 1.0
    mu: float = 0.5
    rho: float = 1.0
    lam: float = 0.5
    n: int = 1

    def __post_init__(self):
        check_bc(self.b, self.c)
        if not -1 <= self.mu <= 1:
            raise ParameterError(f"mu must lie in [-1, 1] (got {self.mu})")
        if not 0 < self.rho <= 1:
            raise ParameterError(f"rho must lie in (0, 1] (got {self.rho})")
        if not 0.5 <= self.lam < 1:
            raise ParameterError(f"lambda must lie in [1/2, 1) (got {self.lam})")
        if self.n < 0:
            raise ParameterError("n must be nonnegative")

    @property
    def vietoris_regime(self) -> bool:
        return vietoris_regime(self.b, self.c)

    @property
    def stable_regime(self) -> bool:
        return stable_regime(self.b, self.c)


def vietoris_regime(b, c) -> bool:
    return b >= c


def stable_regime(b, c) -> bool:
    return b >= max(c, 2 * c - 1)


@dataclass(frozen=True)
class CoefficientTable:
    n: int
    b: object
    c: object
    mu: object
    big_b: np.ndarray = field(repr=False)
    d_seq: np.ndarray = field(repr=False)
    c_seq: np.ndarray = field(repr=False)

    @property
    def exact(self) -> bool:
        return self.c_seq.dtype == object

    def as_float(self) -> np.ndarray:
        return np.asarray(self.c_seq, dtype=float)


def coeff_table(n: int, b, c, mu) -> CoefficientTable:
    """c_{2k} = c_{2k+1} = d_k = (B_{n-k}/B_n) (mu)_k/k!, k = 0..n.

    ``mu`` may be any value in [-1, 1]; negative values are needed by the
    stability theorem even though the positivity results use 0 < mu <= 1.
    """
    if n < 0:
        raise ParameterError("n must be nonnegative")
    check_bc(b, c)
    if not -1 <= mu <= 1:
        raise ParameterError(f"mu must lie in [-1, 1] (got {mu})")
    if is_exact(b, c, mu):
        b, c, mu = _as_exact(b), _as_exact(c), _as_exact(mu)
    else:
        b, c, mu = float(b), float(c), float(mu)
    table = big_b_table(n, b, c)
    d = mean_weights(n, b, c) * binomial_coeffs(mu, n)
    c_seq = np.repeat(d, 2)
    for arr in (table, d, c_seq):
        arr.setflags(write=False)
    return CoefficientTable(n=n, b=b, c=c, mu=mu, big_b=table, d_seq=d, c_seq=c_seq)


def vietoris_gamma(m: int):
    """Vietoris' gamma_0..gamma_{2m+1} as exact rationals."""
    d = binomial_coeffs(Fraction(1, 2), m)
    return np.repeat(d, 2)


def even_sine_mu_bound(b, c, *, raw: bool = False):
    """(1+b)/c - 1/2, clamped into [0, 1] unless ``raw``."""
    if not (b > 0 and c > 0):
        raise ParameterError("need b, c > 0")
    value = (1 + b) / c - Fraction(1, 2) if is_exact(b, c) else (1 + b) / c - 0.5
    if raw:
        return value
    return min(max(value, 0), 1)
