"""Truncated power series and the Cesàro-type means built on them.

Coefficient vectors are complex by default; an ``object`` array of
``Fraction`` values keeps the whole computation exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .sequences import (
    ParameterError,
    big_b_table,
    binomial_coeffs,
    check_bc,
    is_exact,
    mean_weights,
)


class TruncationError(ValueError):
    pass


class NormalizationError(ValueError):
    pass


class SchemeError(ValueError):
    """A triangular scheme violates one of its defining conditions."""


def _coerce(coeffs) -> np.ndarray:
    arr = np.asarray(coeffs)
    if arr.dtype == object:
        return np.array([c if isinstance(c, Fraction) else Fraction(c) for c in arr], dtype=object)
    return arr.astype(complex)


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """a_0 + a_1 z + ... + a_m z^m; the index of ``coeffs`` is the power of z."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _coerce(self.coeffs)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coeffs must be a nonempty vector")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def exact(cls, coeffs) -> PowerSeries:
        return cls(np.array([Fraction(c) for c in coeffs], dtype=object))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_exact(self) -> bool:
        return self.coeffs.dtype == object

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, PowerSeries) or other.degree != self.degree:
            return NotImplemented
        return bool(np.all(self.coeffs == other.coeffs))

    def __call__(self, z):
        """Horner evaluation; vectorized over ``z``."""
        coeffs = self.coeffs
        if self.is_exact:
            coeffs = coeffs.astype(complex)
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, coeffs[-1], dtype=complex)
        for a in coeffs[-2::-1]:
            out = out * z + a
        return out

    def truncate(self, m: int) -> PowerSeries:
        if m > self.degree:
            raise TruncationError(f"cannot extend a degree-{self.degree} series to {m}")
        return PowerSeries(self.coeffs[: m + 1])

    def derivative(self) -> PowerSeries:
        if self.degree == 0:
            return PowerSeries(self.coeffs[:1] * 0)
        k = np.arange(1, self.degree + 1)
        if self.is_exact:
            k = k.astype(object)
        return PowerSeries(self.coeffs[1:] * k)

    def times_z(self) -> PowerSeries:
        """z f(z); the degree grows by one."""
        zero = Fraction(0) if self.is_exact else 0j
        return PowerSeries(np.concatenate([np.array([zero], dtype=self.coeffs.dtype), self.coeffs]))

    def divide_z(self) -> PowerSeries:
        if self.coeffs[0] != 0:
            raise NormalizationError("f(0) != 0, cannot divide by z")
        return PowerSeries(self.coeffs[1:])

    def to_float(self) -> PowerSeries:
        return PowerSeries(self.coeffs.astype(complex)) if self.is_exact else self


def _zeros_like(series: PowerSeries, m: int):
    if series.is_exact:
        return np.array([Fraction(0)] * (m + 1), dtype=object)
    return np.zeros(m + 1, dtype=complex)


def hadamard(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Termwise product, truncated to the smaller degree."""
    m = min(f.degree, g.degree)
    return PowerSeries(f.coeffs[: m + 1] * g.coeffs[: m + 1])


def binomial_series(mu, m: int) -> PowerSeries:
    """Taylor polynomial of (1-z)^(-mu): coefficients (mu)_k/k!."""
    if not -1 <= mu <= 1:
        raise ParameterError(f"mu must lie in [-1, 1] (got {mu})")
    return PowerSeries(binomial_coeffs(mu, m))


def ones_series(m: int, *, exact: bool = False) -> PowerSeries:
    """1/(1-z) truncated, the identity of the Hadamard product."""
    if exact:
        return PowerSeries.exact([1] * (m + 1))
    return PowerSeries(np.ones(m + 1))


def mean_kernel(n: int, b, c) -> PowerSeries:
    """sigma_n(z) = sum_k (B_{n-k}/B_n) z^k."""
    return PowerSeries(mean_weights(n, b, c))


def cesaro_mean(f: PowerSeries, n: int, b, c) -> PowerSeries:
    """sigma_n^{(b-1,c)}(f, z) = (1/B_n) sum_{k<=n} B_{n-k} a_k z^k."""
    if f.degree < n:
        raise TruncationError(f"series of degree {f.degree} is too short for n={n}")
    check_bc(b, c)
    weights = _weights_for(f, n, b, c)
    return PowerSeries(f.coeffs[: n + 1] * weights)


def _weights_for(f: PowerSeries, n, b, c):
    if f.is_exact:
        if not is_exact(b, c):
            raise ParameterError("exact series need rational b and c")
        return mean_weights(n, b, c)
    return mean_weights(n, float(b), float(c))


def cesaro_mean_recursive(f: PowerSeries, n: int, b, c) -> PowerSeries:
    """sigma_n from sigma_{n-1} through the four-term recursion.

    sigma_n = q sigma_{n-1} + ((b-c)/B_n) sum_{k<=n-2} B_{n-k-1} a_k z^k/(c+n-k-1)
              + ((1+b-2c)/c) a_{n-1} z^{n-1}/B_n + (B_0/B_n) a_n z^n

    with q = (c+n-1)/(b+n-1) = B_{n-1}/B_n for n >= 2.  At n = 1 that ratio
    is B_0/B_1 = c/(1+b-c) instead, which is what is used there.  Built only
    as an independent check on :func:`cesaro_mean`.
    """
    if n < 1:
        raise ValueError("the recursion needs n >= 1")
    if f.degree < n:
        raise TruncationError(f"series of degree {f.degree} is too short for n={n}")
    check_bc(b, c)
    exact = f.is_exact
    if exact:
        b, c = Fraction(b), Fraction(c)
    else:
        b, c = float(b), float(c)
    big = big_b_table(n, b, c)
    a = f.coeffs
    # sigma_0 = a_0
    prev = _zeros_like(f, 0)
    prev[0] = a[0]
    for m in range(1, n + 1):
        q = (c + m - 1) / (b + m - 1) if m >= 2 else big[0] / big[1]
        cur = _zeros_like(f, m)
        cur[:m] = q * prev
        for k in range(0, m - 1):
            cur[k] += (b - c) / big[m] * big[m - k - 1] / (c + m - k - 1) * a[k]
        cur[m - 1] += (1 + b - 2 * c) / c * a[m - 1] / big[m]
        cur[m] += big[0] / big[m] * a[m]
        prev = cur
    return PowerSeries(prev)


def normalized_scale(n: int, b, c):
    """B_n/B_{n-1}; equals (b+n-1)/(c+n-1) for n >= 2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    big = big_b_table(n, b, c)
    return big[n] / big[n - 1]


def normalized_mean(f: PowerSeries, n: int, b, c) -> PowerSeries:
    """s_n^{(b-1,c)}(f, z) = sum_{k=1}^n (B_{n-k}/B_n) a_k z^k for f with f(0) = 0.

    With this weighting the derivative identity
    normalized_scale(n) * s_n(f)' = sigma_{n-1}(f') holds for every n >= 1.
    """
    if f.coeffs[0] != 0:
        raise NormalizationError("normalized means need f(0) = 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    return cesaro_mean(f, n, b, c)


def tilde_f_mu(mu, m: int) -> PowerSeries:
    """Hadamard inverse of (1-z)^(-mu): coefficients k!/(mu)_k."""
    if not 0 < mu <= 1:
        raise ParameterError(f"tilde f_mu needs mu in (0, 1] (got {mu})")
    return PowerSeries(1 / binomial_coeffs(mu, m))


def phi_rho_mu(rho, mu, m: int) -> PowerSeries:
    """z F(1, rho; mu; z) truncated at degree m: coefficient of z^{k+1} is (rho)_k/(mu)_k."""
    if not 0 < mu <= rho <= 1:
        raise ParameterError(f"need 0 < mu <= rho <= 1 (got rho={rho}, mu={mu})")
    ratio = binomial_coeffs(rho, m - 1) / binomial_coeffs(mu, m - 1)
    zero = Fraction(0) if ratio.dtype == object else 0.0
    return PowerSeries(np.concatenate([np.array([zero], dtype=ratio.dtype), ratio]))


class TriangularScheme:
    """Lower-triangular weights h_{ij}, 0 <= j <= i <= n.

    Validated on construction: h_{i0} = 1, h_{ij} = h_{i1} h_{i-1,j-1}, and
    nonincreasing nonnegative rows.  Exact rows are checked with tolerance
    0, float rows with 1e-12.
    """

    def __init__(self, rows, *, validate: bool = True):
        self.rows = [np.asarray(r) if np.asarray(r).dtype == object else np.asarray(r, dtype=float)
                     for r in rows]
        self.n = len(self.rows) - 1
        for i, row in enumerate(self.rows):
            if row.size != i + 1:
                raise SchemeError(f"row {i} must have {i + 1} entries")
        if validate:
            self.validate()

    @property
    def exact(self) -> bool:
        return all(r.dtype == object for r in self.rows)

    def validate(self):
        tol = 0 if self.exact else 1e-12
        for i, row in enumerate(self.rows):
            if abs(row[0] - 1) > tol:
                raise SchemeError(f"h[{i},0] != 1")
            if any(v < -tol for v in row):
                raise SchemeError(f"row {i} has a negative entry")
            if any(row[j + 1] - row[j] > tol for j in range(i)):
                raise SchemeError(f"row {i} is not nonincreasing")
            for j in range(1, i + 1):
                if abs(row[j] - row[1] * self.rows[i - 1][j - 1]) > tol:
                    raise SchemeError(f"h[{i},{j}] != h[{i},1] h[{i - 1},{j - 1}]")

    def h(self, i: int, j: int):
        return self.rows[i][j]

    def row_polynomial(self, i: int | None = None) -> PowerSeries:
        return PowerSeries(self.rows[self.n if i is None else i])

    @classmethod
    def from_ratios(cls, ratios, *, validate: bool = True) -> TriangularScheme:
        """Scheme generated by h_{i1} = ratios[i-1]; h_{ij} = h_{i1} h_{i-1,j-1}."""
        exact = all(isinstance(r, Fraction) for r in ratios)
        one = Fraction(1) if exact else 1.0
        rows = [np.array([one], dtype=object if exact else float)]
        for q in ratios:
            prev = rows[-1]
            row = np.concatenate([np.array([one], dtype=prev.dtype), q * prev])
            rows.append(row)
        return cls(rows, validate=validate)

    @classmethod
    def cesaro(cls, n: int, b, c, *, validate: bool = True) -> TriangularScheme:
        """g_{ik} = B_{i-k}/B_i."""
        check_bc(b, c)
        big = big_b_table(n, b, c)
        return cls.from_ratios([big[i - 1] / big[i] for i in range(1, n + 1)], validate=validate)

    @classmethod
    def identity(cls, n: int) -> TriangularScheme:
        return cls([np.ones(i + 1) for i in range(n + 1)])


def triangular_mean(H: TriangularScheme, f: PowerSeries, n: int | None = None) -> PowerSeries:
    """H_n(f, z) = sum_{k<=n} h_{nk} a_k z^k (row n, defaulting to the last row)."""
    n = H.n if n is None else n
    if f.degree < n:
        raise TruncationError(f"series of degree {f.degree} is too short for n={n}")
    row = H.rows[n]
    if f.is_exact and row.dtype != object:
        f = f.to_float()
    return PowerSeries(f.coeffs[: n + 1] * row)
