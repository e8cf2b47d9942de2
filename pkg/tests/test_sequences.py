import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cesaro_lab.sequences import (
    Params,
    ParameterError,
    PochhammerOverflow,
    big_b,
    big_b_table,
    binomial_coeffs,
    coeff_table,
    even_sine_mu_bound,
    pochhammer,
    stable_regime,
    vietoris_gamma,
    vietoris_regime,
)


def test_pochhammer_examples():
    assert pochhammer(0.7, 0) == 1
    assert pochhammer(0.5, 2) == pytest.approx(0.75, rel=1e-15)
    assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)
    for k in range(12):
        assert pochhammer(1, k) == math.factorial(k)


def test_pochhammer_log_gamma_path_matches_product():
    # k > 64 switches to lgamma; compare with a float product done by hand
    x, k = 0.37, 90
    prod = 1.0
    for j in range(k):
        prod *= x + j
    assert pochhammer(x, k) == pytest.approx(prod, rel=1e-12)


def test_pochhammer_overflow_is_flagged():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = pochhammer(5.0, 400)
    assert val == math.inf
    assert any(issubclass(w.category, PochhammerOverflow) for w in caught)


def test_pochhammer_negative_integer_start_vanishes():
    assert pochhammer(-3.0, 100) == 0.0
    assert pochhammer(-3, 5) == 0


def test_big_b_examples():
    for k in range(10):
        assert big_b(k, 1, 1) == 1
        assert big_b(k, 2, 1) == k + 1
    assert big_b(0, 2.3, 1.7) == 1


def test_big_b_large_k_uses_log_gamma():
    b, c, k = 2.5, 1.5, 300
    table = big_b_table(k, b, c)
    assert big_b(k, b, c) == pytest.approx(table[k], rel=1e-12)


@pytest.mark.parametrize("b,c", [(1, 1), (Fraction(3, 2), 1), (2, Fraction(5, 2)), (5, 3), (Fraction(7, 3), Fraction(1, 2))])
def test_big_b_exact_and_float_agree(b, c):
    exact = big_b_table(64, b, c)
    flt = big_b_table(64, float(b), float(c))
    for k in range(65):
        assert flt[k] == pytest.approx(float(exact[k]), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(b=st.floats(0.05, 10), c=st.floats(0.05, 10), k=st.integers(1, 200))
def test_ratio_law(b, c, k):
    if not b + 1 > c:
        return
    table = big_b_table(k + 1, b, c)
    assert table[k + 1] / table[k] == pytest.approx((b + k) / (c + k), rel=1e-13)


def test_first_step_carries_the_prefactor():
    b, c = Fraction(3), Fraction(2)
    table = big_b_table(1, b, c)
    assert table[1] == (1 + b - c) / c


@pytest.mark.parametrize("b", [1.0, 1.5, 2.0, 3.0, 5.0])
@pytest.mark.parametrize("c", [0.5, 1.0, 1.5, 2.0])
@pytest.mark.parametrize("mu", [0.25, 0.5, 1.0])
def test_monotone_weights_in_stable_regime(b, c, mu):
    if not stable_regime(b, c):
        return
    for n in range(51):
        table = coeff_table(n, b, c, mu)
        assert np.all(np.diff(table.big_b) >= -1e-15)
        assert np.all(np.diff(table.d_seq) <= 1e-15)
        assert np.all(table.d_seq > 0)


def test_weights_not_monotone_below_stable_regime():
    # b = c = 2: B_1 = 1/2 < B_0, so the last weight jumps up
    table = coeff_table(4, Fraction(2), Fraction(2), Fraction(1, 2))
    assert table.big_b[1] == Fraction(1, 2)
    assert table.d_seq[4] / table.d_seq[3] > 1


def test_coeff_table_examples():
    t0 = coeff_table(0, 1.3, 1.1, 0.4)
    assert list(t0.c_seq) == [1.0, 1.0]
    t = coeff_table(2, 2, 1, 1)
    assert list(t.d_seq) == [1, Fraction(2, 3), Fraction(1, 3)]
    assert list(t.c_seq) == [1, 1, Fraction(2, 3), Fraction(2, 3), Fraction(1, 3), Fraction(1, 3)]


def test_vietoris_reduction_exact():
    gamma = vietoris_gamma(30)
    for n in range(31):
        table = coeff_table(n, 1, 1, Fraction(1, 2))
        assert table.exact
        assert list(table.c_seq) == list(gamma[: 2 * n + 2])


def test_coeff_table_pairs_and_immutability():
    table = coeff_table(7, 2.5, 1.5, 0.3)
    assert np.array_equal(table.c_seq[0::2], table.c_seq[1::2])
    with pytest.raises(ValueError):
        table.c_seq[0] = 3.0


def test_coeff_table_accepts_negative_mu():
    table = coeff_table(3, 2, 1, -1)
    assert list(table.d_seq) == [1, Fraction(-3, 4), 0, 0]


@pytest.mark.parametrize("b,c", [(1, 2), (0, 1), (1, -1)])
def test_invalid_pairs_raise(b, c):
    with pytest.raises(ParameterError):
        coeff_table(3, b, c, 0.5)


def test_mu_out_of_range_raises():
    with pytest.raises(ParameterError):
        coeff_table(3, 1, 1, 1.5)


def test_even_sine_bound():
    assert even_sine_mu_bound(1, 1) == 1
    assert even_sine_mu_bound(1, 1, raw=True) == Fraction(3, 2)
    assert even_sine_mu_bound(1, 2) == Fraction(1, 2)
    assert even_sine_mu_bound(3, 1) == 1
    assert even_sine_mu_bound(3, 1, raw=True) == Fraction(7, 2)
    assert even_sine_mu_bound(0.5, 5.0) == 0


def test_regime_predicates():
    assert vietoris_regime(2, 2) and not vietoris_regime(1, 1.5)
    assert stable_regime(3, 2) and not stable_regime(2, 2)
    p = Params(b=3, c=2, mu=0.5, n=4)
    assert p.vietoris_regime and p.stable_regime


@pytest.mark.parametrize("kw", [dict(mu=2), dict(rho=0), dict(lam=0.3), dict(n=-1), dict(b=1, c=3)])
def test_params_validation(kw):
    with pytest.raises(ParameterError):
        Params(**kw)


def test_binomial_coeffs_float_matches_exact():
    exact = binomial_coeffs(Fraction(-1, 2), 40)
    flt = binomial_coeffs(-0.5, 40)
    assert np.allclose(flt, exact.astype(float), rtol=1e-14, atol=0)
