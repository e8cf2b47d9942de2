import math
from fractions import Fraction

import numpy as np
import pytest

from cesaro_lab.functions import binomial, f_lambda, identity, neg_log, polynomial
from cesaro_lab.geometry import (
    GegenbauerParams,
    chain_explorer,
    close_to_convex_check,
    gegenbauer,
    gegenbauer_cosine_positivity,
    gegenbauer_mean_coeffs,
    gegenbauer_table,
    inside_polygon,
    kakeya_deltas,
    winding_number,
    zero_free_closed_disc,
)
from cesaro_lab.sequences import ParameterError, coeff_table, pochhammer
from cesaro_lab.subordination import BoundaryGrid, PreconditionError
from cesaro_lab.trig import positivity_scan
from cesaro_lab.verdicts import Status

from oracles import gegenbauer_explicit, gegenbauer_generating, roots_in_closed_disc

SMALL = BoundaryGrid.default(radii=16, angles=256)
X_FIVE = [-1, -0.5, 0, 0.5, 1]


def test_gegenbauer_examples():
    assert gegenbauer(0, 0.3, 0.7) == 1
    assert gegenbauer(1, 0.3, 0.7) == pytest.approx(2 * 0.3 * 0.7, abs=1e-16)
    for k in range(12):
        assert gegenbauer(k, 0.2, 1.0) == pytest.approx(pochhammer(0.4, k) / math.factorial(k), rel=1e-13)


@pytest.mark.parametrize("lam", [0.1, 0.25, 0.49])
@pytest.mark.parametrize("x", [-1, 0, 0.7, 1])
def test_recurrence_matches_generating_function(lam, x):
    lam_q, x_q = Fraction(lam).limit_denominator(1000), Fraction(x).limit_denominator(1000)
    ref = gegenbauer_generating(60, lam_q, x_q)
    got = gegenbauer_table(60, float(lam_q), float(x_q))
    for k in range(61):
        assert abs(got[k] - float(ref[k])) <= 1e-11 * max(1.0, abs(float(ref[k])))


def test_recurrence_matches_explicit_sum():
    for k in (0, 1, 5, 20):
        assert gegenbauer(k, 0.3, 0.4) == pytest.approx(float(gegenbauer_explicit(k, 0.3, 0.4)), abs=1e-12)


def test_gegenbauer_params():
    assert GegenbauerParams(0.3, 0.5, 10).exploratory is False
    assert GegenbauerParams(0.6, 0.5, 10).exploratory is True
    with pytest.raises(ParameterError):
        GegenbauerParams(0.3, 1.5, 10)


def test_winding_simple():
    assert winding_number([1, 0.5])[0] == 0
    assert winding_number([0.5, 1])[0] == 1
    assert winding_number([0, 0, 1])[0] == 2
    with pytest.raises(ValueError):
        winding_number([0, 0])


def test_zero_free_examples():
    assert zero_free_closed_disc([1, 0.5]).status is Status.HOLDS_SAMPLED
    assert zero_free_closed_disc([1, -1]).status in (Status.FAILS, Status.INCONCLUSIVE)
    v = zero_free_closed_disc([0.25, 0, 1])
    assert v.status is Status.FAILS and v.details["zeros_inside"] == 2
    assert zero_free_closed_disc(gegenbauer_mean_coeffs(10, 0.3, 0.5, 2, 1)).holds
    assert zero_free_closed_disc([3.0]).holds


def test_winding_matches_root_oracle():
    rng = np.random.default_rng(20240517)
    mismatches = 0
    for _ in range(200):
        deg = int(rng.integers(1, 13))
        a = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        w, _, arc = winding_number(a)
        if w is None:
            continue
        mismatches += w != roots_in_closed_disc(a)
    assert mismatches == 0


@pytest.mark.parametrize("lam", [0.1, 0.25, 0.45])
@pytest.mark.parametrize("x", [-1, 0, 1])
def test_gegenbauer_means_zero_free(lam, x):
    for n in range(16):
        assert zero_free_closed_disc(gegenbauer_mean_coeffs(n, lam, x, 2, 1)).holds


def test_gegenbauer_positivity_small_lambda():
    for lam in (0.1, 0.25):
        for n in (1, 5, 10, 20):
            rep = gegenbauer_cosine_positivity(lam, X_FIVE, n, 1, 1)
            assert rep.holds and not rep.verdict.exploratory


def test_gegenbauer_at_one_is_the_cesaro_cosine_sum():
    lam, n = 0.2, 9
    coeffs = gegenbauer_mean_coeffs(n, lam, 1.0, 2, 1)
    table = coeff_table(n, 2.0, 1.0, 2 * lam)
    assert np.allclose(coeffs, np.asarray(table.d_seq, dtype=float), rtol=1e-13)
    a = gegenbauer_cosine_positivity(lam, [1.0], n, 2, 1)
    b = positivity_scan(coeffs, "cosine")
    assert a.min_value == b.min_value


def test_gegenbauer_exploratory_large_lambda_fails():
    found = None
    for n in range(1, 201):
        rep = gegenbauer_cosine_positivity(0.40, [1.0], n, 1, 1)
        assert rep.verdict.exploratory
        if rep.verdict.status is Status.FAILS:
            found = n
            break
    assert found is not None


def test_kakeya_deltas_monotone_exact():
    for b, c in [(2, 1), (3, 2), (Fraction(5, 2), Fraction(3, 2))]:
        w = [Fraction(1, 3), Fraction(1, 6), Fraction(1, 2)]
        d = kakeya_deltas(w, [2, 5, 9], Fraction(b), Fraction(c))
        assert d[0] == 1
        assert all(d[k] >= d[k + 1] for k in range(len(d) - 1))
        assert d[-1] > 0


def test_close_to_convex_examples():
    for f in (neg_log(), identity(), f_lambda(0.7)):
        lam = 0.7 if f.name.startswith("F_") else 0.5
        for n in (1, 4, 9):
            v = close_to_convex_check(f, lam, n, 2, 1, SMALL)
            assert v.holds
            assert v.details["min_abs_mean_derivative"] > 0


def test_close_to_convex_beta_family():
    for beta in (0.5, 1.0, 3.0):
        assert close_to_convex_check(neg_log(), 0.5, 6, 1 + beta, 1, SMALL).holds


def test_close_to_convex_preconditions():
    with pytest.raises(PreconditionError):
        close_to_convex_check(polynomial([0, 1, 1]), 0.5, 3, 2, 1, SMALL)
    with pytest.raises(ParameterError):
        close_to_convex_check(neg_log(), 0.4, 3, 2, 1, SMALL)
    with pytest.raises(ParameterError):
        close_to_convex_check(neg_log(), 0.5, 3, 2, 2, SMALL)


def test_inside_polygon_square():
    sq = np.array([0, 1, 1 + 1j, 1j, 0])
    pts = np.array([0.5 + 0.5j, 1.5 + 0.5j, -0.1j])
    assert list(inside_polygon(pts, sq)) == [True, False, False]


def test_chain_explorer_bundle():
    bundle = chain_explorer(neg_log(), 1, 1, 0, 4, theta_samples=256)
    assert [c[1] for c in bundle.curves] == [1, 2, 3, 4, None]
    for _, _, pts in bundle.curves:
        assert pts[0] == pts[-1]
        assert len(pts) == 257
    assert len(bundle.containment) == 4
    assert all(0 <= s <= 1 for _, _, s in bundle.containment)
    assert bundle.meta["n_max"] == 4


def test_chain_explorer_deterministic_and_precondition():
    a = chain_explorer(neg_log(), 2, 1, 1, 3, theta_samples=64)
    b = chain_explorer(neg_log(), 2, 1, 1, 3, theta_samples=64)
    assert a.containment == b.containment
    with pytest.raises(PreconditionError):
        chain_explorer(polynomial([0, 1, 1]), 1, 1, 0, 3)


def test_chain_first_curve_is_identity_map():
    bundle = chain_explorer(binomial(1.0).times_z(), 1, 1, 0, 1, theta_samples=16, lam=0.0)
    theta = 2 * np.pi * np.arange(17) / 16
    assert np.allclose(bundle.curves[0][2][:-1], np.exp(1j * theta[:-1]), atol=1e-15)
