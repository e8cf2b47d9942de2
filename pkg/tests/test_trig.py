import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cesaro_lab.sequences import coeff_table
from cesaro_lab.trig import (
    ConsistencyError,
    GridSpec,
    asymptotic_ratio,
    conj2_boundary_sum,
    halfplane_boundary_value,
    parity_identity_residual,
    positivity_scan,
    re_pn,
    trig_sum,
)
from cesaro_lab.verdicts import Status

from oracles import brute_trig_min

MU0_GOLDEN = 0.6915562204380141


def test_trig_sum_examples():
    assert trig_sum([1, 1], "cosine", 1, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert trig_sum([1, 1], "sine", 1, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert trig_sum([5, 1], "sine", 1, 0.0) == 0.0
    with pytest.raises(ValueError):
        trig_sum([1, 1], "cosine", 3, 0.1)
    with pytest.raises(ValueError):
        trig_sum([1, 1], "tangent", 1, 0.1)


def test_scan_simple_sums():
    # 1 + cos t > 0 on the open interval, touching 0 at pi
    rep = positivity_scan([1.0, 1.0], "cosine")
    assert rep.verdict.status is Status.HOLDS_SAMPLED and rep.certified
    # sin t + sin 2t / 2 > 0 on (0, pi)
    assert positivity_scan([0, 1, 0.5], "sine").holds
    # 1 + 2 cos t goes negative
    rep = positivity_scan([1.0, 2.0], "cosine")
    assert rep.verdict.status is Status.FAILS
    assert rep.verdict.witness.real > 2 * math.pi / 3
    assert rep.verdict.witness_value < 0


def test_scan_flat_zero_is_inconclusive():
    rep = positivity_scan([0.0, 0.0, 0.0], "cosine")
    assert rep.verdict.status is Status.INCONCLUSIVE


@pytest.mark.parametrize("coeffs,kind", [
    ([1, 1, 0.5, 0.5, 1 / 3, 1 / 3], "cosine"),
    ([0, 1, 0.5, 0.5], "sine"),
    ([1, 1.5, 0.2, -0.4], "cosine"),
    ([0, 1, 1, 1, 1], "sine"),
])
def test_scan_minimum_matches_brute_force(coeffs, kind):
    rep = positivity_scan(coeffs, kind)
    ref, _ = brute_trig_min(coeffs, kind, 0.0, math.pi)
    if rep.verdict.status is Status.HOLDS_SAMPLED:
        assert ref > 0
        assert rep.min_value >= ref - 1e-6
    else:
        assert rep.verdict.status is Status.FAILS
        assert ref < 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=2, max_size=9))
def test_scan_never_certifies_a_negative_sum(coeffs):
    rep = positivity_scan(coeffs, "cosine")
    ref, _ = brute_trig_min(coeffs, "cosine", 0.0, math.pi, points=20_001)
    if rep.verdict.status is Status.HOLDS_SAMPLED:
        assert ref > -1e-12
    if ref < -1e-6:
        assert rep.verdict.status is Status.FAILS


@pytest.mark.parametrize("kind,odd", [("cosine", 1), ("sine", 1), ("sine", 0)])
def test_vietoris_tables_positive(kind, odd):
    for n in range(1, 21):
        table = coeff_table(n, 1, 1, 0.5)
        assert positivity_scan(table, kind, 2 * n + odd).holds


def test_scan_holds_at_half_the_critical_exponent_when_it_holds_at_it():
    for b, c in [(1, 1), (2, 1), (3, 2)]:
        for n in (3, 8, 15):
            if positivity_scan(coeff_table(n, b, c, MU0_GOLDEN), "cosine").holds:
                assert positivity_scan(coeff_table(n, b, c, MU0_GOLDEN / 2), "cosine").holds


def test_scan_stable_under_grid_doubling():
    table = coeff_table(12, 2, 1, 0.6)
    a = positivity_scan(table, "cosine", grid=GridSpec(points=512))
    b = positivity_scan(table, "cosine", grid=GridSpec(points=1024))
    assert a.verdict.status is b.verdict.status is Status.HOLDS_SAMPLED
    assert abs(a.min_value - b.min_value) < 1e-3 * max(1.0, abs(b.min_value))


def test_scan_fails_above_critical_exponent():
    # b = c = 1 and mu = 0.8 > mu0': the cosine sum goes negative for large n
    rep = positivity_scan(coeff_table(60, 1, 1, 0.8), "cosine")
    assert rep.verdict.status is Status.FAILS


def test_exploratory_flag_propagates():
    rep = positivity_scan(coeff_table(4, 1, 1.5, 0.3), "cosine", exploratory=True)
    assert rep.verdict.exploratory


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(lo=1.0, hi=0.5)
    with pytest.raises(ValueError):
        GridSpec(points=0)


@pytest.mark.parametrize("b,c,mu", [(1, 1, 0.5), (2, 1, 0.7), (3.5, 2, -0.3), (2, 2, 0.9)])
def test_parity_identity(b, c, mu):
    for n in (0, 1, 5, 17):
        table = coeff_table(n, b, c, mu)
        for phi in np.linspace(0.05, math.pi - 0.05, 13):
            assert abs(parity_identity_residual(table, phi)) < 1e-12


def test_re_pn_routes_agree():
    table = coeff_table(9, 2.5, 1.5, 0.4)
    for phi in np.linspace(0.1, 3.0, 11):
        v = re_pn(table, phi)
        c = table.as_float()
        k = np.arange(c.size)
        e = np.exp(1j * k * phi)
        ref = (np.sum(c * e) * np.sum((-1.0) ** k * c * e)).real
        assert v == pytest.approx(ref, abs=1e-12)


def test_re_pn_detects_broken_table():
    table = coeff_table(4, 2, 1, 0.5)
    bad = coeff_table(4, 2, 1, 0.5)
    object.__setattr__(bad, "c_seq", np.array(table.as_float()) + np.r_[0, 0.01, np.zeros(8)])
    with pytest.raises(ConsistencyError):
        re_pn(bad, 0.7)


def test_conj2_reduces_to_cosine_sum_at_rho_half():
    n, b, c, mu = 7, 2.0, 1.0, 0.6
    table = coeff_table(n, b, c, mu)
    d = np.asarray(table.d_seq, dtype=float)
    phi = np.linspace(0.1, 3.0, 9)
    expect = -np.cos(np.outer(phi, np.arange(n + 1))) @ d
    assert np.allclose(conj2_boundary_sum(n, b, c, mu, 0.5, phi), expect, atol=1e-13)


def test_conj2_base_case():
    phi = np.linspace(0.1, 3.0, 9)
    assert np.allclose(conj2_boundary_sum(0, 1, 1, 0.5, 1.0, phi), -np.sin(phi / 2), atol=1e-15)


@pytest.mark.parametrize("rho", [0.25, 0.5, 0.8, 1.0])
def test_conj2_sign_matches_halfplane_value(rho):
    # Re[(1-z)^{2rho-1} sigma_n] = -(2 sin(phi/2))^{2rho-1} * S(phi)
    n, b, c, mu = 11, 3.0, 2.0, 0.55
    phi = np.linspace(0.05, 2 * math.pi - 0.05, 41)
    s = conj2_boundary_sum(n, b, c, mu, rho, phi)
    w = halfplane_boundary_value(n, b, c, mu, rho, phi)
    scale = (2 * np.sin(phi / 2)) ** (2 * rho - 1)
    assert np.allclose(w, -scale * s, atol=1e-12)


def test_asymptotic_ratio_converges():
    args = dict(b=2.0, c=1.0, mu=0.5, rho=0.5, phi=2.0)
    errs = [abs(asymptotic_ratio(n, **args).ratio - 1) for n in (256, 1024, 4096)]
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 2e-3


def test_asymptotic_ratio_flags_vanishing_limit():
    r = asymptotic_ratio(64, 1, 1, 0.5, 0.5, 1.0, limit=0.0)
    assert r.inconclusive and math.isnan(r.ratio)


def test_asymptotic_ratio_domain():
    with pytest.raises(ValueError):
        asymptotic_ratio(64, 1, 1, 1.0, 0.5, 1.0)


def test_exact_and_float_tables_scan_alike():
    exact = coeff_table(6, Fraction(2), Fraction(1), Fraction(1, 2))
    flt = coeff_table(6, 2.0, 1.0, 0.5)
    a = positivity_scan(exact, "cosine")
    b = positivity_scan(flt, "cosine")
    assert a.min_value == pytest.approx(b.min_value, abs=1e-14)
