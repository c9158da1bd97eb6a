from fractions import Fraction
import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from zetaexp.hermite import (CRAMER_K, HermiteEval, abs_lattice_sum, central_ratio, hermite_eval, hermite_function,
                             hermite_poly, lattice_radius, lattice_sum_S, lattice_sums_S, log_b1_bound, log_b2_bound,
                             orthonormal_hermite_values, phi_integral_identity_check, phi_norm, phi_square_norm)

from conftest import close, tol

# nsum of (2^-2m/m!) Phi_2m(n) with mpmath's hermite at 80 digits; S_0 from jtheta
S_REF = {
    0: mp.mpf("1.086434811213308014575316121510223457070205707245218885920790315981857"),
    4: mp.mpf("1.300806855139237393639712879675752022842175874406607031682000131955107"),
    8: mp.mpf("-0.2595796908249427043339761098613836527588662995594812099497015550394166"),
    12: mp.mpf("1.056717189566033969056375913679166541746793963305158800217891132203494"),
}


def test_hermite_poly_small_cases():
    assert hermite_poly(0, mp.mpf("0.3")) == 1
    assert hermite_poly(2, 0) == -2
    assert hermite_poly(3, Fraction(1, 3), exact=True) == 8 * Fraction(1, 27) - 12 * Fraction(1, 3)


@pytest.mark.parametrize("m", [1, 5, 17, 40])
def test_hermite_poly_vs_mpmath(m):
    x = mp.mpf("0.77")
    assert close(hermite_poly(m, x), mp.hermite(m, x), tol(5))


def test_hermite_poly_generating_function():
    # exp(-t^2 + 2 x t) = sum H_m(x) t^m / m!
    x, t = mp.mpf("0.6"), mp.mpf("0.05")
    series = mp.fsum(hermite_poly(m, x) * t**m / mp.factorial(m) for m in range(60))
    assert abs(series - mp.exp(-t * t + 2 * x * t)) < tol(5)


def test_hermite_poly_negative_index():
    with pytest.raises(ValueError):
        hermite_poly(-1, 0)


def test_phi_norm_examples():
    assert close(phi_norm(0, 0), 1, tol(2))
    assert close(phi_norm(1, 0), mp.mpf(-1) / 2, tol(2))


@pytest.mark.parametrize("m", [0, 1, 3, 10, 20])
@pytest.mark.parametrize("x", [Fraction(0), Fraction(1, 3), Fraction(7, 4)])
def test_phi_norm_vs_big_rational(m, x):
    # direct route: exact H_2m at sqrt(2 pi) x needs an irrational argument, so
    # compare through the exact polynomial coefficients at high precision
    with mp.workdps(120):
        y = mp.sqrt(2 * mp.pi) * mp.mpf(x.numerator) / x.denominator
        ref = mp.hermite(2 * m, y) * mp.exp(-y * y / 2) / (mp.mpf(4) ** m * mp.factorial(m))
    assert abs(phi_norm(m, mp.mpf(x.numerator) / x.denominator) - ref) <= tol(5) * max(1, abs(ref))


def test_phi_norm_parity_at_zero():
    for m in range(12):
        assert close((-1) ** m * phi_norm(m, 0) * mp.factorial(m) * mp.mpf(4) ** m,
                     mp.factorial(2 * m) / mp.factorial(m), tol(5))


def test_hermite_eval_large_index_finite():
    e = hermite_eval(5000, mp.mpf(700))
    assert isinstance(e, HermiteEval)
    assert mp.isfinite(e.phi_norm)
    e = hermite_eval(10000, mp.mpf("3.1"))
    assert mp.isfinite(e.phi_norm)


def test_orthonormal_values_normalized():
    # int h_k(sqrt(2 pi) x)^2 sqrt(2 pi) dx = 1
    for k in (0, 3, 8):
        val = mp.quad(lambda x: orthonormal_hermite_values(k, x)[k] ** 2, [-mp.inf, 0, mp.inf])
        assert abs(val * mp.sqrt(2 * mp.pi) - 1) < tol(10)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 200), st.floats(-50, 50))
def test_cramer_bound(m, x):
    v = abs(hermite_function(2 * m, x))
    if v == 0:
        return
    assert mp.log(v) <= log_b1_bound(m) + tol(5)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 120), st.floats(0.01, 40))
def test_b2_bound(m, x):
    v = abs(hermite_function(2 * m, x))
    if v == 0:
        return
    assert mp.log(v) <= log_b2_bound(m, x) + tol(5)


def test_cramer_constant_is_theta_one():
    assert abs(CRAMER_K - S_REF[0]) < 1e-6


@pytest.mark.parametrize("two_m", sorted(S_REF))
def test_lattice_sum_frozen(two_m):
    res = lattice_sum_S(two_m)
    assert abs(res.value - S_REF[two_m]) < tol(5)
    assert 0 <= res.tail_bound < tol(5) * max(1, abs(res.value))
    assert res.radius >= math.ceil(2 * math.sqrt(two_m))


@pytest.mark.parametrize("two_m", [2, 6, 10, 30, 102])
def test_lattice_sum_vanishes_2_mod_4(two_m):
    res = lattice_sum_S(two_m)
    assert abs(res.value) <= res.tail_bound + tol(3)


def test_lattice_sums_batch_matches_single():
    batch = lattice_sums_S([0, 4, 20])
    for k in (0, 4, 20):
        assert abs(batch[k].value - lattice_sum_S(k).value) < tol(5)


def test_lattice_radius_rejects_odd():
    with pytest.raises(ValueError):
        lattice_radius(3)


@pytest.mark.parametrize("two_m", [0, 8, 80, 400])
def test_lattice_radius_tail(two_m):
    R, tail = lattice_radius(two_m)
    assert tail < tol(0)
    # the tail bound majorizes the terms just past R
    m = two_m // 2
    assert abs(phi_norm(m, R + 1)) <= 2 * central_ratio(m) * mp.exp(-mp.pi * (R + 1))


def test_abs_lattice_sum_growth():
    # (2^-2m/m!) sum |Phi_2m(n)| = O(m^(1/4))
    ratios = [abs_lattice_sum(m) / mp.power(m, 0.25) for m in (25, 100, 400)]
    assert max(ratios) / min(ratios) < 3


def test_lemma0_tail_constant():
    # (2^-2m/m!) sum_{|n| >= 2 sqrt(2m)} |Phi_2m(n)| <= C exp(-2 pi sqrt(2m)) with C bounded
    cs = []
    for m in (10, 40, 160, 500):
        start = math.ceil(2 * math.sqrt(2 * m))
        cs.append(abs_lattice_sum(m, start) / mp.exp(-2 * mp.pi * mp.sqrt(2 * m)))
    assert max(cs) < 10


@pytest.mark.parametrize("m", [0, 1, 5, 10])
def test_phi_integral_identity(m):
    assert abs(phi_integral_identity_check(m)) < tol(5)


def test_phi_integral_identity_m5_frozen_threshold():
    assert abs(phi_integral_identity_check(5)) < 1e-40


@pytest.mark.parametrize("m", [0, 1, 4, 10])
def test_phi_square_norm(m):
    exact = mp.mpf(4) ** m * mp.factorial(2 * m) / mp.sqrt(2)
    assert abs(phi_square_norm(m) - exact) <= tol(5) * exact
