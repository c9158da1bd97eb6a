from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from zetaexp.errors import FunctionalEquationViolation
from zetaexp.qpoly import (BigRationalPoly, Family, Q_critical_line_real, Q_value, Q_values, build_Q,
                           build_Q_hypergeometric, build_q, critical_line_roots, functional_equation_check,
                           gamma_weight_cutoff, parseval_inner, parseval_orthogonality_check, polynomial_roots,
                           q_half_argument, q_value, q_values, real_line_polynomial, roots_interlace)

from conftest import tol

F = Fraction


def test_Q_small_table():
    assert build_Q(0).coeffs == (1,)
    assert build_Q(1).coeffs == (-1, 2)
    assert build_Q(2).coeffs == (1, F(-4, 3), F(4, 3))


def test_q_small_table():
    assert build_q(0).coeffs == (1,)
    assert build_q(1).coeffs == (1, -2)


@pytest.mark.parametrize("m", range(0, 101, 7))
def test_Q_constructions_agree(m):
    assert build_Q(m).coeffs == build_Q_hypergeometric(m).coeffs


def test_Q_degree_and_family():
    for m in (0, 5, 30):
        p = build_Q(m)
        assert p.degree == m and p.family == Family.Q and p.coeffs[-1] != 0


def test_big_rational_poly_validation():
    with pytest.raises(ValueError):
        BigRationalPoly((1, 2), Family.Q, 3)


def test_json_round_trip():
    p = build_Q(7)
    assert BigRationalPoly.from_json(p.to_json()) == p
    obj = p.to_json_obj()
    assert all(isinstance(c["num"], str) and isinstance(c["den"], str) for c in obj["coeffs"])


def test_functional_equation_examples():
    assert functional_equation_check(1)
    assert functional_equation_check(2)
    assert functional_equation_check(64)


def test_functional_equation_detects_violation(monkeypatch):
    import zetaexp.qpoly as qp

    monkeypatch.setattr(qp, "build_Q", lambda m: BigRationalPoly((1, -1, 2), Family.Q, 2))
    with pytest.raises(FunctionalEquationViolation):
        qp.functional_equation_check(2)


def test_Q_vs_hypergeometric_numeric():
    s = mp.mpc(mp.mpf(3) / 10, mp.mpf(7) / 10)
    for m in (1, 5, 12):
        ref = (-1) ** m * mp.hyp2f1(-m, s / 2, mp.mpf(1) / 2, 2)
        assert abs(build_Q(m)(s) - ref) < tol(5) * max(1, abs(ref))


def test_q_exact_value():
    assert build_q(6)(F(3, 10)) == F(4120168, 10**7)


def test_q_vs_hypergeometric_numeric():
    s = mp.mpc("0.2", "1.1")
    for m in (2, 9):
        assert abs(build_q(m)(s) - mp.hyp2f1(-m, s, 1, 2)) < tol(5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.floats(-3, 3), st.floats(-20, 20))
def test_recurrences_match_polynomials(m, re, im):
    s = mp.mpc(re, im)
    Q = build_Q(m)(s)
    q = build_q(m)(s)
    assert abs(Q_values(m, s)[m] - Q) <= tol(8) * max(1, abs(Q))
    assert abs(q_values(m, s)[m] - q) <= tol(8) * max(1, abs(q))
    assert Q_value(m, s) == Q_values(m, s)[m]
    assert q_value(m, s) == q_values(m, s)[m]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 30), st.floats(-3, 3), st.floats(-10, 10))
def test_Q_functional_equation_numeric(m, re, im):
    s = mp.mpc(re, im)
    a, b = Q_value(m, 1 - s), (-1) ** m * Q_value(m, s)
    assert abs(a - b) <= tol(8) * max(1, abs(a))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 30), st.floats(-6, 6))
def test_critical_line_real_form(m, t):
    t = mp.mpf(t)
    assert abs(Q_value(m, mp.mpc(0.5, t)) - mp.mpc(0, 1) ** m * Q_critical_line_real(m, t)[m]) < tol(8) * (1 + abs(t)) ** m


@pytest.mark.parametrize("m", range(0, 21))
def test_critical_line_coefficient_parity(m):
    re, im = build_Q(m).on_critical_line()
    if m % 2 == 0:
        assert all(c == 0 for c in im)
    else:
        assert all(c == 0 for c in re)


def test_q_half_argument():
    coeffs = q_half_argument(3)
    s = F(2, 7)
    val = sum(c * s**k for k, c in enumerate(coeffs))
    assert val == build_q(3)(s / 2)


def test_Q2_roots():
    p, parity = real_line_polynomial(build_Q(2))
    assert parity == 0 and p == (F(2, 3), 0, F(-4, 3))
    rs = critical_line_roots(2)
    assert rs.all_real_confirmed
    assert abs(rs.roots_t[0] + 1 / mp.sqrt(2)) < tol(10)
    assert abs(rs.roots_t[1] - 1 / mp.sqrt(2)) < tol(10)


def test_Q1_root_diagnostic():
    rs = critical_line_roots(1)
    assert rs.roots_t == (0,) or abs(rs.roots_t[0]) < tol(10)


def test_polynomial_roots_linear():
    roots = polynomial_roots([F(-3), F(2)])
    assert abs(roots[0] - mp.mpf(3) / 2) < tol(5)


def test_critical_line_roots_rejects_large():
    with pytest.raises(ValueError):
        critical_line_roots(62)


@pytest.mark.slow
def test_critical_line_roots_40():
    rs = critical_line_roots(40)
    assert len(rs.roots_t) == 40
    assert rs.all_real_confirmed
    assert rs.max_residual < tol(10)


def test_roots_interlace_structure():
    roots = {2 * m: critical_line_roots(2 * m).roots_t for m in range(1, 9)}
    for m in range(1, 8):
        assert roots_interlace(roots[2 * m], roots[2 * m + 2])
    assert not roots_interlace([0, 1], [0.5, 2, 3])


@pytest.mark.parametrize("m", [2, 4, 8, 12])
def test_q_roots_on_line(m):
    rs = critical_line_roots(m, Family.q)
    assert rs.all_real_confirmed
    assert len(rs.roots_t) == m


def test_gamma_weight_cutoff():
    T = gamma_weight_cutoff(30)
    from zetaexp.numerics import abs_gamma_quarter_line

    assert abs_gamma_quarter_line(T) ** 2 < mp.mpf(10) ** -40


def _at30(fn):
    with mp.workdps(30):
        return fn()


@pytest.mark.parametrize("m1,m2", [(0, 1), (0, 0), (1, 2), (3, 3), (2, 4)])
def test_parseval(m1, m2):
    assert _at30(lambda: parseval_orthogonality_check(m1, m2)) < 1e-12


def test_parseval_diagonal_value():
    val = _at30(lambda: parseval_inner(0, 0))
    assert abs(val - 1 / mp.sqrt(2)) < 1e-12


def test_parseval_range():
    with pytest.raises(ValueError):
        parseval_orthogonality_check(9, 0)
