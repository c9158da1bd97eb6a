import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from zetaexp.config import precision, set_precision, current_precision, tol as cfg_tol
from zetaexp.errors import ConvergenceError, PoleError, PrecisionError
from zetaexp.numerics import (QuadratureResult, abs_gamma_quarter_line, eta_term_count, euler_maclaurin_order,
                              euler_maclaurin_tail, gamma, log_gamma, mellin_quadrature, quad_checked, taylor_mul,
                              taylor_pow, zeta_oracle)
from zetaexp.psi_basis import psi

from conftest import close, tol

# independent values, mpmath at 80 digits
ZETA_HALF = mp.mpf("-1.460354508809586812889499152515298012467229331012581490542886087825531")
ZETA_REF = {
    "0.3": mp.mpf("-0.9045592572539839900078761518337238649525045669468019485945143996850603"),
    "0.5+5j": mp.mpc("0.7018123711656866300377297798406317300235125447691302324837851462834739",
                     "0.2310380083914199267914673529750551874856156002580844459520138309458006"),
    "0.8+40j": mp.mpc("0.8330592696609873123324600091769493980980312952739183675453912524841401",
                      "-0.6562031218683079686236722015579579205692756632416338619251924376314"),
    "1.5+99j": mp.mpc("1.149905394050065586703183790597078498612470481171993516771603777783571",
                      "0.07724195725508254420074515606137343365783401174012898556948593968235076"),
}
GAMMA_QUARTER = mp.mpf("3.625609908221908311930685155867672002995167682880065467433377999569919")


def _s(key):
    re, _, im = key.partition("+")
    return mp.mpc(re, im[:-1] if im else 0)


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

def test_precision_context_restores():
    assert current_precision() == 60
    with precision(40):
        assert mp.mp.dps == 40
    assert mp.mp.dps == 60


def test_precision_floor():
    with pytest.raises(ValueError):
        set_precision(20)


def test_tol_helper():
    assert cfg_tol(5) == mp.mpf(10) ** -55


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

def test_gamma_trivial_values():
    assert gamma(1) == 1
    assert close(gamma(mp.mpf(1) / 2), mp.sqrt(mp.pi), tol(2))


def test_gamma_reflection_quarter():
    assert close(gamma(mp.mpf(1) / 4) * gamma(mp.mpf(3) / 4), mp.pi * mp.sqrt(2), tol(2))


def test_gamma_quarter_frozen():
    assert close(gamma(mp.mpf(1) / 4), GAMMA_QUARTER, tol(2))


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma(z)
    with pytest.raises(PoleError):
        log_gamma(z)


complex_points = st.tuples(st.floats(0.05, 6), st.floats(-30, 30))


@settings(max_examples=40, deadline=None)
@given(complex_points)
def test_gamma_recursion(p):
    z = mp.mpc(*p)
    assert abs(gamma(z + 1) - z * gamma(z)) <= tol(3) * abs(gamma(z + 1))


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.floats(0.05, 0.95), st.floats(-10, 10)))
def test_gamma_reflection(p):
    z = mp.mpc(*p)
    lhs = gamma(z) * gamma(1 - z)
    assert abs(lhs - mp.pi / mp.sin(mp.pi * z)) <= tol(3) * abs(lhs)


@settings(max_examples=40, deadline=None)
@given(complex_points)
def test_gamma_duplication(p):
    z = mp.mpc(*p)
    lhs = gamma(z) * gamma(z + mp.mpf(1) / 2)
    rhs = mp.power(2, 1 - 2 * z) * mp.sqrt(mp.pi) * gamma(2 * z)
    assert abs(lhs - rhs) <= tol(3) * abs(rhs)


@settings(max_examples=30, deadline=None)
@given(complex_points)
def test_log_gamma_exponentiates(p):
    z = mp.mpc(*p)
    assert abs(mp.exp(log_gamma(z)) - gamma(z)) <= tol(3) * abs(gamma(z))


def test_abs_gamma_quarter_line():
    assert close(abs_gamma_quarter_line(0), GAMMA_QUARTER, tol(2))
    assert abs_gamma_quarter_line(10) < abs_gamma_quarter_line(0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-80, 80))
def test_abs_gamma_quarter_line_even(t):
    a, b = abs_gamma_quarter_line(t), abs_gamma_quarter_line(-t)
    assert abs(a - b) <= tol(2) * a
    assert abs(a - abs(mp.gamma(mp.mpc(0.25, mp.mpf(t) / 2)))) <= tol(2) * a


# ---------------------------------------------------------------------------
# zeta oracle
# ---------------------------------------------------------------------------

def test_zeta_two():
    assert abs(zeta_oracle(2) - mp.pi**2 / 6) < tol(2)


def test_zeta_half_frozen():
    assert close(zeta_oracle(mp.mpf(1) / 2), ZETA_HALF, tol(2))


@pytest.mark.parametrize("key", sorted(ZETA_REF))
def test_zeta_frozen_points(key):
    ref = ZETA_REF[key]
    assert abs(zeta_oracle(_s(key)) - ref) <= tol(2) * abs(ref)


def test_zeta_first_zero():
    assert abs(zeta_oracle(mp.mpc("0.5", "14.1347251417"))) < 1e-8


def test_zeta_pole_and_domain():
    with pytest.raises(PoleError):
        zeta_oracle(1)
    for s in (mp.mpf("2.5"), mp.mpc("0.5", "150"), mp.mpf("-0.5"), mp.mpf(0)):
        with pytest.raises(PrecisionError):
            zeta_oracle(s)
    with pytest.raises(ValueError):
        zeta_oracle(2, method="riemann-siegel")


@settings(max_examples=15, deadline=None)
@given(st.tuples(st.floats(0.05, 2), st.floats(-60, 60)))
def test_zeta_methods_agree(p):
    s = mp.mpc(*p)
    if abs(s - 1) < 1e-3:
        return
    a, b = zeta_oracle(s), zeta_oracle(s, method="euler_maclaurin")
    assert abs(a - b) <= tol(4) * max(1, abs(a))


def test_zeta_on_eta_factor_zero():
    # 1 - 2^(1-s) vanishes here; the oracle must not divide by it
    s = 1 + 2j * mp.pi / mp.log(2)
    a = zeta_oracle(s)
    with mp.workdps(90):
        b = zeta_oracle(s, method="euler_maclaurin")
    assert abs(a - b) <= tol(3) * abs(b)


def test_zeta_conjugate_symmetry():
    s = mp.mpc("0.4", "23.5")
    assert abs(zeta_oracle(s.conjugate()) - zeta_oracle(s).conjugate()) < tol(3)


def test_eta_term_count_grows_with_digits():
    s = mp.mpc("0.5", "30")
    assert eta_term_count(s, 30) < eta_term_count(s, 60) < eta_term_count(s, 120)


def test_zeta_at_lower_precision():
    with precision(30):
        assert abs(zeta_oracle(mp.mpf(1) / 2) - ZETA_HALF) < mp.mpf(10) ** -28


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def test_quadrature_result_invariants():
    QuadratureResult(mp.mpf(1), mp.mpf(0), 1)
    with pytest.raises(ValueError):
        QuadratureResult(mp.mpf(1), mp.mpf(-1), 3)
    with pytest.raises(ValueError):
        QuadratureResult(mp.mpf(1), mp.mpf(0), 0)


def test_quad_checked_gaussian():
    res = quad_checked(lambda x: mp.exp(-mp.pi * x * x), [-mp.inf, 0, mp.inf])
    assert abs(res.value - 1) < tol(5)
    assert res.abs_error_estimate < tol(5)
    assert res.nodes_used > 0


def test_quad_checked_raises_on_unreachable_target():
    with pytest.raises(ConvergenceError) as exc:
        quad_checked(lambda x: mp.sqrt(x), [0, 1], target=mp.mpf(10) ** -200, max_degree=3)
    assert exc.value.achieved > exc.value.tolerance


def test_mellin_psi0_half():
    res = mellin_quadrature(lambda t: psi(0, t), mp.mpf(1) / 2, fold_parity=1)
    exact = mp.gamma(mp.mpf(1) / 4) ** 2 / mp.sqrt(2 * mp.pi)
    assert abs(res.value - exact) < tol(5)
    assert res.abs_error_estimate < tol(5)


def test_mellin_psi1_half_vanishes():
    res = mellin_quadrature(lambda t: psi(1, t), mp.mpf(1) / 2, fold_parity=-1)
    assert abs(res.value) < tol(5)


def test_mellin_gaussian_unfolded():
    s = mp.mpf(1) / 2
    res = mellin_quadrature(lambda t: mp.exp(-mp.pi * t * t), s)
    assert abs(res.value - mp.gamma(s / 2) * mp.power(mp.pi, -s / 2) / 2) < tol(5)


def test_mellin_requires_strip():
    # the Gaussian example at s = 1 lies on the boundary of the validated strip
    with pytest.raises(PrecisionError):
        mellin_quadrature(lambda t: mp.exp(-mp.pi * t * t), 1)
    with pytest.raises(ValueError):
        mellin_quadrature(lambda t: 1 / (1 + t), mp.mpf("0.5"), fold_parity=2)


def test_mellin_deterministic():
    f = lambda t: psi(2, t)
    a = mellin_quadrature(f, mp.mpf("0.3"), fold_parity=1)
    b = mellin_quadrature(f, mp.mpf("0.3"), fold_parity=1)
    assert a == b


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("s", [mp.mpf("0.3"), mp.mpc("0.4", "2")])
def test_mellin_parity(m, s):
    f = lambda t: psi(m, t)
    a = mellin_quadrature(f, s, fold_parity=(-1) ** m).value
    b = mellin_quadrature(f, 1 - s, fold_parity=(-1) ** m).value
    assert abs(a - (-1) ** m * b) < tol(5)


# ---------------------------------------------------------------------------
# series helpers
# ---------------------------------------------------------------------------

def test_taylor_pow_matches_binomial_series():
    # (1 + e)^(-1/2)
    coeffs = taylor_pow([1, 1], mp.mpf(-1) / 2, 8)
    for n, c in enumerate(coeffs):
        assert abs(c - mp.binomial(mp.mpf(-1) / 2, n)) < tol(3)


def test_taylor_mul():
    assert taylor_mul([1, 1], [1, -1], 3) == [1, 0, -1, 0]


def test_euler_maclaurin_tail_basel():
    # sum_{n >= N} 1/n^2 with h(N + e) = (N + e)^-2
    N = 40
    order = euler_maclaurin_order(N, 65)
    taylor = taylor_pow([N, 1], -2, order)
    value, last = euler_maclaurin_tail(taylor, mp.mpf(1) / N, tol(0))
    exact = mp.pi**2 / 6 - mp.fsum(mp.mpf(1) / n**2 for n in range(1, N))
    assert abs(value - exact) < tol(5)
    assert last < tol(0)


def test_euler_maclaurin_order_monotone():
    assert euler_maclaurin_order(50, 30) <= euler_maclaurin_order(50, 60) <= euler_maclaurin_order(30, 60)
    with pytest.raises(ValueError):
        euler_maclaurin_order(1, 60)
