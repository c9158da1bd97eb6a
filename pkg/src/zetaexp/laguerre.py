"""Laguerre functions phi_m(x) = exp(-x) L_m(2x), the rational functions
psi_m(t) = ((t-1)/(t+1))^m 2/(1+t), and the zeta expansions built from them.

Normalization: with y = 2x,
    int_0^inf phi_m phi_n dx = (1/2) int_0^inf exp(-y) L_m(y) L_n(y) dy = delta_mn / 2.

The coefficient sums are
    s_m = sum_{n>=1} phi_m(2 pi n),   sigma_m = sum_{n>=1} psi_m(n^2),
    c_2n = binom(2n, n) / 4^n,  c_2n+1 = 0.
sigma_m converges like 1/n^2; the tail beyond N is
    int_N^inf 2 (x^2-1)^m / (x^2+1)^(m+1) dx = int_0^X cos^m(theta) d theta,  X = 2 arctan(1/N),
plus Euler-Maclaurin corrections from the Taylor expansion at N.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import mpmath as mp

from .errors import DomainError
from .numerics import (euler_maclaurin_order, euler_maclaurin_tail, mellin_quadrature, quad_checked, taylor_mul, taylor_pow,
                       to_mp, zeta_oracle)
from .qpoly import q_values


@dataclass(frozen=True)
class LaguerreEval:
    m: int
    x: object
    phi: object


def laguerre_phi_values(M: int, x):
    """[phi_0(x), ..., phi_M(x)] by (k+1) L_{k+1} = (2k+1-y) L_k - k L_{k-1}, y = 2x, scaled by exp(-x)."""
    x = to_mp(x)
    if x < 0:
        raise DomainError("x must be >= 0")
    y = 2 * x
    a = mp.exp(-x)
    out = [a]
    if M == 0:
        return out
    b = a * (1 - y)
    out.append(b)
    for k in range(1, M):
        a, b = b, ((2 * k + 1 - y) * b - k * a) / (k + 1)
        out.append(b)
    return out


def laguerre_phi(m: int, x):
    if m < 0:
        raise ValueError("m must be >= 0")
    return laguerre_phi_values(m, x)[m]


def laguerre_eval(m: int, x) -> LaguerreEval:
    return LaguerreEval(m, to_mp(x), laguerre_phi(m, x))


def generating_function_residual(x, u, M: int):
    """|exp(-x(1+u)/(1-u))/(1-u) - sum_{m<=M} phi_m(x) u^m|."""
    x, u = to_mp(x), to_mp(u)
    vals = laguerre_phi_values(M, x)
    lhs = mp.exp(-x * (1 + u) / (1 - u)) / (1 - u)
    return abs(lhs - mp.fsum(v * u**m for m, v in enumerate(vals)))


def psi_laguerre(m: int, t):
    """psi_m(t) = ((t-1)/(t+1))^m 2/(1+t); exact Fraction for int/Fraction t."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if isinstance(t, (int, Fraction)):
        t = Fraction(t)
        if t <= 0:
            raise DomainError("t must be > 0")
        return ((t - 1) / (t + 1)) ** m * 2 / (1 + t)
    t = to_mp(t)
    if t <= 0:
        raise DomainError("t must be > 0")
    return ((t - 1) / (t + 1)) ** m * 2 / (1 + t)


def psi_laguerre_values(M: int, t):
    t = to_mp(t)
    if t <= 0:
        raise DomainError("t must be > 0")
    u = (t - 1) / (t + 1)
    out = [2 / (1 + t)]
    for _ in range(M):
        out.append(out[-1] * u)
    return out


def exponential_expansion_residual(x, t, M: int):
    """|exp(-2 pi x t) - sum_{m<=M} phi_m(2 pi x) psi_m(t)|."""
    x, t = to_mp(x), to_mp(t)
    phi = laguerre_phi_values(M, 2 * mp.pi * x)
    psi = psi_laguerre_values(M, t)
    return abs(mp.exp(-2 * mp.pi * x * t) - mp.fsum(a * b for a, b in zip(phi, psi)))


def lorentzian_expansion_residual(x, t, M: int):
    """|(1/pi)/(1+x^2 t^2) - (1/2pi) sum_{m<=M} (-1)^m psi_m(x^2) psi_m(t^2)|."""
    x, t = to_mp(x), to_mp(t)
    a = psi_laguerre_values(M, x * x)
    b = psi_laguerre_values(M, t * t)
    series = mp.fsum((-1) ** m * a[m] * b[m] for m in range(M + 1)) / (2 * mp.pi)
    return abs(1 / (mp.pi * (1 + x * x * t * t)) - series)


# ---------------------------------------------------------------------------
# coefficient sums
# ---------------------------------------------------------------------------

def c_exact(m: int) -> Fraction:
    """c_m, the coefficients of 1/sqrt(t) = sum c_m psi_m(t)."""
    if m % 2:
        return Fraction(0)
    n = m // 2
    return Fraction(math.comb(2 * n, n), 4**n)


def _log_phi_bound(m: int, n: int):
    # |L_m(y)| <= (1 + y)^m, so |phi_m(2 pi n)| <= exp(-2 pi n) (1 + 4 pi n)^m
    return -2 * mp.pi * n + m * mp.log(1 + 4 * mp.pi * n)


def s_cutoff(M: int, digits: int):
    """(N, tail bound) with sum_{n>N} |phi_m(2 pi n)| below 10^-digits for all m <= M."""
    N = max(1, math.ceil(M / math.pi))
    # beyond N the consecutive bound ratio is <= exp(-2 pi + M/N) <= exp(-pi)
    geo = 1 / (1 - mp.exp(-mp.pi))
    target = -digits * mp.log(10)
    while _log_phi_bound(M, N + 1) + mp.log(geo) > target:
        N += 1
    return N, mp.exp(_log_phi_bound(M, N + 1)) * geo


def s_values(M: int):
    """[s_0, ..., s_M] summed to a common cutoff, with the shared tail bound."""
    P = mp.mp.dps
    N, tail = s_cutoff(M, P + 5)
    with mp.workdps(P + 15):
        cols = [[] for _ in range(M + 1)]
        for n in range(1, N + 1):
            for m, v in enumerate(laguerre_phi_values(M, 2 * mp.pi * n)):
                cols[m].append(v)
        out = [mp.fsum(c) for c in cols]
    return [+v for v in out], tail


def _cos_power_integrals(M: int, X):
    """[int_0^X cos^m] for m = 0..M by the forward reduction formula."""
    c, s = mp.cos(X), mp.sin(X)
    out = [X, s]
    cp = c  # cos^(m-1) X
    for m in range(2, M + 1):
        out.append(cp * s / m + mp.mpf(m - 1) / m * out[m - 2])
        cp *= c
    return out[: M + 1]


def sigma_cutoff(M: int) -> int:
    return max(200, 4 * math.isqrt(M) + 4)


def sigma_values(M: int):
    """[sigma_0, ..., sigma_M] and the largest Euler-Maclaurin remainder estimate.

    Terms n < N are summed directly. The tail n >= N is the integral of
    h_m(x) = 2 (x^2-1)^m/(x^2+1)^(m+1) plus Euler-Maclaurin corrections.
    """
    P = mp.mp.dps
    N = sigma_cutoff(M)
    order = euler_maclaurin_order(N, P + 12)
    with mp.workdps(P + 15):
        target = mp.mpf(10) ** (-(P + 10))
        cols = [[] for _ in range(M + 1)]
        for n in range(1, N):
            n2 = mp.mpf(n * n)
            u = (n2 - 1) / (n2 + 1)
            v = 2 / (n2 + 1)
            for m in range(M + 1):
                cols[m].append(v)
                v *= u
        integrals = _cos_power_integrals(M, 2 * mp.atan(mp.mpf(1) / N))
        # Taylor coefficients at N of u(x) = (x^2-1)/(x^2+1) and w(x) = 2/(x^2+1)
        Nf = mp.mpf(N)
        w = [2 * c for c in taylor_pow([Nf * Nf + 1, 2 * Nf, 1], -1, order)]
        u = taylor_mul([Nf * Nf - 1, 2 * Nf, 1], [c / 2 for c in w], order)
        h = w
        worst = mp.mpf(0)
        out = []
        for m in range(M + 1):
            if m:
                h = taylor_mul(h, u, order)
            tail, last = euler_maclaurin_tail(h, integrals[m], target)
            worst = max(worst, last)
            out.append(mp.fsum(cols[m]) + tail)
    return [+v for v in out], +worst


@dataclass(frozen=True)
class SigmaEntry:
    m: int
    s_m: object
    sigma_m: object
    c_m_exact: Fraction
    c_m: object
    combo: object


@dataclass(frozen=True)
class SigmaTable:
    entries: tuple
    s_tail_bound: object
    sigma_error: object

    @property
    def M(self) -> int:
        return len(self.entries) - 1

    def combos(self):
        return [e.combo for e in self.entries]


@lru_cache(maxsize=8)
def _coeff_tables(M: int, dps: int) -> SigmaTable:
    with mp.workdps(dps):
        s, s_tail = s_values(M)
        sig, sig_err = sigma_values(M)
        entries = []
        for m in range(M + 1):
            c = c_exact(m)
            cm = to_mp(c)
            entries.append(SigmaEntry(m, s[m], sig[m], c, cm, sig[m] - mp.pi * cm))
    return SigmaTable(tuple(entries), s_tail, sig_err)


def coeff_tables(M: int) -> SigmaTable:
    """s_m, sigma_m, c_m and sigma_m - pi c_m for m = 0..M."""
    if M < 0:
        raise ValueError("M must be >= 0")
    return _coeff_tables(M, mp.mp.dps)


# ---------------------------------------------------------------------------
# expansions of f and g
# ---------------------------------------------------------------------------

def f_function(t):
    """f(t) = 1/(exp(2 pi t) - 1) - 1/(2 pi t), evaluated without cancellation for small t."""
    t = to_mp(t)
    z = 2 * mp.pi * t
    extra = max(0, int(-mp.log10(z))) + 5 if z < 1 else 5
    with mp.workdps(mp.mp.dps + extra):
        z = 2 * mp.pi * t
        val = 1 / mp.expm1(z) - 1 / z
    return +val


def g_function(t):
    """g(t) = (1/t) f(1/t)."""
    t = to_mp(t)
    return f_function(1 / t) / t


def expansion_f_check(t, M: int):
    """|f(t) - sum_{m<=M} (s_m - (-1)^m/(2 pi)) psi_m(t)|."""
    table = coeff_tables(M)
    psi = psi_laguerre_values(M, t)
    series = mp.fsum((e.s_m - (-1) ** e.m / (2 * mp.pi)) * psi[e.m] for e in table.entries)
    return abs(f_function(t) - series)


def one_over_2pi_t_check(t, M: int):
    """|1/(2 pi t) - (1/2pi) sum_{m<=M} (-1)^m psi_m(t)|."""
    t = to_mp(t)
    psi = psi_laguerre_values(M, t)
    return abs(1 / (2 * mp.pi * t) - mp.fsum((-1) ** m * v for m, v in enumerate(psi)) / (2 * mp.pi))


def one_over_t_check(t, M: int):
    """|1/t - sum_{m<=M} c_m psi_m(t^2)|, the form used in the expansion of g."""
    t = to_mp(t)
    psi = psi_laguerre_values(M, t * t)
    return abs(1 / t - mp.fsum(to_mp(c_exact(m)) * psi[m] for m in range(0, M + 1, 2)))


def poisson_sides(t):
    """The two sides of the Poisson identity for g, each summed to its own tail bound.

    Left:  (1/t) sum_{n>=1} exp(-2 pi n/t) - 1/(2 pi)      (geometric tail)
    Right: (1/pi) sum_{n>=1} 1/(1+n^2 t^2) - 1/(2t)         (integral plus Euler-Maclaurin tail)
    """
    t = to_mp(t)
    if t <= 0:
        raise DomainError("t must be > 0")
    P = mp.mp.dps
    with mp.workdps(P + 15):
        q = mp.exp(-2 * mp.pi / t)
        terms = []
        term = q
        bound = mp.mpf(10) ** (-(P + 12))
        while term > bound * (1 - q):
            terms.append(term)
            term *= q
        left = mp.fsum(terms) / t - 1 / (2 * mp.pi)

        N = max(200, int(4 / t) + 10)
        order = euler_maclaurin_order(N, P + 14)
        head = mp.fsum(1 / (1 + n * n * t * t) for n in range(1, N))
        a = N * t
        taylor = taylor_pow([1 + a * a, 2 * a * t, t * t], -1, order)
        integral = (mp.pi / 2 - mp.atan(a)) / t
        tail, _ = euler_maclaurin_tail(taylor, integral, mp.mpf(10) ** (-(P + 12)))
        right = (head + tail) / mp.pi - 1 / (2 * t)
    return +left, +right


@dataclass(frozen=True)
class GCheck:
    poisson_residual: object
    expansion_residual: object


def expansion_g_check(t, M: int) -> GCheck:
    """Residuals of the Poisson identity for g and of the expansion of g at t."""
    t = to_mp(t)
    left, right = poisson_sides(t)
    table = coeff_tables(M)
    psi = psi_laguerre_values(M, t * t)
    series = mp.fsum((-1) ** e.m * e.combo * psi[e.m] for e in table.entries) / (2 * mp.pi)
    return GCheck(abs(left - right), abs(g_function(t) - series))


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------

def _strip(s):
    s = to_mp(s)
    if not 0 < mp.re(s) < 1:
        raise DomainError("s must satisfy 0 < Re(s) < 1")
    return s


def laguerre_zeta_partials(s, Ms):
    """{M: (sum_{m<=M} (sigma_m - pi c_m) q_m(s/2), zeta_oracle(s))}. Formal; no convergence claimed."""
    s = _strip(s)
    Ms = sorted(set(Ms))
    table = coeff_tables(Ms[-1])
    ref = zeta_oracle(s)
    q = q_values(Ms[-1], s / 2)
    terms = [e.combo * q[e.m] for e in table.entries]
    return {M: (mp.fsum(terms[: M + 1]), ref) for M in Ms}


def laguerre_zeta_partial(s, M: int):
    return laguerre_zeta_partials(s, [M])[M]


def laguerre_first_variant_partials(s, Ms):
    """{M: (2 (2 pi)^s Gamma(1-s) sum_{m<=M} ((-1)^m s_m - 1/(2 pi)) q_m(s), zeta_oracle(s))}."""
    s = _strip(s)
    Ms = sorted(set(Ms))
    table = coeff_tables(Ms[-1])
    ref = zeta_oracle(s)
    q = q_values(Ms[-1], s)
    pref = 2 * mp.power(2 * mp.pi, s) * mp.gamma(1 - s)
    terms = [((-1) ** e.m * e.s_m - 1 / (2 * mp.pi)) * q[e.m] for e in table.entries]
    return {M: (pref * mp.fsum(terms[: M + 1]), ref) for M in Ms}


# ---------------------------------------------------------------------------
# integral identities
# ---------------------------------------------------------------------------

def _half_line_nodes(scale, m: int):
    edge = scale * (m + 1 + (mp.mp.dps + 10) * mp.log(10))
    return [0] + [edge * j / (m + 2) for j in range(1, m + 3)] + [mp.inf]


def phi_inner(m: int, n: int):
    """int_0^inf phi_m phi_n dx by quadrature."""
    M = max(m, n)

    def f(x):
        v = laguerre_phi_values(M, x)
        return v[m] * v[n]

    return quad_checked(f, _half_line_nodes(mp.mpf(1) / 2, M)).value


def phi_orthogonality_check(m: int, n: int):
    """|int phi_m phi_n - delta_mn / 2|."""
    target = mp.mpf(1) / 2 if m == n else 0
    return abs(phi_inner(m, n) - target)


def convolution_check(m: int, t):
    """|psi_m(t) - 2 (-1)^m int_0^inf k(t/x) phi_m(x) dx/x|, k(y) = exp(-1/y)/y."""
    if m > 12:
        raise ValueError("m must be <= 12")
    t = to_mp(t)
    if t <= 0:
        raise DomainError("t must be > 0")

    def f(x):
        # k(t/x)/x = exp(-x/t)/t
        return mp.exp(-x / t) / t * laguerre_phi(m, x)

    rate = 1 + 1 / t
    val = quad_checked(f, _half_line_nodes(1 / rate, m)).value
    return abs(psi_laguerre(m, t) - 2 * (-1) ** m * val)


def phi_mellin_check(m: int, s):
    """|int_0^inf phi_m(x) x^(s-1) dx - Gamma(s) q_m(s)| for Re(s) > 0."""
    s = to_mp(s)
    if mp.re(s) <= 0:
        raise DomainError("Re(s) must be > 0")
    k = max(1, math.ceil(2 / float(mp.re(s))))

    # x = y^k removes the algebraic singularity at 0
    def f(y):
        if y == 0:
            return mp.mpf(0)
        x = y**k
        return laguerre_phi(m, x) * mp.power(x, s - 1) * k * y ** (k - 1)

    edge = (m + 1 + (mp.mp.dps + 10) * mp.log(10)) ** (mp.mpf(1) / k)
    nodes = [0] + [edge * j / (m + 2) for j in range(1, m + 3)] + [mp.inf]
    val = quad_checked(f, nodes).value
    return abs(val - mp.gamma(s) * q_values(m, s)[m])


def psi_mellin_check(m: int, s):
    """|Mellin(psi_m)(s) - 2 Gamma(s) Gamma(1-s) (-1)^m q_m(s)|."""
    s = _strip(s)
    val = mellin_quadrature(lambda t: psi_laguerre(m, t), s, fold_parity=(-1) ** m).value
    return abs(val - 2 * mp.gamma(s) * mp.gamma(1 - s) * (-1) ** m * q_values(m, s)[m])


def g_mellin_check(s):
    """|Mellin(g)(s) - zeta(s) Gamma(s/2) Gamma(1-s/2) / (2 pi)|."""
    s = _strip(s)
    val = mellin_quadrature(g_function, s).value
    ref = zeta_oracle(s) * mp.gamma(s / 2) * mp.gamma(1 - s / 2) / (2 * mp.pi)
    return abs(val - ref)


def amplitude_ratios(m_lo: int = 64, m_hi: int = 256, window: int = 8):
    """{m: max_{m <= j < m+window} |sigma_j - pi c_j| / sqrt(pi/(2m))} for m_lo <= m <= m_hi."""
    table = coeff_tables(m_hi + window - 1)
    combos = [abs(c) for c in table.combos()]
    return {m: max(combos[m: m + window]) / mp.sqrt(mp.pi / (2 * m)) for m in range(m_lo, m_hi + 1)}
