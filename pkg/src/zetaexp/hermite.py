"""Hermite polynomials, the Hermite functions Phi_k(x) = H_k(sqrt(2 pi) x) exp(-pi x^2),
and their normalized integer lattice sums S_2m.

Phi_k is evaluated through the orthonormal recurrence

    h_{k+1}(y) = sqrt(2/(k+1)) y h_k(y) - sqrt(k/(k+1)) h_{k-1}(y),
    h_0(y) = pi^(-1/4) exp(-y^2/2),  y = sqrt(2 pi) x,

which keeps every intermediate O(1) (Cramer's inequality). Phi_k is recovered as
Phi_k = h_k * sqrt(2^k k! sqrt(pi)); the normalized value (2^-2m / m!) Phi_2m is
h_2m * pi^(1/4) * sqrt(binom(2m, m) / 4^m), never forming H_2m itself.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import mpmath as mp

from .numerics import quad_checked, to_mp

# Cramer's constant: |Phi_k(x)| <= K 2^(k/2) sqrt(k!) for real x.
CRAMER_K = mp.mpf("1.086435")


@dataclass(frozen=True)
class HermiteEval:
    m: int
    x: object
    phi_norm: object
    log_scale_used: bool = False


@dataclass(frozen=True)
class LatticeSumResult:
    value: object
    radius: int
    tail_bound: object


def hermite_poly(m: int, x, exact: bool = False):
    """H_m(x) by H_{k+1} = 2x H_k - 2k H_{k-1}.

    With ``exact=True`` and an int/Fraction argument the result is an exact Fraction.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if exact:
        x = Fraction(x)
    else:
        x = to_mp(x)
    a, b = (Fraction(1) if exact else mp.mpf(1)), 2 * x
    if m == 0:
        return a
    for k in range(1, m):
        a, b = b, 2 * x * b - 2 * k * a
    return b


@lru_cache(maxsize=8)
def _recurrence_coefficients(kmax: int, dps: int):
    with mp.workdps(dps):
        return tuple((mp.sqrt(mp.mpf(2) / (k + 1)), mp.sqrt(mp.mpf(k) / (k + 1))) for k in range(kmax + 1))


def orthonormal_hermite_values(kmax: int, x):
    """[h_0(y), ..., h_kmax(y)] with y = sqrt(2 pi) x (orthonormal Hermite functions)."""
    x = to_mp(x)
    coef = _recurrence_coefficients(max(kmax, 1), mp.mp.dps)
    y = mp.sqrt(2 * mp.pi) * x
    a = mp.power(mp.pi, -0.25) * mp.exp(-y * y / 2)
    out = [a]
    if kmax == 0:
        return out
    b = mp.sqrt(2) * y * a
    out.append(b)
    for k in range(1, kmax):
        c1, c2 = coef[k]
        a, b = b, c1 * y * b - c2 * a
        out.append(b)
    return out


def _phi_scale(k: int):
    """sqrt(2^k k! sqrt(pi)), the factor turning h_k into Phi_k."""
    return mp.sqrt(mp.mpf(2) ** k * mp.factorial(k) * mp.sqrt(mp.pi))


def _norm_scale(m: int):
    """pi^(1/4) sqrt(binom(2m, m) / 4^m): turns h_2m into (2^-2m/m!) Phi_2m."""
    return mp.power(mp.pi, 0.25) * mp.sqrt(mp.mpf(math.comb(2 * m, m)) / mp.mpf(4) ** m)


def hermite_function(k: int, x):
    """Phi_k(x) = H_k(sqrt(2 pi) x) exp(-pi x^2)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return orthonormal_hermite_values(k, x)[k] * _phi_scale(k)


def phi_norm(m: int, x):
    """(2^-2m / m!) Phi_2m(x)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return orthonormal_hermite_values(2 * m, x)[2 * m] * _norm_scale(m)


def hermite_eval(m: int, x) -> HermiteEval:
    return HermiteEval(m=m, x=to_mp(x), phi_norm=phi_norm(m, x), log_scale_used=True)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def log_b1_bound(m: int):
    """log of K 2^m sqrt((2m)!), the uniform bound on |Phi_2m|."""
    return mp.log(CRAMER_K) + m * mp.log(2) + mp.loggamma(2 * m + 1) / 2


def log_b2_bound(m: int, x):
    """log of ((2m)!/m!) exp(2x sqrt(2 pi m)) exp(-pi x^2), valid for x > 0."""
    x = to_mp(x)
    return (mp.loggamma(2 * m + 1) - mp.loggamma(m + 1)
            + 2 * x * mp.sqrt(2 * mp.pi * m) - mp.pi * x * x)


def central_ratio(m: int):
    """(2m)! 2^-2m / (m!)^2."""
    return mp.mpf(math.comb(2 * m, m)) / mp.mpf(4) ** m


def lattice_radius(two_m: int, digits: int | None = None) -> tuple[int, object]:
    """Smallest radius R >= ceil(2 sqrt(2m)) whose tail bound beats 10**-digits.

    For |n| >= 2 sqrt(2m) the B2 estimate gives |(2^-2m/m!) Phi_2m(n)| <=
    central_ratio(m) exp(-pi |n|); summing both sides beyond R yields
    2 central_ratio(m) exp(-pi (R+1)) / (1 - exp(-pi)).
    """
    if two_m % 2 or two_m < 0:
        raise ValueError("two_m must be even and >= 0")
    m = two_m // 2
    digits = mp.mp.dps if digits is None else digits
    start = max(1, math.ceil(2 * math.sqrt(two_m)))
    pref = 2 * central_ratio(m) / (1 - mp.exp(-mp.pi))
    target = mp.mpf(10) ** (-digits)
    R = start
    while pref * mp.exp(-mp.pi * (R + 1)) >= target:
        R += 1
    return R, pref * mp.exp(-mp.pi * (R + 1))


def lattice_sums_S(two_m_values) -> dict:
    """Batch version of :func:`lattice_sum_S` sharing one recurrence per lattice point."""
    two_ms = sorted(set(two_m_values))
    if not two_ms:
        return {}
    for tm in two_ms:
        if tm % 2 or tm < 0:
            raise ValueError("two_m must be even and >= 0")
    radii = {tm: lattice_radius(tm) for tm in two_ms}
    Rmax = max(r for r, _ in radii.values())
    kmax = two_ms[-1]
    P = mp.mp.dps
    with mp.workdps(P + 10):
        rows = [orthonormal_hermite_values(kmax, n) for n in range(Rmax + 1)]
        out = {}
        for tm in two_ms:
            R, tail = radii[tm]
            col = [rows[n][tm] for n in range(1, R + 1)]
            total = rows[0][tm] + 2 * mp.fsum(col)
            out[tm] = (total * _norm_scale(tm // 2), R, tail)
    return {tm: LatticeSumResult(+v, R, +tail) for tm, (v, R, tail) in out.items()}


def lattice_sum_S(two_m: int) -> LatticeSumResult:
    """S_2m = (2^-2m / m!) sum_{n in Z} Phi_2m(n), summed as Phi(0) + 2 sum_{n>=1}."""
    return lattice_sums_S([two_m])[two_m]


def abs_lattice_sum(m: int, start=0):
    """(2^-2m/m!) sum_{|n| >= start} |Phi_2m(n)| (to the same rigorous radius)."""
    R, _ = lattice_radius(2 * m)
    R = max(R, start)
    with mp.workdps(mp.mp.dps + 10):
        vals = [abs(phi_norm(m, n)) for n in range(max(start, 0), R + 1)]
        total = 2 * mp.fsum(vals)
        if start <= 0:
            total -= vals[0]
    return +total


def phi_integral_identity_check(m: int):
    """int_R Phi_2m(x) dx - (2m)!/m! by quadrature (absolute difference)."""
    if m > 50:
        raise ValueError("m must be <= 50")
    P = mp.mp.dps
    exact = math.factorial(2 * m) // math.factorial(m)
    # absolute target 10^(5-P) needs the digits of (2m)!/m! on top of P
    extra = len(str(exact)) + 5
    with mp.workdps(P + extra):
        half = mp.sqrt(mp.mpf(2 * m + 1) / mp.pi)
        edge = half + 12
        nodes = [0] + [edge * j / (2 * m + 2) for j in range(1, 2 * m + 3)] + [mp.inf]
        res = quad_checked(lambda x: hermite_function(2 * m, x), nodes,
                           target=mp.mpf(10) ** (5 - P - extra), method="gauss-legendre")
        diff = 2 * res.value - exact
    return +diff


def phi_square_norm(m: int):
    """int_R Phi_2m(x)^2 dx by quadrature (for the normalization 2^2m (2m)!/sqrt(2))."""
    P = mp.mp.dps
    with mp.workdps(P + 10):
        edge = mp.sqrt(mp.mpf(2 * m + 1) / mp.pi) + 10
        nodes = [0] + [edge * j / (2 * m + 2) for j in range(1, 2 * m + 3)] + [mp.inf]
        res = quad_checked(lambda x: hermite_function(2 * m, x) ** 2, nodes,
                           target=mp.mpf(10) ** (5 - P) * mp.mpf(4) ** m * mp.factorial(2 * m),
                           method="gauss-legendre")
    return 2 * res.value
