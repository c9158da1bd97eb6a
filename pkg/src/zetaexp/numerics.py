"""Precision substrate: gamma factors, a reference zeta, and Mellin quadrature.

Real and complex scalars are mpmath ``mpf``/``mpc`` values at the working
precision configured in :mod:`zetaexp.config`.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import mpmath as mp

from .errors import ConvergenceError, PoleError, PrecisionError

# Validated region of the zeta oracle.
ZETA_RE_MIN = 0
ZETA_RE_MAX = 2
ZETA_IM_MAX = 100


def to_mp(x):
    """Convert ints, floats, Fractions, strings and complex numbers to mpmath."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpmathify(x)


def is_nonpositive_integer(z) -> bool:
    z = mp.mpmathify(z)
    return mp.im(z) == 0 and mp.isint(mp.re(z)) and mp.re(z) <= 0


def gamma(z):
    """Complex gamma function at the working precision."""
    z = to_mp(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    return mp.gamma(z)


def log_gamma(z):
    """Principal branch of log Gamma (continuous off the negative real axis)."""
    z = to_mp(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log_gamma has a pole at {z}")
    return mp.loggamma(z)


def abs_gamma_quarter_line(t):
    """|Gamma(1/4 + i t/2)| for real t."""
    t = to_mp(t)
    return mp.exp(mp.re(mp.loggamma(mp.mpc(mp.mpf(1) / 4, t / 2))))


# ---------------------------------------------------------------------------
# zeta oracle
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> tuple:
    """Exact weights (d_n - d_k)/d_n of the Borwein alternating-series scheme."""
    d = []
    acc = 0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    return tuple(Fraction(dn - d[k], dn) for k in range(n))


def eta_term_count(s, digits: int) -> int:
    """Number of terms n guaranteeing |error| < 10**-digits for zeta via eta.

    Uses the bound |err| <= 3 (1 + 2|t|) exp(pi |t| / 2) / ((3 + sqrt 8)**n |1 - 2**(1-s)|),
    valid for Re(s) > 0.
    """
    s = mp.mpmathify(s)
    t = abs(float(mp.im(s)))
    denom = abs(complex(1 - mp.power(2, 1 - s)))
    need = digits * math.log(10) + math.log(3 * (1 + 2 * t)) + math.pi * t / 2 - math.log(denom)
    return max(4, math.ceil(need / math.log(3 + math.sqrt(8))) + 1)


def _zeta_eta(s):
    P = mp.mp.dps
    t = abs(float(mp.im(s)))
    n = eta_term_count(s, P + 5)
    guard = math.ceil(math.pi * t / 2 / math.log(10)) + 15
    with mp.workdps(P + guard):
        s = mp.mpmathify(s)
        weights = _borwein_weights(n)
        terms = []
        for k, w in enumerate(weights):
            term = to_mp(w) * mp.power(k + 1, -s)
            terms.append(term if k % 2 == 0 else -term)
        eta = mp.fsum(terms)
        value = eta / (1 - mp.power(2, 1 - s))
    return +value


def _zeta_euler_maclaurin(s):
    """zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2 + sum_k B_2k/(2k)! (s)_(2k-1) N^(-s-2k+1)."""
    P = mp.mp.dps
    with mp.workdps(P + 15):
        s = mp.mpmathify(s)
        target = mp.mpf(10) ** (-(P + 8))
        N = max(16, int(abs(s)) + 1)
        while True:
            head = mp.fsum(mp.power(n, -s) for n in range(1, N))
            base = mp.power(N, -s)
            total = [head, N * base / (s - 1), base / 2]
            rising = s
            Npow = base / N
            prev = None
            ok = False
            for k in range(1, 4 * P + 40):
                term = mp.bernoulli(2 * k) / mp.factorial(2 * k) * rising * Npow
                size = abs(term)
                if prev is not None and size > prev:
                    break
                total.append(term)
                if size < target * max(1, abs(head)):
                    ok = True
                    break
                prev = size
                rising *= (s + 2 * k - 1) * (s + 2 * k)
                Npow /= N * N
            if ok:
                return +mp.fsum(total)
            N *= 2


def zeta_oracle(s, method: str = "eta"):
    """Reference Riemann zeta for 0 < Re(s) <= 2, |Im(s)| <= 100.

    ``method="eta"`` sums the Dirichlet eta series with Borwein's weights and
    divides by 1 - 2**(1-s); see :func:`eta_term_count` for the term count.
    Near the zeros of that factor on Re(s) = 1 the Euler-Maclaurin route is
    used instead. ``method="euler_maclaurin"`` forces the fallback.
    """
    s = to_mp(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    sigma, t = mp.re(s), mp.im(s)
    if not (ZETA_RE_MIN < sigma <= ZETA_RE_MAX) or abs(t) > ZETA_IM_MAX:
        raise PrecisionError(
            f"zeta_oracle is validated for 0 < Re(s) <= 2, |Im(s)| <= 100; got {mp.nstr(s, 10)}"
        )
    if method == "euler_maclaurin":
        return _zeta_euler_maclaurin(s)
    if method != "eta":
        raise ValueError(f"unknown zeta method {method!r}")
    if abs(1 - mp.power(2, 1 - s)) < mp.mpf(10) ** (-(mp.mp.dps // 4)):
        return _zeta_euler_maclaurin(s)
    return _zeta_eta(s)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureResult:
    value: object
    abs_error_estimate: object
    nodes_used: int

    def __post_init__(self):
        if self.abs_error_estimate < 0 or self.nodes_used <= 0:
            raise ValueError("invalid quadrature result")


class _Counted:
    def __init__(self, f):
        self.f = f
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self.f(x)


def quad_checked(f, points, target=None, method="tanh-sinh", max_degree=10, guard=15):
    """mpmath quadrature raising ConvergenceError when the estimate misses ``target``.

    Integration runs with ``guard`` extra digits; ``target`` defaults to 10**(5-P).
    """
    P = mp.mp.dps
    if target is None:
        target = mp.mpf(10) ** (5 - P)
    g = _Counted(f)
    with mp.workdps(P + guard):
        value, err = mp.quad(g, points, error=True, method=method, maxdegree=max_degree)
        err = max(abs(err), mp.mpf(10) ** (-(P + guard - 5)) * (1 + abs(value)))
    value, err = +value, +err
    if err > target:
        raise ConvergenceError(
            f"quadrature error estimate {mp.nstr(err, 5)} exceeds target {mp.nstr(target, 5)}",
            tolerance=target,
            achieved=err,
        )
    return QuadratureResult(value, err, max(1, g.calls))


def _endpoint_power(sigma) -> int:
    # v = y**k pushes the algebraic endpoint powers v**(-s), v**(s-1) below the
    # smallest tanh-sinh node contribution at the working precision.
    gap = min(sigma, 1 - sigma)
    return max(2, math.ceil(1.5 / float(gap)))


def mellin_quadrature(f, s, fold_parity: int = 0, target=None, max_degree: int = 10) -> QuadratureResult:
    """Numerical Mellin transform  int_0^inf t**(s-1) f(t) dt  for 0 < Re(s) < 1.

    ``f`` must be bounded at 0 and O(1/t) at infinity. With ``fold_parity`` = +1 or -1
    the integrand is assumed to satisfy f(1/t) = parity * t * f(t) and the integral is
    folded to  int_1^inf (t**(s-1) + parity * t**(-s)) f(t) dt,  mapped to (0, 1] by
    u = (t**2 - 1)/(t**2 + 1), u = 1 - v**2 and finally v = y**k.
    With ``fold_parity`` = 0 the two halves (0, 1) and (1, inf) are mapped to (0, 1]
    separately (t = y**k and t = 1/y**k).
    """
    s = to_mp(s)
    sigma = mp.re(s)
    if not 0 < sigma < 1:
        raise PrecisionError("mellin_quadrature requires 0 < Re(s) < 1")
    if fold_parity not in (-1, 0, 1):
        raise ValueError("fold_parity must be -1, 0 or +1")
    k = _endpoint_power(sigma)

    if fold_parity:
        eps = fold_parity

        def integrand(y):
            if y == 0:
                return mp.mpf(0)
            v = y**k
            w = mp.sqrt(2 - v * v)
            t = w / v
            # dt = 2 dv / (v**2 w),  dv = k y**(k-1) dy
            jac = 2 * k * y ** (k - 1) / (v * v * w)
            return (mp.power(t, s - 1) + eps * mp.power(t, -s)) * f(t) * jac

        return quad_checked(integrand, [0, 1], target=target, max_degree=max_degree)

    def inner(y):
        if y == 0:
            return mp.mpf(0)
        t = y**k
        return mp.power(t, s - 1) * f(t) * k * y ** (k - 1)

    def outer(y):
        if y == 0:
            return mp.mpf(0)
        x = y**k
        return mp.power(x, -s - 1) * f(1 / x) * k * y ** (k - 1)

    a = quad_checked(inner, [0, 1], target=target, max_degree=max_degree)
    b = quad_checked(outer, [0, 1], target=target, max_degree=max_degree)
    return QuadratureResult(a.value + b.value, a.abs_error_estimate + b.abs_error_estimate,
                            a.nodes_used + b.nodes_used)


# ---------------------------------------------------------------------------
# series helpers
# ---------------------------------------------------------------------------

def taylor_pow(a, alpha, order: int):
    """Coefficients of (sum a_j e**j)**alpha up to e**order (requires a[0] != 0)."""
    a = list(a) + [0] * (order + 1 - len(a))
    f = [mp.power(a[0], alpha)]
    for n in range(1, order + 1):
        acc = mp.fsum(((alpha + 1) * j - n) * a[j] * f[n - j] for j in range(1, n + 1) if a[j])
        f.append(acc / (n * a[0]))
    return f


def taylor_mul(a, b, order: int):
    return [mp.fsum(a[j] * b[n - j] for j in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1))
            for n in range(order + 1)]


def euler_maclaurin_order(distance, digits: int) -> int:
    """Taylor order 2k-1 with (2k)!/(2 pi distance)^(2k) < 10**-digits.

    ``distance`` is the distance from the expansion point to the nearest
    complex singularity of the summand.
    """
    scale = 2 * math.pi * float(distance)
    logterm = 0.0
    k = 0
    while True:
        k += 1
        logterm += math.log((2 * k - 1) * (2 * k)) - 2 * math.log(scale)
        if logterm < -digits * math.log(10):
            return 2 * k + 1
        if k > 10 * digits:
            raise ValueError("expansion point too close to a singularity")


def euler_maclaurin_tail(taylor, integral, target):
    """sum_{n>=N} h(n) from the Taylor coefficients of h at N and int_N^inf h.

    Returns ``(value, last_correction)``; stops once a correction drops below
    ``target`` or the asymptotic terms start to grow.
    """
    total = [integral, taylor[0] / 2]
    last = abs(taylor[0])
    for k in range(1, (len(taylor) + 1) // 2 + 1):
        j = 2 * k - 1
        if j >= len(taylor):
            break
        # B_2k/(2k)! * h^(2k-1)(N) with h^(j)(N) = j! a_j
        term = -mp.bernoulli(2 * k) / (2 * k) * taylor[j]
        if abs(term) > last and k > 1:
            break
        total.append(term)
        last = abs(term)
        if last < target:
            break
    return mp.fsum(total), last
