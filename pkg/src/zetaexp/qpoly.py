"""Exact polynomial families attached to the Mellin transforms of Hermite and
Laguerre functions.

Q_m(s) = sum_k (-1)^(m-k) m!/(m-k)! 2^2k/(2k)! s(s+2)...(s+2k-2) = (-1)^m 2F1(-m, s/2; 1/2; 2)
q_m(s) = 2F1(-m, s; 1; 2)

Both satisfy three-term recurrences (Gauss contiguous relations in the first
parameter) that are used for fast, stable numeric evaluation at large m:

    (2m+1) Q_{m+1} = (2s-1) Q_m + 2m Q_{m-1}
    (m+1)  q_{m+1} = (1-2s) q_m + m q_{m-1}
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
import json
import math

import mpmath as mp

from .errors import FunctionalEquationViolation, RootFindingError
from .numerics import abs_gamma_quarter_line, quad_checked, to_mp


class Family(str, Enum):
    Q = "Q"
    q = "q"


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul_linear(p, a, b):
    """p(s) * (a + b s)."""
    out = [Fraction(0)] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i] += a * c
        out[i + 1] += b * c
    return out


def _poly_add_scaled(acc, p, c):
    if len(acc) < len(p):
        acc.extend([Fraction(0)] * (len(p) - len(acc)))
    for i, x in enumerate(p):
        acc[i] += c * x
    return acc


@dataclass(frozen=True)
class BigRationalPoly:
    """Exact polynomial with Fraction coefficients in ascending degree."""
    coeffs: tuple
    family: Family
    index_m: int

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in _trim(self.coeffs))
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if len(coeffs) - 1 != self.index_m:
            raise ValueError(f"degree {len(coeffs) - 1} does not match index {self.index_m}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, s):
        """Horner evaluation; exact for Fraction/int input, mpmath otherwise."""
        if isinstance(s, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * s + c
            return acc
        s = to_mp(s)
        acc = mp.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * s + to_mp(c)
        return acc

    def compose_affine(self, a, b):
        """Coefficients of p(a + b x) (exact, a and b rational)."""
        a, b = Fraction(a), Fraction(b)
        out = [Fraction(0)]
        for c in reversed(self.coeffs):
            out = _poly_mul_linear(out, a, b)
            out[0] += c
        return tuple(_trim(out))

    def on_critical_line(self):
        """Exact (real, imaginary) coefficient lists of t -> p(1/2 + i t)."""
        n = self.degree
        re = [Fraction(0)] * (n + 1)
        im = [Fraction(0)] * (n + 1)
        half = Fraction(1, 2)
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for j in range(k + 1):
                term = c * math.comb(k, j) * half ** (k - j)
                # i^j
                r = j % 4
                if r == 0:
                    re[j] += term
                elif r == 1:
                    im[j] += term
                elif r == 2:
                    re[j] -= term
                else:
                    im[j] -= term
        return re, im

    def to_json_obj(self):
        return {
            "family": self.family.value,
            "m": self.index_m,
            "coeffs": [{"num": str(c.numerator), "den": str(c.denominator)} for c in self.coeffs],
        }

    @classmethod
    def from_json_obj(cls, obj):
        coeffs = [Fraction(int(c["num"]), int(c["den"])) for c in obj["coeffs"]]
        return cls(tuple(coeffs), Family(obj["family"]), int(obj["m"]))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str):
        return cls.from_json_obj(json.loads(text))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _even_rising(k: int) -> tuple:
    """s(s+2)...(s+2(k-1))."""
    if k == 0:
        return (Fraction(1),)
    return tuple(_poly_mul_linear(list(_even_rising(k - 1)), Fraction(2 * (k - 1)), Fraction(1)))


@lru_cache(maxsize=None)
def _rising(k: int, scale: Fraction) -> tuple:
    """(scale*s)_k = (scale s)(scale s + 1)...(scale s + k - 1)."""
    if k == 0:
        return (Fraction(1),)
    return tuple(_poly_mul_linear(list(_rising(k - 1, scale)), Fraction(k - 1), scale))


def build_Q(m: int) -> BigRationalPoly:
    """Q_m from the explicit sum over s(s+2)...(s+2k-2)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    acc = [Fraction(0)]
    for k in range(m + 1):
        c = Fraction((-1) ** (m - k) * math.perm(m, k) * 4**k, math.factorial(2 * k))
        _poly_add_scaled(acc, _even_rising(k), c)
    return BigRationalPoly(tuple(acc), Family.Q, m)


def _hyp_terminating(m: int, scale: Fraction, c_param: Fraction, z: Fraction):
    """Coefficients of 2F1(-m, scale*s; c_param; z) as a polynomial in s."""
    acc = [Fraction(0)]
    coef = Fraction(1)
    for k in range(m + 1):
        _poly_add_scaled(acc, _rising(k, scale), coef)
        # (-m)_{k+1} / ((c)_{k+1} (k+1)!) z^{k+1}
        coef = coef * (k - m) * z / ((c_param + k) * (k + 1))
    return acc


def build_Q_hypergeometric(m: int) -> BigRationalPoly:
    """Q_m = (-1)^m 2F1(-m, s/2; 1/2; 2) as an exact terminating sum."""
    acc = _hyp_terminating(m, Fraction(1, 2), Fraction(1, 2), Fraction(2))
    sign = (-1) ** m
    return BigRationalPoly(tuple(sign * c for c in acc), Family.Q, m)


def build_q(m: int) -> BigRationalPoly:
    """q_m = 2F1(-m, s; 1; 2)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return BigRationalPoly(tuple(_hyp_terminating(m, Fraction(1), Fraction(1), Fraction(2))), Family.q, m)


def q_half_argument(m: int):
    """Exact coefficients of s -> q_m(s/2)."""
    return build_q(m).compose_affine(0, Fraction(1, 2))


def functional_equation_check(m: int) -> bool:
    """Exact check that Q_m(1 - s) = (-1)^m Q_m(s)."""
    Q = build_Q(m)
    reflected = Q.compose_affine(1, -1)
    sign = (-1) ** m
    if tuple(reflected) != tuple(sign * c for c in Q.coeffs):
        raise FunctionalEquationViolation(f"Q_{m}(1-s) != (-1)^{m} Q_{m}(s)")
    return True


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

def Q_values(M: int, s):
    """[Q_0(s), ..., Q_M(s)] by the three-term recurrence."""
    s = to_mp(s)
    out = [mp.mpf(1)]
    if M == 0:
        return out
    x = 2 * s - 1
    out.append(x)
    for k in range(1, M):
        out.append((x * out[k] + 2 * k * out[k - 1]) / (2 * k + 1))
    return out


def q_values(M: int, s):
    """[q_0(s), ..., q_M(s)] by the three-term recurrence."""
    s = to_mp(s)
    out = [mp.mpf(1)]
    if M == 0:
        return out
    x = 1 - 2 * s
    out.append(x)
    for k in range(1, M):
        out.append((x * out[k] + k * out[k - 1]) / (k + 1))
    return out


def Q_value(m: int, s):
    return Q_values(m, s)[m]


def q_value(m: int, s):
    return q_values(m, s)[m]


def Q_critical_line_real(M: int, t):
    """[r_0(t), ..., r_M(t)] with Q_m(1/2 + i t) = i^m r_m(t), r_m real."""
    t = to_mp(t)
    out = [mp.mpf(1)]
    if M == 0:
        return out
    out.append(2 * t)
    for k in range(1, M):
        out.append((2 * t * out[k] - 2 * k * out[k - 1]) / (2 * k + 1))
    return out


# ---------------------------------------------------------------------------
# roots on the critical line
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    roots_t: tuple
    max_residual: object
    all_real_confirmed: bool
    family: Family = Family.Q
    index_m: int = 0


def real_line_polynomial(poly: BigRationalPoly):
    """Exact real polynomial p(t) with poly(1/2 + i t) = i^parity p(t).

    Raises if neither the imaginary nor the real part vanishes identically.
    """
    re, im = poly.on_critical_line()
    if all(c == 0 for c in im):
        return tuple(_trim(re)), 0
    if all(c == 0 for c in re):
        return tuple(_trim(im)), 1
    raise ValueError(f"{poly.family.value}_{poly.index_m}(1/2 + it) is not real up to a unit")


def _polish(coeffs, z, tol, max_iter=200):
    dcoeffs = [k * c for k, c in enumerate(coeffs)][1:]
    for _ in range(max_iter):
        p = mp.polyval(coeffs[::-1], z)
        dp = mp.polyval(dcoeffs[::-1], z)
        if dp == 0:
            break
        step = p / dp
        z -= step
        if abs(step) <= tol * max(1, abs(z)):
            return z, True
    return z, False


def polynomial_roots(coeffs_exact, digits: int | None = None):
    """Roots of an exact rational polynomial.

    Companion-matrix eigenvalues at 2P digits, nudged off the real axis and then
    Newton-polished at P + 10 digits in complex arithmetic, so realness is an outcome
    rather than an assumption.
    """
    P = mp.mp.dps if digits is None else digits
    n = len(coeffs_exact) - 1
    if n == 0:
        return []
    lead = Fraction(coeffs_exact[-1])
    with mp.workdps(2 * P):
        C = mp.zeros(n, n)
        for i in range(n):
            C[0, i] = -to_mp(Fraction(coeffs_exact[n - 1 - i]) / lead)
        for i in range(1, n):
            C[i, i - 1] = 1
        # mpmath returns (E, ER, EL) for 1x1 input regardless of the flags
        eigs = [C[0, 0]] if n == 1 else mp.eig(C, left=False, right=False)
    roots = []
    with mp.workdps(P + 10):
        coeffs = [to_mp(Fraction(c)) for c in coeffs_exact]
        nudge = mp.mpf(10) ** (-(P // 3))
        tol = mp.mpf(10) ** (-(P + 5))
        for e in eigs:
            z0 = mp.mpc(e) + mp.mpc(0, nudge * max(1, abs(e)))
            z, ok = _polish(coeffs, z0, tol)
            if not ok:
                raise RootFindingError(f"Newton polishing stalled near {mp.nstr(e, 15)}")
            roots.append(z)
    return roots


def critical_line_roots(two_m: int, family: Family = Family.Q) -> RootSet:
    """Roots t of Q_two_m(1/2 + i t) (or q_two_m) at the working precision.

    Odd indices are accepted as a diagnostic: the line polynomial is then
    purely imaginary and i^-1 times it is used.
    """
    if family == Family.Q and two_m > 60:
        raise ValueError("two_m must be <= 60")
    P = mp.mp.dps
    poly = build_Q(two_m) if family == Family.Q else build_q(two_m)
    p, _ = real_line_polynomial(poly)
    roots = polynomial_roots(p)
    with mp.workdps(P + 10):
        pm = [to_mp(c) for c in p]
        scale = mp.fsum(abs(c) for c in pm)
        residuals = []
        for z in roots:
            residuals.append(abs(mp.polyval(pm[::-1], mp.re(z))) / max(1, scale * max(1, abs(z)) ** len(pm)))
    bound = mp.mpf(10) ** (10 - P)
    real = all(abs(mp.im(z)) < bound for z in roots)
    ts = tuple(sorted(+mp.re(z) for z in roots))
    max_res = +max(residuals) if residuals else mp.mpf(0)
    return RootSet(ts, max_res, real, family, two_m)


def roots_interlace(a, b) -> bool:
    """True if the sorted roots ``b`` (one more than ``a``, or two more for the even
    line polynomials) strictly interlace ``a``: b a b a ... b with one a per gap."""
    merged = sorted([(x, "a") for x in a] + [(x, "b") for x in b])
    labels = [lab for _, lab in merged]
    if labels[0] != "b" or labels[-1] != "b" or "aa" in "".join(labels):
        return False
    xs = [x for x, _ in merged]
    return all(x < y for x, y in zip(xs, xs[1:]))


# ---------------------------------------------------------------------------
# orthogonality
# ---------------------------------------------------------------------------

def gamma_weight_cutoff(digits: int, degree: int = 0):
    """T* beyond which |Gamma(1/4 + it/2)|^2 (1+|t|)^degree < 10^(-digits-10)."""
    T = mp.mpf(2) * (digits + 10) * mp.log(10) / mp.pi
    while 2 * mp.log(abs_gamma_quarter_line(T)) + degree * mp.log(1 + T) > -(digits + 10) * mp.log(10):
        T += 2
    return T


def parseval_inner(m1: int, m2: int, tol=mp.mpf("1e-14")):
    """(1/(4 pi sqrt pi)) int |Gamma(1/4+it/2)|^2 (Q_m1/m1!)(conj Q_m2/m2!)(1/2+it) dt."""
    P = mp.mp.dps
    T = gamma_weight_cutoff(P, m1 + m2)
    M = max(m1, m2)
    norm = mp.factorial(m1) * mp.factorial(m2)
    # Q_m(1/2+it) = i^m r_m(t)  =>  Q_m1 conj(Q_m2) = i^(m1-m2) r_m1 r_m2
    phase = mp.mpc(0, 1) ** (m1 - m2)

    def integrand(t):
        r = Q_critical_line_real(M, t)
        return abs_gamma_quarter_line(t) ** 2 * r[m1] * r[m2]

    panels = int(mp.ceil(T / 4))
    nodes = [T * j / panels for j in range(-panels, panels + 1)]
    res = quad_checked(integrand, nodes, target=tol, method="gauss-legendre", guard=5)
    return res.value * phase / (4 * mp.pi * mp.sqrt(mp.pi) * norm)


def parseval_orthogonality_check(m1: int, m2: int):
    """|LHS - RHS| with RHS = delta_{m1 m2} 2^2m / (sqrt 2 (2m)!)."""
    if m1 > 8 or m2 > 8:
        raise ValueError("m1, m2 must be <= 8")
    lhs = parseval_inner(m1, m2)
    rhs = mp.mpf(4) ** m1 / (mp.sqrt(2) * mp.factorial(2 * m1)) if m1 == m2 else mp.mpf(0)
    return abs(lhs - rhs)
