"""The rational-algebraic basis Psi_m on the sector |arg t| < pi/4, the disk map T,
the theta function G and the expansion coefficients of G(t) - 1 - 1/t.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
import math

import mpmath as mp

from .errors import DomainError
from .hermite import lattice_sums_S, hermite_function
from .numerics import quad_checked, to_mp


class Basis(str, Enum):
    PSI_EVEN = "PSI_EVEN"
    PSI_ALL = "PSI_ALL"
    LAGUERRE_PSI = "LAGUERRE_PSI"
    Q_POLY = "Q_POLY"
    q_POLY = "q_POLY"


@dataclass(frozen=True)
class SectorPoint:
    """A point of S = {r e^(i theta): r > 0, |theta| < pi/4}.

    Points closer than 10^(-P/2) to the boundary rays are rejected.
    """
    t: object

    def __post_init__(self):
        t = to_mp(self.t)
        object.__setattr__(self, "t", t)
        if t == 0:
            raise DomainError("t = 0 is not in the sector")
        margin = mp.mpf(10) ** (-(mp.mp.dps // 2))
        if abs(mp.arg(t)) >= mp.pi / 4 - margin:
            raise DomainError(f"{mp.nstr(t, 10)} is outside the sector |arg t| < pi/4")


def as_sector_point(t) -> SectorPoint:
    return t if isinstance(t, SectorPoint) else SectorPoint(t)


def disk_variable(t):
    """u = (t^2 - 1)/(t^2 + 1), the disk coordinate of a sector point."""
    t = as_sector_point(t).t
    return (t * t - 1) / (t * t + 1)


def psi(m: int, t):
    """Psi_m(t) = sqrt(2) ((t^2-1)/(t^2+1))^m / sqrt(1+t^2), principal square root."""
    if m < 0:
        raise ValueError("m must be >= 0")
    t = as_sector_point(t).t
    t2 = t * t
    val = mp.sqrt(2) * ((t2 - 1) / (t2 + 1)) ** m / mp.sqrt(1 + t2)
    return mp.re(val) if mp.im(t) == 0 else val


def psi_values(M: int, t):
    """[Psi_0(t), ..., Psi_M(t)] sharing the common factors."""
    t = as_sector_point(t).t
    t2 = t * t
    u = (t2 - 1) / (t2 + 1)
    v = mp.sqrt(2) / mp.sqrt(1 + t2)
    if mp.im(t) == 0:
        u, v = mp.re(u), mp.re(v)
    out = [v]
    for _ in range(M):
        out.append(out[-1] * u)
    return out


def t_transform(f, u):
    """Tf(u) = f(sqrt((1+u)/(1-u))) / sqrt(1-u) for |u| < 1.

    ``f`` receives a :class:`SectorPoint`.
    """
    u = to_mp(u)
    if abs(u) >= 1:
        raise DomainError("t_transform requires |u| < 1")
    t = mp.sqrt((1 + u) / (1 - u))
    return f(SectorPoint(t)) / mp.sqrt(1 - u)


def theta_terms(t) -> int:
    """N = ceil(sqrt(P ln 10 / (pi Re t^2))) + 2 terms of the theta series."""
    t = as_sector_point(t).t
    a = mp.re(t * t)
    return int(mp.ceil(mp.sqrt(mp.mp.dps * mp.log(10) / (mp.pi * a)))) + 2


def theta(t):
    """G(t) = sum_{n in Z} exp(-pi n^2 t^2) on the sector."""
    t = as_sector_point(t).t
    t2 = t * t
    a = mp.re(t2)
    P = mp.mp.dps
    cutoff = (P + 20) * mp.log(10)
    N = theta_terms(t)
    with mp.workdps(P + 10):
        terms = []
        for n in range(1, N + 1):
            if mp.pi * n * n * a > cutoff:
                break
            terms.append(mp.exp(-mp.pi * n * n * t2))
        val = 1 + 2 * mp.fsum(terms)
    return +(mp.re(val) if mp.im(t) == 0 else val)


def theta_tail_bound(t):
    """Bound on the terms dropped by :func:`theta`."""
    t = as_sector_point(t).t
    a = mp.re(t * t)
    N = theta_terms(t)
    x = mp.exp(-mp.pi * a)
    return 2 * x ** ((N + 1) ** 2) / (1 - x ** (2 * N + 3))


def theta_minus_singular(t):
    """G(t) - 1 - 1/t."""
    t = as_sector_point(t).t
    return theta(t) - 1 - 1 / t


# ---------------------------------------------------------------------------
# expansion series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionSeries:
    """coeffs[m] multiplies the m-th basis function (Psi_2m for PSI_EVEN)."""
    basis_tag: Basis
    coeffs: tuple
    M: int
    provenance: str = ""
    exact: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.coeffs) != self.M + 1:
            raise ValueError("coeffs must have exactly M+1 entries")

    def factorial_scaled(self):
        """Coefficients a_2m of Psi_2m/(2m)!, i.e. coeffs[m] * (2m)!."""
        if self.basis_tag != Basis.PSI_EVEN:
            raise ValueError("factorial scaling is defined for PSI_EVEN series")
        if self.exact is not None:
            return [c * math.factorial(2 * m) for m, c in enumerate(self.exact)]
        return [c * mp.factorial(2 * m) for m, c in enumerate(self.coeffs)]

    def partial_sum(self, t, M: int | None = None):
        M = self.M if M is None else M
        if self.basis_tag == Basis.PSI_EVEN:
            vals = psi_values(2 * M, t)
            return mp.fsum(self.coeffs[m] * vals[2 * m] for m in range(M + 1))
        if self.basis_tag == Basis.PSI_ALL:
            vals = psi_values(M, t)
            return mp.fsum(self.coeffs[m] * vals[m] for m in range(M + 1))
        raise ValueError(f"partial_sum not defined for basis {self.basis_tag}")


def _series_from_exact(exact, provenance):
    return ExpansionSeries(Basis.PSI_EVEN, tuple(to_mp(c) for c in exact), len(exact) - 1,
                           provenance, tuple(exact))


def coeffs_one_over_one_plus_t(M: int) -> ExpansionSeries:
    """1/(1+t) = (1/2) sum (4m)!/(2^4m (2m+1)!) Psi_2m(t)/(2m)!."""
    exact = [Fraction(math.factorial(4 * m), 2 * 16**m * math.factorial(2 * m + 1) * math.factorial(2 * m))
             for m in range(M + 1)]
    return _series_from_exact(exact, "1/(1+t)")


def coeffs_one_plus_one_over_t(M: int) -> ExpansionSeries:
    """1 + 1/t = 2 sum (4m)!/(2^4m (2m)!) Psi_2m(t)/(2m)!."""
    exact = [Fraction(2 * math.factorial(4 * m), 16**m * math.factorial(2 * m) ** 2) for m in range(M + 1)]
    return _series_from_exact(exact, "1+1/t")


# ---------------------------------------------------------------------------
# theta expansion coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaEntry:
    m: int
    S_4m: object
    binom_term: object
    alpha_2m: object
    tail_bound: object


@dataclass(frozen=True)
class AlphaTable:
    entries: tuple

    @property
    def M(self) -> int:
        return len(self.entries) - 1

    def alphas(self):
        return [e.alpha_2m for e in self.entries]

    def lattice_sums(self):
        return [e.S_4m for e in self.entries]

    def as_series(self) -> ExpansionSeries:
        return ExpansionSeries(Basis.PSI_EVEN, tuple(self.alphas()), self.M, "G(t)-1-1/t")


def binom_term_exact(m: int) -> Fraction:
    """2^(-4m+1) (4m)! / ((2m)!)^2."""
    return Fraction(2 * math.comb(4 * m, 2 * m), 16**m)


@lru_cache(maxsize=16)
def _alpha_table(M: int, dps: int) -> AlphaTable:
    with mp.workdps(dps):
        sums = lattice_sums_S([4 * m for m in range(M + 1)])
        eps = mp.mpf(10) ** (-dps)
        entries = []
        for m in range(M + 1):
            S = sums[4 * m]
            b = to_mp(binom_term_exact(m))
            alpha = S.value - b
            # truncation of the lattice sum plus one rounding unit of each operand
            tail = S.tail_bound + eps * (abs(S.value) + abs(b))
            entries.append(AlphaEntry(m, S.value, b, alpha, tail))
    return AlphaTable(tuple(entries))


def alpha_table(M: int) -> AlphaTable:
    """alpha_2m = S_4m - 2^(-4m+1) (4m)!/((2m)!)^2 for m = 0..M."""
    if M < 0:
        raise ValueError("M must be >= 0")
    return _alpha_table(M, mp.mp.dps)


def theorem_partial_sum(t, M: int, table: AlphaTable | None = None):
    """sum_{m <= M} alpha_2m Psi_2m(t)."""
    table = table if table is not None and table.M >= M else alpha_table(M)
    vals = psi_values(2 * M, t)
    return mp.fsum(table.entries[m].alpha_2m * vals[2 * m] for m in range(M + 1))


def theta_partial_sum(t, M: int, table: AlphaTable | None = None):
    """sum_{m <= M} S_4m Psi_2m(t), the expansion of G itself."""
    table = table if table is not None and table.M >= M else alpha_table(M)
    vals = psi_values(2 * M, t)
    return mp.fsum(table.entries[m].S_4m * vals[2 * m] for m in range(M + 1))


def alpha_lattice_form(m: int, literal: bool = False):
    """alpha_2m in the Muntz form (2^-4m/(2m)!) (sum_n Phi_4m(n) - [Phi_4m(0) + int Phi_4m]).

    The lattice sum runs over all of Z. ``literal=True`` restricts it to n != 0,
    which removes Phi_4m(0) twice and does not reproduce alpha_2m.
    """
    from .hermite import lattice_radius

    R, _ = lattice_radius(4 * m)
    P = mp.mp.dps
    with mp.workdps(P + 10):
        vals = [hermite_function(4 * m, n) for n in range(R + 1)]
        total = vals[0] + 2 * mp.fsum(vals[1:])
        if literal:
            total -= vals[0]
        integral = mp.factorial(4 * m) / mp.factorial(2 * m)
        out = mp.mpf(16) ** (-m) / mp.factorial(2 * m) * (total - vals[0] - integral)
    return +out


def lemma1_convolution_check(m: int, t):
    """|Psi_m(t)/m! - 2 sqrt 2 int_0^inf exp(-pi x^2/t^2) (1/t) Phi_2m(x)/(2m)! dx|."""
    if m > 20:
        raise ValueError("m must be <= 20")
    t = to_mp(t)
    if t <= 0:
        raise DomainError("t must be > 0")
    P = mp.mp.dps
    with mp.workdps(P + 10):
        fact = mp.factorial(2 * m)
        reach = t * mp.sqrt(mp.mpf(P + 15) * mp.log(10) / mp.pi)
        edge = max(mp.sqrt(mp.mpf(2 * m + 1) / mp.pi) + 8, reach)
        nodes = [0] + [edge * j / (2 * m + 4) for j in range(1, 2 * m + 5)] + [mp.inf]
        res = quad_checked(lambda x: mp.exp(-mp.pi * x * x / (t * t)) * hermite_function(2 * m, x) / fact,
                           nodes, target=mp.mpf(10) ** (-(P + 2)), method="gauss-legendre")
        rhs = 2 * mp.sqrt(2) * res.value / t
        lhs = psi(m, t) / mp.factorial(m)
        diff = abs(lhs - rhs)
    return +diff


def gaussian_expansion_residual(x, t, M: int):
    """|exp(-pi x^2 t^2) - sum_{m<=M} (-1)^m 2^-2m Phi_2m(x) Psi_m(t)/m!|."""
    from .hermite import phi_norm

    x = to_mp(x)
    t = as_sector_point(t).t
    vals = psi_values(M, t)
    terms = [(-1) ** m * phi_norm(m, x) * vals[m] for m in range(M + 1)]
    return abs(mp.exp(-mp.pi * x * x * t * t) - mp.fsum(terms))


def interchange_majorant(t, M: int):
    """sum_{m<=M} (2^-2m/m!) sum_n |Phi_2m(n)| |Psi_m(t)| (finite for t in the sector)."""
    from .hermite import abs_lattice_sum

    vals = psi_values(M, t)
    return mp.fsum(abs_lattice_sum(m) * abs(vals[m]) for m in range(M + 1))
