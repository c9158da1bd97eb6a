"""Mellin transforms of the Psi basis, the pi/sin(pi s) expansion, and the
zeta expansion in Q_2m(s) evaluated against the reference zeta.

The zeta expansion is treated as an experiment: the functions here report
partial sums next to the reference value and never claim convergence.
"""
from dataclasses import dataclass, field
import csv
import io
import json
from fractions import Fraction

import mpmath as mp

from .numerics import mellin_quadrature, quad_checked, to_mp, zeta_oracle, abs_gamma_quarter_line
from .psi_basis import alpha_table, psi, psi_values, theta_minus_singular
from .qpoly import Q_values, Q_critical_line_real, gamma_weight_cutoff
from .errors import DomainError

DEFAULT_GRID = tuple(mp.mpc(re, im) for re in ("0.25", "0.5", "0.75") for im in ("0", "3", "14.1347251417"))
DYADIC_M = tuple(2**k for k in range(10))


def _strip_point(s):
    s = to_mp(s)
    if not 0 < mp.re(s) < 1:
        raise DomainError("s must satisfy 0 < Re(s) < 1")
    return s


def mellin_gamma_factor(s):
    """(1/sqrt(2 pi)) Gamma(s/2) Gamma((1-s)/2), the Mellin image of Psi_0."""
    s = to_mp(s)
    return mp.gamma(s / 2) * mp.gamma((1 - s) / 2) / mp.sqrt(2 * mp.pi)


def psi_mellin_closed_form(m: int, s):
    return mellin_gamma_factor(s) * Q_values(m, s)[m]


def psi_mellin_quadrature(m: int, s):
    # (1/t) Psi_m(1/t) = (-1)^m Psi_m(t)
    return mellin_quadrature(lambda t: psi(m, t), s, fold_parity=(-1) ** m)


def lemma3_check(m: int, s):
    """Relative (or, near a zero of Q_m, absolute) error of the Psi_m Mellin formula."""
    if m > 12:
        raise ValueError("m must be <= 12")
    s = _strip_point(s)
    quad = psi_mellin_quadrature(m, s).value
    exact = psi_mellin_closed_form(m, s)
    diff = abs(quad - exact)
    if abs(exact) < mp.mpf(10) ** (-(mp.mp.dps // 2)):
        return diff
    return diff / abs(exact)


# ---------------------------------------------------------------------------
# pi / sin(pi s)
# ---------------------------------------------------------------------------

def pi_over_sin_coefficients(M: int):
    """Exact (4m)!/((2m)!(2m+1)!) 2^-4m for m = 0..M."""
    out = []
    b = 1
    for m in range(M + 1):
        if m:
            b = b * (4 * m) * (4 * m - 1) * (4 * m - 2) * (4 * m - 3) // ((2 * m) * (2 * m - 1)) ** 2
        out.append(Fraction(b, (2 * m + 1) * 16**m))
    return out


def pi_over_sin_partials(s, Ms):
    """{M: (partial, pi/sin(pi s))} with one pass over the coefficients."""
    s = _strip_point(s)
    Ms = sorted(set(Ms))
    Mmax = Ms[-1]
    P = mp.mp.dps
    with mp.workdps(P + 10):
        pref = mellin_gamma_factor(s) / 2
        Q = Q_values(2 * Mmax, s)
        coeffs = pi_over_sin_coefficients(Mmax)
        terms = [to_mp(c) * Q[2 * m] for m, c in enumerate(coeffs)]
        ref = mp.pi / mp.sin(mp.pi * s)
        out = {}
        for M in Ms:
            out[M] = (+(pref * mp.fsum(terms[: M + 1])), +ref)
    return out


def pi_over_sin_expansion(s, M: int):
    """(partial sum through Q_2M, pi/sin(pi s))."""
    return pi_over_sin_partials(s, [M])[M]


def termwise_consistency_check(s, M: int):
    """|Mellin(sum_{m<=M} c_m Psi_2m) - sum_{m<=M} c_m Mellin(Psi_2m)| for 1/(1+t).

    The left side is one quadrature of the partial sum; the right side uses
    the closed-form Mellin of each Psi_2m.
    """
    if M > 20:
        raise ValueError("M must be <= 20")
    s = _strip_point(s)
    coeffs = [to_mp(c) / 2 for c in pi_over_sin_coefficients(M)]

    def f(t):
        vals = psi_values(2 * M, t)
        return mp.fsum(coeffs[m] * vals[2 * m] for m in range(M + 1))

    quad = mellin_quadrature(f, s, fold_parity=1).value
    Q = Q_values(2 * M, s)
    closed = mellin_gamma_factor(s) * mp.fsum(coeffs[m] * Q[2 * m] for m in range(M + 1))
    return abs(quad - closed)


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------

def conjecture_prefactor(s):
    """(1/sqrt(2 pi)) pi^(s/2) Gamma((1-s)/2)."""
    s = to_mp(s)
    return mp.power(mp.pi, s / 2) * mp.gamma((1 - s) / 2) / mp.sqrt(2 * mp.pi)


def conjecture_partials(s, Ms, r=None):
    """{M: (partial, zeta_oracle(s))}; ``r`` damps the m-th term by r^(2m)."""
    s = _strip_point(s)
    Ms = sorted(set(Ms))
    Mmax = Ms[-1]
    if r is not None:
        r = to_mp(r)
        if not 0 < r <= 1:
            raise ValueError("r must satisfy 0 < r <= 1")
    table = alpha_table(Mmax)
    ref = zeta_oracle(s)
    P = mp.mp.dps
    with mp.workdps(P + 10):
        pref = conjecture_prefactor(s)
        Q = Q_values(2 * Mmax, s)
        terms = []
        damp = mp.mpf(1)
        for m in range(Mmax + 1):
            terms.append(table.entries[m].alpha_2m * Q[2 * m] * damp)
            if r is not None:
                damp *= r * r
        out = {M: (+(pref * mp.fsum(terms[: M + 1])), ref) for M in Ms}
    return out


def zeta_conjecture_partial(s, M: int):
    """(prefactor * sum_{m<=M} alpha_2m Q_2m(s), zeta_oracle(s)). No convergence is asserted."""
    return conjecture_partials(s, [M])[M]


def abel_regularized_partial(s, M: int, r):
    """Conjecture partial sum with the m-th term damped by r^(2m) (exploratory)."""
    return conjecture_partials(s, [M], r=r)[M][0]


def theta_mellin_anchor(s):
    """|Mellin(G - 1 - 1/t)(s) - Gamma(s/2) pi^(-s/2) zeta(s)|."""
    s = _strip_point(s)
    quad = mellin_quadrature(theta_minus_singular, s, fold_parity=1).value
    ref = mp.gamma(s / 2) * mp.power(mp.pi, -s / 2) * zeta_oracle(s)
    return abs(quad - ref)


def conjecture_rearrangement_check(s, M: int):
    """|Gamma(s/2) pi^(-s/2) * conjecture partial - Mellin(sum_{m<=M} alpha_2m Psi_2m)|.

    The identity is pure algebra on the first M+1 terms; it holds whether or not
    the full series converges.
    """
    if M > 20:
        raise ValueError("M must be <= 20")
    s = _strip_point(s)
    table = alpha_table(M)
    alphas = table.alphas()

    def f(t):
        vals = psi_values(2 * M, t)
        return mp.fsum(alphas[m] * vals[2 * m] for m in range(M + 1))

    quad = mellin_quadrature(f, s, fold_parity=1).value
    partial, _ = zeta_conjecture_partial(s, M)
    lhs = mp.gamma(s / 2) * mp.power(mp.pi, -s / 2) * partial
    return abs(lhs - quad)


# ---------------------------------------------------------------------------
# Hardy Z
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HardyPoint:
    t: object
    Z_ref: object
    f2m_values: tuple

    def __post_init__(self):
        if mp.im(mp.mpmathify(self.Z_ref)) != 0:
            raise ValueError("Z_ref must be real")


def hardy_z(t):
    """Z(t) = pi^(-it/2) Gamma(1/4+it/2)/|Gamma(1/4+it/2)| zeta(1/2+it), from the reference zeta."""
    t = to_mp(t)
    P = mp.mp.dps
    with mp.workdps(P + 10):
        lg = mp.loggamma(mp.mpc(0.25, t / 2))
        phase = mp.expj(mp.im(lg) - t / 2 * mp.log(mp.pi))
        z = phase * zeta_oracle(mp.mpc(0.5, t))
    if abs(mp.im(z)) > mp.mpf(10) ** (2 - P) * max(1, abs(z)):
        raise ArithmeticError(f"Z({mp.nstr(t, 10)}) has imaginary part {mp.nstr(mp.im(z), 5)}")
    return +mp.re(z)


def hardy_f2m_values(M: int, t):
    """[f_0(t), f_2(t), ..., f_2M(t)], f_2m = pi^(1/4) |Gamma(1/4+it/2)| Q_2m(1/2+it)."""
    t = to_mp(t)
    r = Q_critical_line_real(2 * M, t)
    w = mp.power(mp.pi, 0.25) * abs_gamma_quarter_line(t)
    # Q_2m(1/2+it) = (-1)^m r_2m(t)
    return [(-1) ** m * w * r[2 * m] for m in range(M + 1)]


def hardy_f2m(m: int, t):
    if m > 20:
        raise ValueError("m must be <= 20")
    return hardy_f2m_values(m, t)[m]


def hardy_point(t, M: int) -> HardyPoint:
    return HardyPoint(to_mp(t), hardy_z(t), tuple(hardy_f2m_values(M, t)))


def hardy_partial(t, M: int):
    """(1/sqrt(2 pi)) sum_{m<=M} alpha_2m f_2m(t)."""
    table = alpha_table(M)
    f = hardy_f2m_values(M, t)
    return mp.fsum(a * v for a, v in zip(table.alphas(), f)) / mp.sqrt(2 * mp.pi)


def hardy_inner(m1: int, m2: int, tol=mp.mpf("1e-14")):
    """int_R f_2m1(t) f_2m2(t) dt by Gauss-Legendre panels."""
    P = mp.mp.dps
    T = gamma_weight_cutoff(P, 2 * (m1 + m2))
    M = max(m1, m2)

    def integrand(t):
        f = hardy_f2m_values(M, t)
        return f[m1] * f[m2]

    panels = int(mp.ceil(T / 4))
    nodes = [T * j / panels for j in range(-panels, panels + 1)]
    return quad_checked(integrand, nodes, target=tol, method="gauss-legendre", guard=5).value


# ---------------------------------------------------------------------------
# residual reports
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("re_s", "im_s", "M", "re_partial", "im_partial", "re_ref", "im_ref", "residual")


def fmt(x, digits=None) -> str:
    """Decimal string of an mpf at the working precision."""
    digits = mp.mp.dps if digits is None else digits
    return mp.nstr(mp.mpf(x), digits)


@dataclass(frozen=True)
class ResidualRecord:
    point: object
    M: int
    partial: object
    reference: object
    residual: object


@dataclass(frozen=True)
class ResidualReport:
    records: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        recs = tuple(sorted(self.records, key=lambda r: (mp.re(r.point), mp.im(r.point), r.M)))
        object.__setattr__(self, "records", recs)

    def rows(self):
        for r in self.records:
            p, a, b = mp.mpc(r.point), mp.mpc(r.partial), mp.mpc(r.reference)
            yield (fmt(p.real), fmt(p.imag), str(r.M), fmt(a.real), fmt(a.imag),
                   fmt(b.real), fmt(b.imag), fmt(r.residual))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> str:
        data = {"meta": {k: str(v) for k, v in sorted(self.meta.items())},
                "records": [dict(zip(CSV_COLUMNS, row)) for row in self.rows()]}
        return json.dumps(data, indent=2, sort_keys=False) + "\n"


def residual_report(partials_fn, grid, Ms, meta=None) -> ResidualReport:
    """Build a report from ``partials_fn(s, Ms) -> {M: (partial, reference)}``."""
    records = []
    for s in grid:
        s = mp.mpc(to_mp(s))
        for M, (partial, ref) in partials_fn(s, Ms).items():
            records.append(ResidualRecord(s, M, partial, ref, abs(partial - ref)))
    meta = dict(meta or {})
    meta.setdefault("precision_digits", mp.mp.dps)
    return ResidualReport(tuple(records), meta)


def conjecture_report(grid=DEFAULT_GRID, Ms=DYADIC_M, r=None) -> ResidualReport:
    meta = {"expansion": "hermite", "abel_r": "none" if r is None else r}
    return residual_report(lambda s, Ms: conjecture_partials(s, Ms, r=r), grid, Ms, meta)
