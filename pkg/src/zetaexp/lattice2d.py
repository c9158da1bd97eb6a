"""Two-dimensional lattice constants

    T_m = sum_{(k,l) in Z^2} (-1)^(kl) exp(-pi (k^2+l^2)/2) (k + il)^m

and the identity sum_n Phi_4m(n) = (2 pi)^(2m) T_4m / (S_0 sqrt 2).

Sums run over the square window |k|, |l| <= R. Lattice points are grouped by
n = k^2 + l^2 and the weights c_n(m) = sum (-1)^(kl) (k+il)^m are exact Gaussian
integers, so the cancellations for m = 1, 2, 3 (mod 4) are exact: the window is
invariant under (k, l) -> (-l, k), which multiplies each term by i^m.
Points outside the window lie on square shells max(|k|,|l|) = j > R holding 8j
points with j^2 <= k^2 + l^2 <= 2 j^2, which gives the tail majorant
    sum_{j > R} 8 j (2 j^2)^(m/2) exp(-pi j^2 / 2).
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import mpmath as mp

from .hermite import lattice_sum_S, orthonormal_hermite_values
from .numerics import to_mp


def _gauss_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _log_shell(j: int, m: int) -> float:
    return math.log(8 * j) + m / 2 * math.log(2 * j * j) - math.pi * j * j / 2


def square_radius(m: int, digits: int) -> int:
    """Smallest R past the shell maximum whose tail majorant is below 10^-digits."""
    # shells decrease once pi j^2 > m + 1; then consecutive ratios are < 1/2 for j >= 2
    j0 = max(2, math.ceil(math.sqrt((m + 2) / math.pi)) + 1)
    R = j0
    target = -digits * math.log(10) - math.log(2)
    while _log_shell(R + 1, m) > target:
        R += 1
    return R


def shell_tail_bound(m: int, R: int):
    """sum_{j > R} 8 j (2 j^2)^(m/2) exp(-pi j^2/2), summed until negligible."""
    terms = []
    j = R + 1
    while True:
        t = mp.exp(mp.mpf(_log_shell(j, m)))
        terms.append(t)
        if j > R + 2 and t < terms[0] * mp.mpf(10) ** (-mp.mp.dps):
            break
        j += 1
    return mp.fsum(terms)


def _sign(k: int, l: int) -> int:
    return -1 if (k * l) % 2 else 1


@lru_cache(maxsize=4)
def _shell_weights(M: int, R: int):
    """{n: [c_n(0), ..., c_n(M)]} with exact Gaussian-integer entries."""
    weights = {}
    for k in range(-R, R + 1):
        for l in range(-R, R + 1):
            n = k * k + l * l
            sgn = _sign(k, l)
            row = weights.setdefault(n, [(0, 0)] * (M + 1))
            z = (1, 0)
            for m in range(M + 1):
                row[m] = (row[m][0] + sgn * z[0], row[m][1] + sgn * z[1])
                z = _gauss_mul(z, (k, l))
    return {n: tuple(row) for n, row in weights.items()}


@dataclass(frozen=True)
class TEntry:
    m: int
    T: object
    radius: int
    tail_bound: object


@dataclass(frozen=True)
class TTable:
    entries: tuple

    @property
    def M(self) -> int:
        return len(self.entries) - 1


def _combine(weights, m: int, R: int):
    """sum_n exp(-pi n/2) c_n for the weights {n: c_n} of T_m; returns (T, rounding bound)."""
    P = mp.mp.dps
    # the largest individual term fixes how many digits cancel
    peak = max(_log_shell(j, m) for j in range(1, R + 1))
    extra = max(0, int(peak / math.log(10))) + 15
    with mp.workdps(P + extra):
        re, im, absum = [], [], []
        for n in sorted(weights):
            c = weights[n]
            if c == (0, 0):
                continue
            w = mp.exp(-mp.pi * n / 2)
            re.append(c[0] * w)
            im.append(c[1] * w)
            absum.append((abs(c[0]) + abs(c[1])) * w)
        T = mp.mpc(mp.fsum(re), mp.fsum(im))
        rounding = mp.fsum(absum) * mp.mpf(10) ** (-(P + extra - 2))
    # final rounding of T to P digits
    rounding += abs(T) * mp.mpf(10) ** (1 - P)
    return +T, rounding


def t_table(M: int) -> TTable:
    """T_0, ..., T_M on one window sized for T_M."""
    if not 0 <= M <= 200:
        raise ValueError("M must satisfy 0 <= M <= 200")
    P = mp.mp.dps
    R = square_radius(M, P + 5)
    weights = _shell_weights(M, R)
    entries = []
    for m in range(M + 1):
        T, rounding = _combine({n: row[m] for n, row in weights.items()}, m, R)
        entries.append(TEntry(m, T, R, +(shell_tail_bound(m, R) + rounding)))
    return TTable(tuple(entries))


def compute_T(m: int):
    """(T_m, tail bound)."""
    if not 0 <= m <= 200:
        raise ValueError("m must satisfy 0 <= m <= 200")
    P = mp.mp.dps
    R = square_radius(m, P + 5)
    weights = {}
    for k in range(-R, R + 1):
        for l in range(-R, R + 1):
            n = k * k + l * l
            z = _gauss_pow((k, l), m)
            s = _sign(k, l)
            a, b = weights.get(n, (0, 0))
            weights[n] = (a + s * z[0], b + s * z[1])
    T, rounding = _combine(weights, m, R)
    return T, +(shell_tail_bound(m, R) + rounding)


def _gauss_pow(z, m: int):
    out = (1, 0)
    while m:
        if m & 1:
            out = _gauss_mul(out, z)
        z = _gauss_mul(z, z)
        m >>= 1
    return out


# ---------------------------------------------------------------------------
# exact symmetry checks
# ---------------------------------------------------------------------------

def _term(k: int, l: int, m: int):
    z = _gauss_pow((k, l), m)
    s = _sign(k, l)
    return (s * z[0], s * z[1])


def reflection_cancels(m: int, R: int) -> bool:
    """For odd m, the (-k, -l) term is exactly minus the (k, l) term on the window."""
    if m % 2 == 0:
        raise ValueError("m must be odd")
    for k in range(-R, R + 1):
        for l in range(-R, R + 1):
            a, b = _term(k, l, m), _term(-k, -l, m)
            if (a[0] + b[0], a[1] + b[1]) != (0, 0):
                return False
    return True


def rotation_cancels(m: int, R: int) -> bool:
    """For m = 2 (mod 4), the (-l, k) term is exactly minus the (k, l) term on the window."""
    if m % 4 != 2:
        raise ValueError("m must be 2 mod 4")
    for k in range(-R, R + 1):
        for l in range(-R, R + 1):
            a, b = _term(k, l, m), _term(-l, k, m)
            if (a[0] + b[0], a[1] + b[1]) != (0, 0):
                return False
    return True


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def theta_one():
    """S_0 = sum_n exp(-pi n^2), summed directly."""
    P = mp.mp.dps
    N = math.ceil(math.sqrt((P + 10) * math.log(10) / math.pi)) + 1
    with mp.workdps(P + 10):
        val = 1 + 2 * mp.fsum(mp.exp(-mp.pi * n * n) for n in range(1, N + 1))
    return +val


def hermite_side(m: int):
    """sum_n Phi_4m(n) from the one-dimensional lattice sum: 2^4m (2m)! S_4m."""
    S = lattice_sum_S(4 * m)
    return S.value * mp.mpf(16) ** m * mp.factorial(2 * m)


def lattice_side(m: int):
    """(2 pi)^(2m) T_4m / (S_0 sqrt 2)."""
    T, _ = compute_T(4 * m)
    return mp.power(2 * mp.pi, 2 * m) * mp.re(T) / (theta_one() * mp.sqrt(2))


def appendix_identity_check(m: int):
    """Relative difference between the two routes to sum_n Phi_4m(n)."""
    if not 0 <= m <= 5:
        raise ValueError("m must satisfy 0 <= m <= 5")
    a, b = hermite_side(m), lattice_side(m)
    return abs(a - b) / abs(a)


def s4m_from_T(m: int):
    """S_4m = (2^-4m/(2m)!) (2 pi)^(2m) T_4m / (S_0 sqrt 2)."""
    return lattice_side(m) / (mp.mpf(16) ** m * mp.factorial(2 * m))


def _line_cutoff(shift, digits: int) -> int:
    # exp(-pi n^2 + 2 pi n |shift|) is below 10^-digits for |n| > N
    return math.ceil(abs(shift) + math.sqrt(abs(shift) ** 2 + digits * math.log(10) / math.pi)) + 2


def poisson_relation_check(u):
    """|sum_n exp(-pi n^2 + 2 pi n u - pi u^2/2) - (1/(S_0 sqrt 2)) sum (-1)^(kl) exp(-pi(k^2+l^2)/2 + i pi u (k+il))|."""
    u = mp.mpc(to_mp(u))
    if abs(u) > 2:
        raise ValueError("|u| must be <= 2")
    P = mp.mp.dps
    with mp.workdps(P + 15):
        N = _line_cutoff(float(abs(mp.re(u))), P + 15)
        left = mp.fsum(mp.exp(-mp.pi * n * n + 2 * mp.pi * n * u - mp.pi * u * u / 2) for n in range(-N, N + 1))
        # |exp(i pi u (k+il))| <= exp(pi |u| sqrt 2 j) on shell j
        a = float(abs(u)) * math.sqrt(2)
        R = 2
        while (math.log(8 * (R + 1)) + math.pi * a * (R + 1) - math.pi * (R + 1) ** 2 / 2
               > -(P + 15) * math.log(10)):
            R += 1
        terms = []
        for k in range(-R, R + 1):
            for l in range(-R, R + 1):
                terms.append(_sign(k, l) * mp.exp(-mp.pi * (k * k + l * l) / 2 + 1j * mp.pi * u * mp.mpc(k, l)))
        right = mp.fsum(terms) / (theta_one() * mp.sqrt(2))
        diff = abs(left - right)
    return +diff


def hermite_generating_terms(n: int, u, M: int):
    """[(pi/2)^(m/2) Phi_m(n) u^m / m!] for m = 0..M, via the orthonormal recurrence.

    (pi/2)^(m/2) Phi_m / m! = pi^(1/4) pi^(m/2) h_m / sqrt(m!).
    """
    u = to_mp(u)
    h = orthonormal_hermite_values(M, n)
    out = []
    scale = mp.power(mp.pi, 0.25)
    for m in range(M + 1):
        out.append(scale * h[m])
        scale *= mp.sqrt(mp.pi) * u / mp.sqrt(m + 1)
    return out


def generating_order(u, digits: int) -> int:
    """M with sum_{m > M} (sqrt(pi)|u|)^m / sqrt(m!) below 10^-digits."""
    a = math.sqrt(math.pi) * abs(float(u))
    if a == 0:
        return 0
    M = 1
    logterm = 0.0
    while True:
        logterm += math.log(a) - 0.5 * math.log(M)
        # ratios beyond M are <= a/sqrt(M+1) <= 1/2 once M >= 4 a^2
        if M >= 4 * a * a and logterm + math.log(2) < -digits * math.log(10):
            return M - 1
        M += 1


def hermite_generating_check(u, n: int, M: int | None = None):
    """|exp(-pi n^2 + 2 pi n u - pi u^2/2) - sum_{m<=M} (pi/2)^(m/2) Phi_m(n) u^m/m!|."""
    u = to_mp(u)
    if abs(u) >= 1:
        raise ValueError("|u| must be < 1")
    P = mp.mp.dps
    if M is None:
        M = generating_order(u, P + 5)
    with mp.workdps(P + 10):
        lhs = mp.exp(-mp.pi * n * n + 2 * mp.pi * n * u - mp.pi * u * u / 2)
        diff = abs(lhs - mp.fsum(hermite_generating_terms(n, u, M)))
    return +diff
