"""Command-line entry point.

    zetaexp coeffs      alpha_2m, S_4m, s_m, sigma_m, c_m and T_m tables
    zetaexp qpoly       exact Q_m / q_m coefficients and critical-line roots
    zetaexp verify      identity and oracle checks with pass/fail
    zetaexp conjecture  residual curves of both zeta expansions
    zetaexp laguerre    s_m, sigma_m, c_m table
    zetaexp appendix    T_m table and the two-route identity

Exit codes: 0 ok, 1 check failure, 2 configuration error, 3 convergence failure.
All numbers are written as decimal strings at the working precision.
"""
import argparse
import csv
from dataclasses import dataclass, field
import io
import json
import sys

import mpmath as mp

from .config import DEFAULT_PRECISION, MIN_PRECISION, set_precision
from .errors import ConfigError, ConvergenceError

FORMATS = ("csv", "json")
CONFIG_KEYS = {"precision", "max_m", "grid", "format", "out", "abel"}


@dataclass
class RunConfig:
    precision_digits: int = DEFAULT_PRECISION
    max_m: int | None = None
    grid: list | None = None
    output_format: str = "csv"
    output_path: str | None = None
    abel: object = None
    tolerances: dict = field(default_factory=dict)
    seedless: bool = True

    def validate(self):
        if self.precision_digits < MIN_PRECISION:
            raise ConfigError(f"precision must be >= {MIN_PRECISION}, got {self.precision_digits}")
        if self.max_m is not None and self.max_m < 0:
            raise ConfigError("max-m must be >= 0")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.abel is not None and not 0 < self.abel <= 1:
            raise ConfigError("abel must satisfy 0 < r <= 1")
        for s in self.grid or ():
            if not 0 < mp.re(s) < 1:
                raise ConfigError(f"grid point {mp.nstr(s, 10)} is outside 0 < Re(s) < 1")


def parse_grid(text: str) -> list:
    """'re,im;re,im;...' -> list of mpc."""
    points = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        parts = item.split(",")
        if len(parts) != 2:
            raise ConfigError(f"grid point {item!r} must be 're,im'")
        try:
            points.append(mp.mpc(mp.mpf(parts[0].strip()), mp.mpf(parts[1].strip())))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad grid point {item!r}") from exc
    if not points:
        raise ConfigError("grid is empty")
    return points


def read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment. 'tol.NAME=value' sets a tolerance."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS and not key.startswith("tol."):
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def _parse_int(name, value):
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from exc


def _parse_mpf(name, value):
    try:
        return mp.mpf(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a number, got {value!r}") from exc


def build_config(args) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    for key, attr in (("precision", "precision"), ("max_m", "max_m"), ("grid", "grid"),
                      ("format", "format"), ("out", "out"), ("abel", "abel")):
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    for item in getattr(args, "tol", None) or ():
        if "=" not in item:
            raise ConfigError(f"--tol expects name=value, got {item!r}")
        name, v = item.split("=", 1)
        values["tol." + name.strip()] = v.strip()

    cfg = RunConfig()
    if "precision" in values:
        cfg.precision_digits = _parse_int("precision", values["precision"])
    if cfg.precision_digits < MIN_PRECISION:
        raise ConfigError(f"precision must be >= {MIN_PRECISION}, got {cfg.precision_digits}")
    if "max_m" in values:
        cfg.max_m = _parse_int("max-m", values["max_m"])
    if "format" in values:
        cfg.output_format = values["format"]
    if "out" in values:
        cfg.output_path = values["out"]
    # numeric values are read at the requested precision
    with mp.workdps(cfg.precision_digits):
        if "grid" in values:
            cfg.grid = parse_grid(values["grid"])
        if "abel" in values:
            cfg.abel = _parse_mpf("abel", values["abel"])
        for key, v in values.items():
            if key.startswith("tol."):
                cfg.tolerances[key[4:]] = _parse_mpf(key, v)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def num(x, digits=None) -> str:
    """Decimal string of a real number at the working precision."""
    if x is None:
        return ""
    return mp.nstr(mp.mpf(x), digits or mp.mp.dps)


def render(rows: list, columns: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([r[c] for c in columns])
    return buf.getvalue()


def emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

COEFF_COLUMNS = ["m", "precision", "S_4m", "binom_term", "alpha_2m", "alpha_tail_bound",
                 "s_m", "s_tail_bound", "sigma_m", "sigma_error", "c_m_num", "c_m_den", "combo",
                 "re_T_m", "im_T_m", "T_radius", "T_tail_bound"]


def cmd_coeffs(cfg: RunConfig, args) -> int:
    from .lattice2d import t_table
    from .laguerre import coeff_tables
    from .psi_basis import alpha_table

    M = 8 if cfg.max_m is None else cfg.max_m
    alphas = alpha_table(M)
    sig = coeff_tables(M)
    T = t_table(min(M, 200))
    rows = []
    for m in range(M + 1):
        a, s = alphas.entries[m], sig.entries[m]
        t = T.entries[m] if m <= T.M else None
        rows.append({
            "m": str(m), "precision": str(cfg.precision_digits),
            "S_4m": num(a.S_4m), "binom_term": num(a.binom_term), "alpha_2m": num(a.alpha_2m),
            "alpha_tail_bound": num(a.tail_bound),
            "s_m": num(s.s_m), "s_tail_bound": num(sig.s_tail_bound),
            "sigma_m": num(s.sigma_m), "sigma_error": num(sig.sigma_error),
            "c_m_num": str(s.c_m_exact.numerator), "c_m_den": str(s.c_m_exact.denominator),
            "combo": num(s.combo),
            "re_T_m": num(t and mp.re(t.T)), "im_T_m": num(t and mp.im(t.T)),
            "T_radius": "" if t is None else str(t.radius), "T_tail_bound": num(t and t.tail_bound),
        })
    emit(render(rows, COEFF_COLUMNS, cfg.output_format), cfg)
    return 0


QPOLY_COLUMNS = ["family", "m", "kind", "index", "value", "num", "den", "residual", "precision"]


def cmd_qpoly(cfg: RunConfig, args) -> int:
    from fractions import Fraction

    from .qpoly import Family, build_Q, build_q, critical_line_roots, real_line_polynomial

    family = Family(args.family)
    m = args.m if args.m is not None else (cfg.max_m if cfg.max_m is not None else 2)
    if m < 0:
        raise ConfigError("m must be >= 0")
    poly = build_Q(m) if family == Family.Q else build_q(m)
    rows = []
    base = {"family": family.value, "m": str(m), "precision": str(cfg.precision_digits)}
    for k, c in enumerate(poly.coeffs):
        rows.append(dict(base, kind="coeff", index=str(k), value=num(mp.mpf(c.numerator) / c.denominator),
                         num=str(c.numerator), den=str(c.denominator), residual=""))
    if args.roots:
        rs = critical_line_roots(m, family)
        coeffs, _ = real_line_polynomial(poly)
        for j, t in enumerate(rs.roots_t):
            res = abs(mp.polyval([mp.mpf(c.numerator) / c.denominator for c in reversed(coeffs)], t))
            rows.append(dict(base, kind="root_t", index=str(j), value=num(t), num="", den="", residual=num(res)))
    emit(render(rows, QPOLY_COLUMNS, cfg.output_format), cfg)
    return 0


def _verify_checks():
    """(name, callable returning a residual, default tolerance as a function of P)."""
    from .hermite import lattice_sum_S
    from .lattice2d import appendix_identity_check
    from .laguerre import amplitude_ratios, lorentzian_expansion_residual, expansion_g_check, phi_orthogonality_check
    from .mellin import conjecture_rearrangement_check, lemma3_check, theta_mellin_anchor
    from .numerics import zeta_oracle
    from .psi_basis import (alpha_table, coeffs_one_over_one_plus_t, lemma1_convolution_check, psi,
                            t_transform, theta)
    from .qpoly import parseval_orthogonality_check

    def jacobi():
        pts = [mp.mpf("0.7"), mp.mpf("1.3"), mp.mpc("1", "0.9"), mp.mpc("0.5", "-0.3")]
        return max(abs(theta(1 / t) / t - theta(t)) for t in pts)

    def basis():
        us = [mp.mpf("0.5"), mp.mpc("-0.3", "0.6"), mp.mpc("0.1", "-0.8")]
        return max(abs(t_transform(lambda p: psi(m, p), u) - u**m) for u in us for m in (0, 1, 5, 10))

    def alpha0_anchor():
        return abs(alpha_table(0).entries[0].alpha_2m - (theta(1) - 2))

    def theta_expansion_t1():
        return abs(lattice_sum_S(0).value - theta(1))

    def amplitude():
        return max(abs(r - 1) for r in amplitude_ratios().values())

    return [
        ("zeta_oracle", lambda: abs(zeta_oracle(2) - mp.pi**2 / 6), lambda P: 10 ** (5 - P)),
        ("jacobi", jacobi, lambda P: 10 ** (5 - P)),
        ("basis_identity", basis, lambda P: 10 ** (5 - P)),
        ("convolution", lambda: max(lemma1_convolution_check(m, "0.7") for m in (0, 1, 3)), lambda P: 10 ** (5 - P)),
        ("psi_mellin", lambda: max(lemma3_check(m, s) for m in (0, 1, 2) for s in ("0.3", "0.5")),
         lambda P: 10 ** (15 - P)),
        ("one_over_one_plus_t", lambda: abs(coeffs_one_over_one_plus_t(100).partial_sum(2) - mp.mpf(1) / 3), lambda P: 1e-30),
        ("alpha0_anchor", alpha0_anchor, lambda P: 10 ** (5 - P)),
        ("theta_expansion_t1", theta_expansion_t1, lambda P: 10 ** (5 - P)),
        ("parseval", lambda: max(parseval_orthogonality_check(a, b) for a, b in ((0, 0), (0, 2), (1, 1), (2, 3))),
         lambda P: 1e-12),
        ("lattice_identity", lambda: max(appendix_identity_check(m) for m in range(3)), lambda P: 10 ** (10 - P)),
        ("laguerre_lorentzian", lambda: lorentzian_expansion_residual("1.5", "0.7", 200), lambda P: 10 ** (5 - P)),
        ("laguerre_orthogonality", lambda: max(phi_orthogonality_check(a, b) for a in range(3) for b in range(3)),
         lambda P: 1e-12),
        ("laguerre_poisson", lambda: expansion_g_check("1.7", 10).poisson_residual, lambda P: 10 ** (10 - P)),
        ("laguerre_amplitude", amplitude, lambda P: 0.15),
        ("theta_mellin", lambda: theta_mellin_anchor("0.5"), lambda P: 1e-12),
        ("rearrangement", lambda: conjecture_rearrangement_check("0.3", 8), lambda P: 10 ** (10 - P)),
    ]


VERIFY_COLUMNS = ["check", "residual", "tolerance", "passed", "precision"]


def cmd_verify(cfg: RunConfig, args) -> int:
    checks = _verify_checks()
    known = {name for name, _, _ in checks}
    unknown = set(cfg.tolerances) - known
    if unknown:
        raise ConfigError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
    rows = []
    first_failure = None
    for name, fn, default in checks:
        tolerance = cfg.tolerances.get(name, mp.mpf(default(cfg.precision_digits)))
        residual = fn()
        ok = residual <= tolerance
        if not ok and first_failure is None:
            first_failure = name
        rows.append({"check": name, "residual": num(residual, 10), "tolerance": num(tolerance, 10),
                     "passed": "true" if ok else "false", "precision": str(cfg.precision_digits)})
    emit(render(rows, VERIFY_COLUMNS, cfg.output_format), cfg)
    if first_failure is not None:
        print(f"check failed: {first_failure}", file=sys.stderr)
        return 1
    return 0


CONJ_COLUMNS = ["expansion", "re_s", "im_s", "M", "re_partial", "im_partial", "re_ref", "im_ref", "residual",
                "precision"]
ABEL_COLUMNS = ["abel_r", "re_abel", "im_abel", "abel_residual"]


def _dyadic(max_m: int):
    out = [0]
    k = 1
    while k <= max_m:
        out.append(k)
        k *= 2
    return out


def cmd_conjecture(cfg: RunConfig, args) -> int:
    from .laguerre import laguerre_zeta_partials
    from .mellin import DEFAULT_GRID, conjecture_partials

    grid = cfg.grid or list(DEFAULT_GRID)
    Ms = _dyadic(512 if cfg.max_m is None else cfg.max_m)
    columns = CONJ_COLUMNS + (ABEL_COLUMNS if cfg.abel is not None else [])
    rows = []
    for label, fn in (("hermite", conjecture_partials), ("laguerre", laguerre_zeta_partials)):
        for s in sorted(grid, key=lambda z: (mp.re(z), mp.im(z))):
            partials = fn(s, Ms)
            damped = conjecture_partials(s, Ms, r=cfg.abel) if cfg.abel is not None and label == "hermite" else None
            for M in Ms:
                partial, ref = partials[M]
                partial, ref = mp.mpc(partial), mp.mpc(ref)
                row = {"expansion": label, "re_s": num(mp.re(s)), "im_s": num(mp.im(s)), "M": str(M),
                       "re_partial": num(partial.real), "im_partial": num(partial.imag),
                       "re_ref": num(ref.real), "im_ref": num(ref.imag), "residual": num(abs(partial - ref)),
                       "precision": str(cfg.precision_digits)}
                if cfg.abel is not None:
                    row["abel_r"] = num(cfg.abel)
                    if damped is None:
                        row.update(re_abel="", im_abel="", abel_residual="")
                    else:
                        d = mp.mpc(damped[M][0])
                        row.update(re_abel=num(d.real), im_abel=num(d.imag), abel_residual=num(abs(d - ref)))
                rows.append(row)
    emit(render(rows, columns, cfg.output_format), cfg)
    return 0


LAGUERRE_COLUMNS = ["m", "precision", "s_m", "s_tail_bound", "sigma_m", "sigma_error", "c_m_num", "c_m_den",
                    "c_m", "combo"]


def cmd_laguerre(cfg: RunConfig, args) -> int:
    from .laguerre import coeff_tables

    M = 16 if cfg.max_m is None else cfg.max_m
    table = coeff_tables(M)
    rows = [{"m": str(e.m), "precision": str(cfg.precision_digits), "s_m": num(e.s_m),
             "s_tail_bound": num(table.s_tail_bound), "sigma_m": num(e.sigma_m),
             "sigma_error": num(table.sigma_error), "c_m_num": str(e.c_m_exact.numerator),
             "c_m_den": str(e.c_m_exact.denominator), "c_m": num(e.c_m), "combo": num(e.combo)}
            for e in table.entries]
    emit(render(rows, LAGUERRE_COLUMNS, cfg.output_format), cfg)
    return 0


APPENDIX_COLUMNS = ["m", "precision", "re_T_m", "im_T_m", "radius", "tail_bound", "identity_residual"]


def cmd_appendix(cfg: RunConfig, args) -> int:
    from .lattice2d import appendix_identity_check, t_table

    M = 20 if cfg.max_m is None else cfg.max_m
    if M > 200:
        raise ConfigError("appendix supports max-m <= 200")
    table = t_table(M)
    rows = []
    for e in table.entries:
        ident = appendix_identity_check(e.m // 4) if e.m % 4 == 0 and e.m // 4 <= 5 else None
        rows.append({"m": str(e.m), "precision": str(cfg.precision_digits), "re_T_m": num(mp.re(e.T)),
                     "im_T_m": num(mp.im(e.T)), "radius": str(e.radius), "tail_bound": num(e.tail_bound),
                     "identity_residual": num(ident)})
    emit(render(rows, APPENDIX_COLUMNS, cfg.output_format), cfg)
    return 0


COMMANDS = {
    "coeffs": cmd_coeffs,
    "qpoly": cmd_qpoly,
    "verify": cmd_verify,
    "conjecture": cmd_conjecture,
    "laguerre": cmd_laguerre,
    "appendix": cmd_appendix,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in decimal digits (default 60)")
    common.add_argument("--max-m", dest="max_m", type=int, help="largest index in tables and sums")
    common.add_argument("--grid", help="evaluation points 're,im;re,im;...'")
    common.add_argument("--format", choices=FORMATS, help="output format (default csv)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--abel", help="Abel damping radius r for the conjecture sums")
    common.add_argument("--config", help="key=value configuration file; flags override it")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a verify tolerance")

    ap = _Parser(prog="zetaexp", description="High-precision zeta expansion laboratory.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "qpoly":
            p.add_argument("--family", choices=["Q", "q"], default="Q")
            p.add_argument("--m", type=int, help="polynomial index (defaults to --max-m, then 2)")
            p.add_argument("--roots", action="store_true", help="also list the real roots t of p(1/2 + i t)")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        old = mp.mp.dps
        set_precision(cfg.precision_digits)
        try:
            return COMMANDS[args.command](cfg, args)
        finally:
            mp.mp.dps = old
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence failure (m={exc.m}, tolerance={exc.tolerance}): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
