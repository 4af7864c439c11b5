"""Command-line front end.

Every subcommand produces a Report (named columns plus rows of strings),
rendered as an aligned table, CSV, or JSON lines.  Table and CSV output start
with a ``# precision`` comment line; JSON lines carry the same data in a
leading ``{"precision": ...}`` record.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import mpmath

from . import bloch, hopf, itint, monodromy, polylog, regulator, selftest
from .errors import ArgumentError, InvariantViolation, ParseError, PolylogError
from .numerics import PrecisionConfig, format_complex, is_infinite, max_abs_diff, parse_complex
from .paths import MonodromyWord, Path, exact_point, read_path_file

DEFAULT_BITS = 256
DEFAULT_TOL = 1e-30
BITS_ENV = "POLYLOG_BITS"


@dataclass
class Report:
    columns: list[str]
    rows: list[list[str]] = field(default_factory=list)
    text: str | None = None  # preferred rendering in table mode
    failed: bool = False

    def add(self, *values: Any) -> None:
        self.rows.append([str(v) for v in values])


@dataclass(frozen=True)
class RunConfig:
    bits: int = DEFAULT_BITS
    tol: float = DEFAULT_TOL
    n: int = 6
    m: int = 6
    seed: int = 0
    fmt: str = "table"

    @property
    def prec(self) -> PrecisionConfig:
        return PrecisionConfig(self.bits, self.tol)

    @property
    def digits(self) -> int:
        return self.prec.tol_digits

    def annotation(self) -> str:
        return f"bits={self.bits} tol={self.tol:g} digits={self.digits}"


def default_bits() -> int:
    raw = os.environ.get(BITS_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_BITS
    try:
        return int(raw)
    except ValueError:
        raise ArgumentError(f"{BITS_ENV} must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# formatting helpers


def fmt_num(z: Any, cfg: RunConfig) -> str:
    """Complex or real value printed to the tolerance's digits; values below tolerance print as 0."""
    if isinstance(z, (int, Fraction)):
        return str(z)
    z = mpmath.mpmathify(z)
    if abs(z) < cfg.tol:
        return "0"
    if isinstance(z, mpmath.mpc):
        re_part = z.real if abs(z.real) >= cfg.tol else mpmath.mpf(0)
        im_part = z.imag if abs(z.imag) >= cfg.tol else mpmath.mpf(0)
        z = mpmath.mpc(re_part, im_part)
        if im_part == 0:
            return format_complex(re_part, cfg.digits)
        if re_part == 0:
            sign = "-" if im_part < 0 else ""
            return f"{sign}{format_complex(abs(im_part), cfg.digits)}i"
    return format_complex(z, cfg.digits)


def fmt_residual(x: Any) -> str:
    return mpmath.nstr(mpmath.mpmathify(x), 3)


def parse_point(text: str) -> Any:
    """Complex literal ``a+bi`` to an exact point (Fraction or (re, im) pair)."""
    re_part, im_part = parse_complex(text)
    return re_part if im_part == 0 else exact_point((re_part, im_part))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational number, got {text!r}") from None


def parse_range(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ParseError(f"range must look like LO:HI, got {text!r}")
    lo, hi = parse_rational(parts[0]), parse_rational(parts[1])
    if hi < lo:
        raise ArgumentError(f"empty range {text!r}")
    return lo, hi


def parse_form(token: str, cfg: RunConfig) -> itint.LogForm:
    """w0 | w1 | e1 | pole:A | dlog:EXPR  (A a complex literal, EXPR a rational function of t)."""
    token = token.strip()
    if token == "w0":
        return itint.LogForm.omega0()
    if token == "w1":
        return itint.LogForm.omega1()
    if token == "e1":
        return itint.E1
    if token.startswith("pole:"):
        return itint.LogForm.pole(parse_point(token[5:]))
    if token.startswith("dlog:"):
        return itint.LogForm.dlog(regulator.parse_rational_function(token[5:]), cfg.prec)
    raise ParseError(f"unknown form {token!r}; use w0, w1, e1, pole:A or dlog:EXPR")


def _split_list(text: str) -> list[str]:
    sep = ";" if ";" in text else ","
    return [t for t in (s.strip() for s in text.split(sep)) if t]


def _matrix_report(rows: Sequence[Sequence[Any]], cfg: RunConfig, text: str | None = None) -> Report:
    rep = Report(["row", "col", "value"], text=text)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            rep.add(i, j, fmt_num(v, cfg))
    return rep


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args, cfg: RunConfig) -> Report:
    x = parse_point(args.x)
    path = read_path_file(args.path) if args.path else None
    with cfg.prec.workprec():
        value = polylog.branch_value(x, args.k, path, cfg.prec)
        rep = Report(["k", "x", "value"])
        rep.add(args.k, args.x, fmt_num(value, cfg))
    return rep


def _d_command(fn, name: str):
    def run(args, cfg: RunConfig) -> Report:
        x = parse_point(args.x)
        path = read_path_file(args.path) if args.path else None
        with cfg.prec.workprec():
            rep = Report(["x", name])
            rep.add(args.x, fmt_num(fn(x, cfg.prec, path), cfg))
        return rep
    return run


def cmd_d2_grid(args, cfg: RunConfig) -> Report:
    re_lo, re_hi = parse_range(args.re_range)
    im_lo, im_hi = parse_range(args.im_range)
    step = parse_rational(args.step)
    if step <= 0:
        raise ArgumentError("step must be positive")
    rep = Report(["re", "im", "d2"])
    digits = min(cfg.digits, args.digits)
    with cfg.prec.workprec():
        im = im_lo
        while im <= im_hi:
            re_part = re_lo
            while re_part <= re_hi:
                point = re_part if im == 0 else (re_part, im)
                if im == 0 and re_part in (0, 1):
                    value = mpmath.mpf(0)  # continuous extension
                else:
                    value = polylog.d2(point, cfg.prec)
                rep.add(re_part, im, "0" if abs(value) < cfg.tol else mpmath.nstr(value, digits))
                re_part += step
            im += step
    rep.text = None
    return rep


def cmd_monodromy(args, cfg: RunConfig) -> Report:
    word = MonodromyWord.parse(args.word)
    exact = monodromy.monodromy_exact(word, cfg.n)
    if not args.numeric:
        rep = _matrix_report(exact.entries, cfg, text=str(exact))
        return rep
    with cfg.prec.workprec():
        num = monodromy.monodromy_numeric(word, cfg.n, cfg.prec)
        rows = [[num[i, j] for j in range(num.cols)] for i in range(num.rows)]
        resid = max_abs_diff(num, exact.to_numeric(cfg.prec))
        body = "\n".join("[" + "  ".join(fmt_num(v, cfg) for v in r) + "]" for r in rows)
        rep = _matrix_report(rows, cfg, text=f"{body}\n# residual vs exact: {fmt_residual(resid)}")
    return rep


def cmd_limit_mhs(args, cfg: RunConfig) -> Report:
    with cfg.prec.workprec():
        res = monodromy.limit_mhs(args.at, cfg.n, cfg.prec)
        rows = res.rows()
        body = "\n".join("[" + "  ".join(fmt_num(v, cfg) for v in r) + "]" for r in rows)
        text = f"{body}\n# t0 = {res.t0}  residual = {fmt_residual(res.residual)}"
        return _matrix_report(rows, cfg, text=text)


def cmd_itint(args, cfg: RunConfig) -> Report:
    forms = [parse_form(tok, cfg) for tok in _split_list(args.forms)]
    path = read_path_file(args.path)
    with cfg.prec.workprec():
        values = itint.iterated_integrals_all(forms, path, cfg.prec)
    rep = Report(["length", "prefix", "value"])
    for r, v in enumerate(values):
        rep.add(r, " ".join(str(f) for f in forms[:r]) or "()", fmt_num(v, cfg))
    return rep


def cmd_tame(args, cfg: RunConfig) -> Report:
    f = regulator.parse_rational_function(args.f)
    g = regulator.parse_rational_function(args.g)
    value = regulator.tame_symbol(f, g, regulator.valuation_point(args.at))
    rep = Report(["f", "g", "at", "tame"], text=str(value))
    rep.add(f, g, args.at, value)
    return rep


def cmd_holonomy(args, cfg: RunConfig) -> Report:
    f = regulator.parse_rational_function(args.f)
    g = regulator.parse_rational_function(args.g)
    path = read_path_file(args.path)
    with cfg.prec.workprec():
        val = regulator.heisenberg_holonomy(f, g, path, cfg.prec)
        rep = Report(["quantity", "value"])
        rep.add("representative", fmt_num(val.representative, cfg))
        rep.add("normalized", fmt_num(val.normalized, cfg))
        rep.add("lattice_index", val.lattice_index())
        rep.add("exp(I/2pi i)", fmt_num(val.to_cstar(), cfg))
    return rep


def cmd_steinberg(args, cfg: RunConfig) -> Report:
    path = read_path_file(args.path)
    with cfg.prec.workprec():
        resid = regulator.steinberg_residual(path, cfg.prec)
    rep = Report(["steinberg_residual", "passed"])
    rep.add(fmt_residual(resid), resid < cfg.tol)
    rep.failed = not resid < cfg.tol
    return rep


def cmd_bloch_wedge(args, cfg: RunConfig) -> Report:
    try:
        with open(args.combo, encoding="utf-8") as fh:
            combo = bloch.parse_combo_text(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {args.combo}: {exc}") from None
    rep = Report(["quantity", "value"])
    rep.add("combo", combo)
    if combo.is_rational():
        rep.add("wedge", bloch.wedge_map(combo))
    with cfg.prec.workprec():
        rep.add("d2_sum", fmt_num(bloch.d2_eval(combo, cfg.prec), cfg))
    return rep


def cmd_five_term(args, cfg: RunConfig) -> Report:
    x, y = parse_point(args.x), parse_point(args.y)
    combo = bloch.five_term_element(x, y)
    rep = Report(["quantity", "value"])
    rep.add("element", combo)
    if combo.is_rational():
        rep.add("wedge", bloch.wedge_map(combo))
    with cfg.prec.workprec():
        rep.add("d2_sum", fmt_num(bloch.d2_eval(combo, cfg.prec), cfg))
        rep.add("rho_probe_sum", fmt_num(bloch.rho_probe(bloch.rho_combo(combo, cfg.prec)), cfg))
    return rep


def cmd_volume(args, cfg: RunConfig) -> Report:
    points = [tok if is_infinite(tok) else parse_point(tok) for tok in _split_list(args.points)]
    rep = Report(["quantity", "value"])
    with cfg.prec.workprec():
        if len(points) == 4:
            rep.add("cross_ratio", bloch.cross_ratio(*points))
            rep.add("volume", fmt_num(bloch.tetra_volume(*points, prec=cfg.prec), cfg))
        elif len(points) == 5:
            for j, c in enumerate(bloch.omitted_cross_ratios(points)):
                rep.add(f"volume_omit_{j}", fmt_num(polylog.d2(c.value, cfg.prec), cfg))
            rep.add("polyhedron_residual", fmt_residual(bloch.polyhedron_check(points, cfg.prec)))
        else:
            raise ArgumentError("volume needs 4 points (tetrahedron) or 5 (polyhedron check)")
    return rep


def cmd_lie_check(args, cfg: RunConfig) -> Report:
    if args.degree < 2:
        raise ArgumentError("degree must be >= 2")
    rep = Report(["degree", "free_dim", "relation_rank", "quotient_dim", "generator_independent", "rep_kills"])
    ok = True
    for d in range(2, args.degree + 1):
        basis = hopf.quotient_relation_basis(d) if d >= 3 else []
        kills = all(hopf.represent(b.series, n).is_zero() for b in basis for n in range(1, cfg.n + 1))
        indep = hopf.quotient_generator_independent(d)
        qdim = hopf.quotient_dimension(d)
        ok = ok and kills and indep and qdim == 1
        rep.add(d, hopf.witt_dimension(d), hopf.relation_rank(d), qdim, indep, kills)
    rep.failed = not ok
    return rep


def cmd_selftest(args, cfg: RunConfig) -> Report:
    names = list(selftest.SUITES) if args.suite == "all" else [args.suite]
    rep = Report(["suite", "status", "cases", "worst", "tol", "seconds"])
    lines = []
    for name in names:
        res = selftest.run_suite(name, cfg.seed, cfg.prec)
        status = "PASS" if res.passed else "FAIL"
        worst = res.worst if isinstance(res.worst, (int, Fraction)) else fmt_residual(res.worst)
        rep.add(name, status, res.cases, worst, res.tol, f"{res.elapsed:.1f}")
        lines.append(res.line())
        lines.extend(f"  {d}" for d in res.details[:5])
        rep.failed = rep.failed or not res.passed
    rep.text = "\n".join(lines)
    return rep


# ---------------------------------------------------------------------------
# parser


def _common(bits_default: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--bits", type=int, default=bits_default, help=f"working precision in bits (env {BITS_ENV})")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="absolute output tolerance")
    p.add_argument("--n", type=int, default=6, help="polylogarithm order n")
    p.add_argument("--m", type=int, default=6, help="series truncation degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("table", "csv", "json-lines"), default="table")
    return p


def build_parser(bits_default: int = DEFAULT_BITS) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polylogs", description="Polylogarithms, their monodromy and regulators.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common(bits_default)]

    p = sub.add_parser("eval", parents=common, help="branch value of ln_k at x")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--path", help="path file from 1/2 to x")
    p.set_defaults(func=cmd_eval)

    for name, fn in (("d2", polylog.d2), ("d3", polylog.d3)):
        p = sub.add_parser(name, parents=common, help=f"single-valued {name.upper()}(x)")
        p.add_argument("--x", required=True)
        p.add_argument("--path", help="continue along this path instead of the default route")
        p.set_defaults(func=_d_command(fn, name))

    p = sub.add_parser("d2-grid", parents=common, help="D2 on a rectangular grid (CSV columns re, im, d2)")
    p.add_argument("--re-range", default="-2:3")
    p.add_argument("--im-range", default="-2:2")
    p.add_argument("--step", default="1/4")
    p.add_argument("--digits", type=int, default=15)
    p.set_defaults(func=cmd_d2_grid)

    p = sub.add_parser("monodromy", parents=common, help="monodromy matrix of a word in s0, s1")
    p.add_argument("--word", required=True)
    p.add_argument("--numeric", action="store_true", help="compute by transport instead of exactly")
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("limit-mhs", parents=common, help="regularized limit frame at 0 or 1")
    p.add_argument("--at", type=int, choices=(0, 1), required=True)
    p.set_defaults(func=cmd_limit_mhs)

    p = sub.add_parser("itint", parents=common, help="iterated integrals of a word of forms along a path")
    p.add_argument("--forms", required=True, help="comma list of w0, w1, e1, pole:A, dlog:EXPR")
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_itint)

    p = sub.add_parser("tame", parents=common, help="tame symbol (f, g)_p")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--at", required=True)
    p.set_defaults(func=cmd_tame)

    p = sub.add_parser("holonomy", parents=common, help="Heisenberg holonomy I(f, g, loop)")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("steinberg", parents=common, help="distance of I(1-t, t, loop) from the lattice")
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_steinberg)

    p = sub.add_parser("bloch-wedge", parents=common, help="wedge image and D2 sum of a combination file")
    p.add_argument("--combo", required=True)
    p.set_defaults(func=cmd_bloch_wedge)

    p = sub.add_parser("five-term", parents=common, help="five-term element for x, y")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_five_term)

    p = sub.add_parser("volume", parents=common, help="ideal tetrahedron volume or 5-point polyhedron check")
    p.add_argument("--points", required=True, help="comma (or semicolon) separated; 'inf' for infinity")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("lie-check", parents=common, help="quotient Lie algebra checks up to a degree")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_lie_check)

    p = sub.add_parser("selftest", parents=common, help="run acceptance suites")
    p.add_argument("--suite", default="all", choices=["all", *selftest.SUITES])
    p.set_defaults(func=cmd_selftest)
    return parser


def render(rep: Report, cfg: RunConfig) -> str:
    if cfg.fmt == "json-lines":
        lines = [json.dumps({"precision": {"bits": cfg.bits, "tol": cfg.tol, "digits": cfg.digits}})]
        lines += [json.dumps(dict(zip(rep.columns, row))) for row in rep.rows]
        return "\n".join(lines) + "\n"
    header = f"# precision: {cfg.annotation()}\n"
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rep.columns)
        writer.writerows(rep.rows)
        return header + buf.getvalue()
    if rep.text is not None:
        return header + rep.text + "\n"
    widths = [max(len(c), *(len(r[i]) for r in rep.rows)) if rep.rows else len(c) for i, c in enumerate(rep.columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(rep.columns, widths)).rstrip()]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in rep.rows]
    return header + "\n".join(out) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    try:
        bits_default = default_bits()
    except PolylogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    parser = build_parser(bits_default)
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.bits, args.tol, args.n, args.m, args.seed, args.fmt)
        # parsing, computing and formatting all happen at the working precision
        with cfg.prec.workprec():
            rep = args.func(args, cfg)
    except PolylogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(rep, cfg))
    if rep.failed:
        print(f"error: {InvariantViolation.__name__}: check failed", file=sys.stderr)
        return InvariantViolation.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
