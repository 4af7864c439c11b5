"""Rational functions over Q, tame symbols, and the holonomy of the
Heisenberg bundle <f, g> along loops.

The holonomy is

    I(f, g, gamma) = int dlog f dlog g - log g(p) int dlog f + log f(p) int dlog g

in C / Z(2), where p is the base point of gamma.  Since Z(2) = (2 pi i)^2 Z
= -4 pi^2 Z is real, representatives are normalized by reducing the real
part modulo 4 pi^2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

import mpmath
import sympy

from .errors import DomainError, ParseError, SingularityError, ZeroFunctionError
from .itint import LogForm
from .numerics import INF, LogConnection, PrecisionConfig, is_infinite, resolve, to_complex, transport_rows
from .paths import Path, PathSegment

_T = sympy.Symbol("t")
Coeffs = tuple[Fraction, ...]  # lowest degree first


def _trim(c: Sequence[Fraction]) -> Coeffs:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _peval(c: Coeffs, x: Any) -> Any:
    acc: Any = 0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _to_sympy(c: Coeffs) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(v.numerator, v.denominator) for v in reversed(c)] or [0], _T, domain="QQ")


def _from_sympy(p: sympy.Poly) -> Coeffs:
    return _trim(Fraction(int(v.p), int(v.q)) for v in reversed(p.all_coeffs()))


def _deflate(c: Coeffs, a: Fraction) -> tuple[Coeffs, Fraction]:
    """Synthetic division by (t - a): quotient and remainder."""
    if not c:
        return (), Fraction(0)
    out = [Fraction(0)] * (len(c) - 1)
    acc = Fraction(0)
    for i in range(len(c) - 1, 0, -1):
        acc = acc * a + c[i]
        out[i - 1] = acc
    rem = acc * a + c[0]
    return _trim(out), rem


@dataclass(frozen=True)
class RationalFunction:
    """num / den in Q(t), stored coprime with a monic denominator."""

    num: Coeffs
    den: Coeffs = (Fraction(1),)

    def __post_init__(self) -> None:
        num = _trim(Fraction(v) for v in self.num)
        den = _trim(Fraction(v) for v in self.den)
        if not den:
            raise DomainError("denominator is zero")
        if not num:
            object.__setattr__(self, "num", ())
            object.__setattr__(self, "den", (Fraction(1),))
            return
        if len(den) > 1:
            pn, pd = _to_sympy(num), _to_sympy(den)
            g = sympy.gcd(pn, pd)
            if g.degree() > 0:
                num, den = _from_sympy(sympy.div(pn, g)[0]), _from_sympy(sympy.div(pd, g)[0])
        lc = den[-1]
        object.__setattr__(self, "num", tuple(v / lc for v in num))
        object.__setattr__(self, "den", tuple(v / lc for v in den))

    @classmethod
    def constant(cls, c: Any) -> RationalFunction:
        return cls((Fraction(c),))

    @classmethod
    def t(cls) -> RationalFunction:
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def linear(cls, a: Any) -> RationalFunction:
        """t - a."""
        return cls((-Fraction(a), Fraction(1)))

    @classmethod
    def from_roots(cls, lead: Any, roots: dict[Any, int]) -> RationalFunction:
        """lead * prod (t - a)^e."""
        num: Coeffs = (Fraction(lead),)
        den: Coeffs = (Fraction(1),)
        for a, e in roots.items():
            lin = (-Fraction(a), Fraction(1))
            for _ in range(abs(e)):
                if e > 0:
                    num = _pmul(num, lin)
                else:
                    den = _pmul(den, lin)
        return cls(num, den)

    @classmethod
    def parse(cls, text: str) -> RationalFunction:
        return parse_rational_function(text)

    def is_zero(self) -> bool:
        return not self.num

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __truediv__(self, other: RationalFunction) -> RationalFunction:
        if other.is_zero():
            raise ZeroFunctionError("division by the zero function")
        return RationalFunction(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __pow__(self, k: int) -> RationalFunction:
        if k < 0:
            return RationalFunction.constant(1) / (self ** (-k))
        out = RationalFunction.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: RationalFunction) -> RationalFunction:
        n1 = _pmul(self.num, other.den)
        n2 = _pmul(other.num, self.den)
        size = max(len(n1), len(n2))
        n = [(n1[i] if i < len(n1) else 0) + (n2[i] if i < len(n2) else 0) for i in range(size)]
        return RationalFunction(tuple(n), _pmul(self.den, other.den))

    def __neg__(self) -> RationalFunction:
        return RationalFunction(tuple(-v for v in self.num), self.den)

    def __sub__(self, other: RationalFunction) -> RationalFunction:
        return self + (-other)

    def __call__(self, x: Any) -> Any:
        """Exact value at rationals, mpc elsewhere."""
        if isinstance(x, (int, Fraction)):
            d = _peval(self.den, Fraction(x))
            if d == 0:
                raise DomainError(f"pole at t = {x}")
            return _peval(self.num, Fraction(x)) / d
        xv = to_complex(x)
        d = _peval(self.den, xv)
        if d == 0:
            raise DomainError(f"pole at t = {xv}")
        return _peval(self.num, xv) / d

    def degree(self) -> tuple[int, int]:
        return len(self.num) - 1, len(self.den) - 1

    def leading_ratio(self) -> Fraction:
        return self.num[-1] / self.den[-1]

    def to_sympy(self) -> sympy.Expr:
        return _to_sympy(self.num).as_expr() / _to_sympy(self.den).as_expr()

    def __str__(self) -> str:
        return str(sympy.factor(self.to_sympy()))

    # zeros and poles
    def rational_support(self) -> dict[Fraction, int]:
        """Rational zeros (positive) and poles (negative) with their orders."""
        if self.is_zero():
            raise ZeroFunctionError("the zero function has no divisor")
        return _rational_divisor(self.num, self.den)

    def is_split(self) -> bool:
        """True when numerator and denominator factor into linear factors over Q."""
        total = sum(abs(e) for e in self.rational_support().values())
        return total == (len(self.num) - 1) + (len(self.den) - 1)

    def log_poles(self, prec: PrecisionConfig | None = None) -> list[tuple[Any, int]]:
        """Poles of dlog f with residues: rational points exactly, the rest numerically."""
        if self.is_zero():
            raise ZeroFunctionError("dlog of the zero function")
        prec = resolve(prec)
        out: list[tuple[Any, int]] = list(self.rational_support().items())
        with prec.workprec():
            for poly, sign in ((self.num, 1), (self.den, -1)):
                for factor, mult in _irrational_factors(poly):
                    for root in mpmath.polyroots([mpmath.mpf(v.numerator) / v.denominator for v in reversed(factor)],
                                                 maxsteps=200, extraprec=2 * mpmath.mp.prec):
                        out.append((mpmath.mpc(root), sign * mult))
        return out


@lru_cache(maxsize=4096)
def _rational_divisor(num: Coeffs, den: Coeffs) -> dict[Fraction, int]:
    out: dict[Fraction, int] = {}
    for poly, sign in ((num, 1), (den, -1)):
        if len(poly) <= 1:
            continue
        _, factors = sympy.factor_list(_to_sympy(poly))
        for fac, mult in factors:
            if fac.degree() == 1:
                a, b = fac.all_coeffs()
                root = Fraction(int((-b / a).p), int((-b / a).q))
                out[root] = out.get(root, 0) + sign * int(mult)
    return {a: e for a, e in out.items() if e}


@lru_cache(maxsize=4096)
def _irrational_factors(poly: Coeffs) -> tuple[tuple[Coeffs, int], ...]:
    if len(poly) <= 2:
        return ()
    _, factors = sympy.factor_list(_to_sympy(poly))
    return tuple((_from_sympy(f), int(m)) for f, m in factors if f.degree() > 1)


_ALLOWED = re.compile(r"^[0-9t+\-*/^().\s]*$")


def parse_rational_function(text: str) -> RationalFunction:
    """Parse polynomial/rational syntax in the variable t, e.g. ``(2)t^2 + (-1/3)t + 1`` or ``(t-1)/(t+2)``."""
    src = text.strip()
    if not src:
        raise ParseError("empty rational function")
    if not _ALLOWED.match(src):
        raise ParseError(f"unexpected characters in {text!r}; only t, digits, + - * / ^ ( ) . allowed")
    from sympy.parsing.sympy_parser import (
        convert_xor,
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )

    try:
        expr = parse_expr(src, local_dict={"t": _T},
                          transformations=standard_transformations + (implicit_multiplication_application, convert_xor),
                          evaluate=True)
        expr = sympy.nsimplify(expr, rational=True)
        num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
        pn = sympy.Poly(num, _T, domain="QQ")
        pd = sympy.Poly(den, _T, domain="QQ")
    except (sympy.SympifyError, SyntaxError, TypeError, ValueError, sympy.PolynomialError) as exc:
        raise ParseError(f"cannot parse rational function {text!r}: {exc}") from None
    if pd.is_zero:
        raise ParseError("denominator is zero")
    return RationalFunction(_from_sympy(pn), _from_sympy(pd))


# ---------------------------------------------------------------------------
# valuations and tame symbols


def valuation_point(p: Any) -> Any:
    if is_infinite(p):
        return INF
    if isinstance(p, str):
        try:
            return Fraction(p.strip())
        except ValueError as exc:
            raise ParseError(f"valuation point must be rational or inf, got {p!r}") from exc
    return Fraction(p)


def order_at(f: RationalFunction, p: Any) -> int:
    """nu_p(f); at infinity nu = deg(den) - deg(num)."""
    if f.is_zero():
        raise ZeroFunctionError("the zero function has no valuation")
    p = valuation_point(p)
    if p is INF:
        return (len(f.den) - 1) - (len(f.num) - 1)
    return _multiplicity(f.num, p) - _multiplicity(f.den, p)


def _multiplicity(c: Coeffs, a: Fraction) -> int:
    k = 0
    while len(c) > 1:
        q, r = _deflate(c, a)
        if r != 0:
            break
        c = q
        k += 1
    return k


def leading_unit(f: RationalFunction, p: Any) -> Fraction:
    """Value at p of f / pi^nu, for the uniformizer pi = t - p (or 1/t at infinity)."""
    p = valuation_point(p)
    if p is INF:
        return f.leading_ratio()
    num, den = f.num, f.den
    for _ in range(_multiplicity(num, p)):
        num = _deflate(num, p)[0]
    for _ in range(_multiplicity(den, p)):
        den = _deflate(den, p)[0]
    return _peval(num, p) / _peval(den, p)


def tame_symbol(f: RationalFunction, g: RationalFunction, p: Any) -> Fraction:
    """(f, g)_p = (-1)^(nu f nu g) f^(nu g) / g^(nu f) evaluated in the residue field."""
    if f.is_zero() or g.is_zero():
        raise ZeroFunctionError("tame symbol of the zero function")
    nf, ng = order_at(f, p), order_at(g, p)
    uf, ug = leading_unit(f, p), leading_unit(g, p)
    sign = -1 if (nf * ng) % 2 else 1
    return sign * uf ** ng / ug ** nf


def support_points(fs: Iterable[RationalFunction]) -> list[Any]:
    pts: set[Fraction] = set()
    for f in fs:
        pts.update(f.rational_support())
    return sorted(pts) + [INF]


def reciprocity_product(f: RationalFunction, g: RationalFunction) -> Fraction:
    """Product of (f, g)_p over all points of P^1; equals 1 for functions split over Q."""
    if not (f.is_split() and g.is_split()):
        raise DomainError("reciprocity over rational points needs f and g split over Q")
    out = Fraction(1)
    for p in support_points((f, g)):
        out *= tame_symbol(f, g, p)
    return out


# ---------------------------------------------------------------------------
# holonomy


def _two_pi_i_sq() -> mpmath.mpf:
    return -4 * mpmath.pi ** 2


@dataclass(frozen=True)
class RegulatorValue:
    """A class in C / Z(2), kept as a representative plus its normalization."""

    representative: mpmath.mpc

    @property
    def lattice_step(self) -> mpmath.mpf:
        return 4 * mpmath.pi ** 2

    def lattice_index(self) -> int:
        return int(mpmath.nint(self.representative.real / self.lattice_step))

    @property
    def normalized(self) -> mpmath.mpc:
        """Representative with real part reduced into [-2 pi^2, 2 pi^2]."""
        return self.representative - self.lattice_index() * self.lattice_step

    def distance_to_lattice(self) -> mpmath.mpf:
        return abs(self.normalized)

    def __add__(self, other: RegulatorValue) -> RegulatorValue:
        return RegulatorValue(self.representative + other.representative)

    def __sub__(self, other: RegulatorValue) -> RegulatorValue:
        return RegulatorValue(self.representative - other.representative)

    def __neg__(self) -> RegulatorValue:
        return RegulatorValue(-self.representative)

    def equals(self, other: RegulatorValue, tol: Any) -> bool:
        return (self - other).distance_to_lattice() < tol

    def to_cstar(self) -> mpmath.mpc:
        """exp(I / 2 pi i): the identification C/Z(2) -> C^* used for comparison with tame symbols."""
        return mpmath.exp(self.representative / mpmath.mpc(0, 2 * mpmath.pi))


def _base_value(f: RationalFunction, p: Any) -> mpmath.mpc:
    try:
        v = f(p)
    except DomainError:
        raise SingularityError("the loop's base point is a pole") from None
    v = to_complex(v)
    if v == 0:
        raise SingularityError("the loop's base point is a zero")
    return v


def holonomy_integrals(f: RationalFunction, g: RationalFunction, loop: Path,
                       prec: PrecisionConfig | None = None) -> tuple[mpmath.mpc, mpmath.mpc, mpmath.mpc]:
    """(int dlog f, int dlog g, int dlog f dlog g) along ``loop``, from one 3x3 transport."""
    prec = resolve(prec)
    with prec.workprec():
        data: dict[Any, dict[tuple[int, int], Any]] = {}
        for a, c in LogForm.dlog(f, prec).terms:
            data.setdefault(a, {})[(0, 1)] = c
        for a, c in LogForm.dlog(g, prec).terms:
            data.setdefault(a, {})[(1, 2)] = c
        if not data:
            return mpmath.mpc(0), mpmath.mpc(0), mpmath.mpc(0)
        conn = LogConnection.from_dict(3, data)
        rows = transport_rows(conn, loop, [[1, 0, 0], [0, 1, 0]], prec, cache_arcs=False)
        return rows[0][1], rows[1][2], rows[0][2]


def heisenberg_holonomy(f: RationalFunction, g: RationalFunction, loop: Path,
                        prec: PrecisionConfig | None = None) -> RegulatorValue:
    """I(f, g, loop) in C / Z(2), with principal logarithms of f and g at the base point."""
    if f.is_zero() or g.is_zero():
        raise ZeroFunctionError("holonomy of the zero function")
    prec = resolve(prec)
    with prec.workprec():
        base = loop.basepoint
        fp, gp = _base_value(f, base), _base_value(g, base)
        int_f, int_g, int_fg = holonomy_integrals(f, g, loop, prec)
        value = int_fg - mpmath.log(gp) * int_f + mpmath.log(fp) * int_g
        return RegulatorValue(value)


def _all_special_points(fs: Iterable[RationalFunction], prec: PrecisionConfig) -> list[mpmath.mpc]:
    pts = []
    for f in fs:
        for a, _ in f.log_poles(prec):
            pts.append(to_complex(a))
    return pts


def small_loop(p: Any, fs: Sequence[RationalFunction], prec: PrecisionConfig | None = None) -> Path:
    """Positively oriented circle around p (clockwise large circle for p = infinity) avoiding other special points."""
    prec = resolve(prec)
    with prec.workprec():
        pts = _all_special_points(fs, prec)
        p = valuation_point(p)
        if p is INF:
            big = max([abs(q) for q in pts] + [mpmath.mpf(1)])
            radius = Fraction(int(mpmath.ceil(2 * big)) + 1)
            return Path((PathSegment.arc(0, radius, 0, -2),), radius)
        pv = to_complex(p)
        others = [abs(q - pv) for q in pts if abs(q - pv) > 0]
        gap = min(others) if others else mpmath.mpf(1)
        radius = Fraction(1, 2)
        while mpmath.mpf(radius.numerator) / radius.denominator >= gap / 2:
            radius /= 2
        return Path((PathSegment.arc(p, radius, 0, 2),), p + radius)


def holonomy_vs_tame(f: RationalFunction, g: RationalFunction, p: Any,
                     prec: PrecisionConfig | None = None) -> tuple[mpmath.mpc, Fraction]:
    """(exp(I/2 pi i) around a small loop at p, (f, g)_p)."""
    prec = resolve(prec)
    loop = small_loop(p, (f, g), prec)
    with prec.workprec():
        hol = heisenberg_holonomy(f, g, loop, prec).to_cstar()
    return hol, tame_symbol(f, g, p)


def steinberg_residual(loop: Path, prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """Distance of I(1 - t, t, loop) from Z(2)."""
    one_minus_t = RationalFunction((Fraction(1), Fraction(-1)))
    prec = resolve(prec)
    with prec.workprec():
        return heisenberg_holonomy(one_minus_t, RationalFunction.t(), loop, prec).distance_to_lattice()


def random_split_function(rng, points: Sequence[Fraction], max_order: int = 2, lead_range: int = 5) -> RationalFunction:
    """lead * prod (t - a)^e with e drawn from [-max_order, max_order] over a subset of ``points``."""
    lead = Fraction(rng.choice([k for k in range(-lead_range, lead_range + 1) if k]), rng.randint(1, lead_range))
    roots = {a: rng.randint(-max_order, max_order) for a in points if rng.random() < 0.6}
    return RationalFunction.from_roots(lead, roots)
