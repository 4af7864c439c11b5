"""Scissors-congruence (Bloch group) elements, the map [x] -> (1-x) ^ x into
the exterior square of Q^*, the rho function, cross ratios and ideal
tetrahedron volumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Any, Iterable, Mapping, Sequence

import mpmath
import sympy

from .errors import DegenerateConfigurationError, ParseError
from .numerics import INF, PrecisionConfig, is_infinite, parse_complex, resolve, to_complex, transport_rows
from .paths import Path, exact_point, route_to
from .polylog import base_state, connection_form, d2

# ---------------------------------------------------------------------------
# points of the projective line


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^1: a finite value (Fraction or complex) or infinity (value None)."""

    value: Any = None

    @classmethod
    def of(cls, x: Any) -> ProjectivePoint:
        if isinstance(x, ProjectivePoint):
            return x
        if x is None or is_infinite(x):
            return INFINITY
        if isinstance(x, str):
            re_part, im_part = parse_complex(x)
            return cls(re_part if im_part == 0 else exact_point((re_part, im_part)))
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        return cls(to_complex(x))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        return str(self.value)


INFINITY = ProjectivePoint(None)


def _diff(a: ProjectivePoint, b: ProjectivePoint) -> Any:
    """a - b for finite points, exact when both are rational."""
    if isinstance(a.value, Fraction) and isinstance(b.value, Fraction):
        return a.value - b.value
    return to_complex(a.value) - to_complex(b.value)


def _same(a: ProjectivePoint, b: ProjectivePoint) -> bool:
    if a.is_infinite or b.is_infinite:
        return a.is_infinite and b.is_infinite
    return _diff(a, b) == 0


def cross_ratio(a0: Any, a1: Any, a2: Any, a3: Any) -> ProjectivePoint:
    """[a0:a1:a2:a3] = ((a0-a2)(a1-a3)) / ((a0-a3)(a1-a2)), so that [z:1:0:inf] = z."""
    pts = [ProjectivePoint.of(a) for a in (a0, a1, a2, a3)]
    for i in range(4):
        for j in range(i + 1, 4):
            if _same(pts[i], pts[j]):
                raise DegenerateConfigurationError(f"points {i} and {j} coincide")
    num_pairs = ((0, 2), (1, 3))
    den_pairs = ((0, 3), (1, 2))
    num: Any = 1
    den: Any = 1
    for i, j in num_pairs:
        if not (pts[i].is_infinite or pts[j].is_infinite):
            num = num * _diff(pts[i], pts[j])
    for i, j in den_pairs:
        if not (pts[i].is_infinite or pts[j].is_infinite):
            den = den * _diff(pts[i], pts[j])
    if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
        return ProjectivePoint(Fraction(num) / Fraction(den))
    return ProjectivePoint(to_complex(num) / to_complex(den))


def tetra_volume(a0: Any, a1: Any, a2: Any, a3: Any, prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """Signed volume D2([a0:a1:a2:a3]) of the ideal tetrahedron with these vertices."""
    prec = resolve(prec)
    with prec.workprec():
        return d2(cross_ratio(a0, a1, a2, a3).value, prec)


def omitted_cross_ratios(points: Sequence[Any]) -> list[ProjectivePoint]:
    """Cross ratios of the five 4-point subsets, omitting a_0, ..., a_4 in turn."""
    if len(points) != 5:
        raise DegenerateConfigurationError("need exactly five points")
    return [cross_ratio(*[p for k, p in enumerate(points) if k != j]) for j in range(5)]


def polyhedron_check(points: Sequence[Any], prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """|vol(three-tetrahedron decomposition) - vol(two-tetrahedron decomposition)| of the 5-vertex polyhedron."""
    prec = resolve(prec)
    with prec.workprec():
        vols = [d2(c.value, prec) for c in omitted_cross_ratios(points)]
        return abs((vols[0] + vols[2] + vols[4]) - (vols[1] + vols[3]))


def permutation_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def antisymmetry_residual(points: Sequence[Any], prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """max over all 24 permutations of |D2([a_s0:...:a_s3]) - sgn(s) D2([a0:...:a3])|."""
    prec = resolve(prec)
    with prec.workprec():
        base = tetra_volume(*points, prec=prec)
        worst = mpmath.mpf(0)
        for perm in permutations(range(4)):
            v = tetra_volume(*[points[k] for k in perm], prec=prec)
            worst = max(worst, abs(v - permutation_sign(perm) * base))
        return worst


# ---------------------------------------------------------------------------
# Bloch group elements


def _element_key(x: Any) -> Any:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, tuple):
        return exact_point(x)
    return to_complex(x)


def _sort_key(x: Any) -> tuple:
    if isinstance(x, Fraction):
        return (0, x, Fraction(0))
    if isinstance(x, tuple):
        return (0, x[0], x[1])
    return (1, float(x.real), float(x.imag))


@dataclass(frozen=True)
class BlochCombo:
    """Finite integer combination of symbols [x], x outside {0, 1}."""

    terms: tuple[tuple[Any, int], ...] = ()

    def __post_init__(self) -> None:
        acc: dict[Any, int] = {}
        for x, c in self.terms:
            key = _element_key(x)
            xv = key if isinstance(key, Fraction) else None
            if xv is not None and xv in (0, 1):
                raise DegenerateConfigurationError(f"[{xv}] is not a generator")
            if xv is None and to_complex(key) in (0, 1):
                raise DegenerateConfigurationError(f"[{key}] is not a generator")
            acc[key] = acc.get(key, 0) + int(c)
        items = tuple(sorted(((x, c) for x, c in acc.items() if c), key=lambda t: _sort_key(t[0])))
        object.__setattr__(self, "terms", items)

    @classmethod
    def from_dict(cls, data: Mapping[Any, int]) -> BlochCombo:
        return cls(tuple(data.items()))

    @classmethod
    def generator(cls, x: Any) -> BlochCombo:
        return cls(((x, 1),))

    def __add__(self, other: BlochCombo) -> BlochCombo:
        return BlochCombo(self.terms + other.terms)

    def __neg__(self) -> BlochCombo:
        return BlochCombo(tuple((x, -c) for x, c in self.terms))

    def __sub__(self, other: BlochCombo) -> BlochCombo:
        return self + (-other)

    def scale(self, k: int) -> BlochCombo:
        return BlochCombo(tuple((x, k * c) for x, c in self.terms))

    def is_rational(self) -> bool:
        return all(isinstance(x, Fraction) for x, _ in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{_fmt_element(x)}]" for x, c in self.terms)


def _fmt_element(x: Any) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return f"{x[0]}{'+' if x[1] >= 0 else '-'}{abs(x[1])}i"
    return mpmath.nstr(x, 20)


def _field_ops(x: Any, y: Any):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x, y, Fraction(1)
    return to_complex(x), to_complex(y), mpmath.mpc(1)


def _five_term_setup(x: Any, y: Any):
    x, y = _element_key(x), _element_key(y)
    xv, yv, one = _field_ops(x, y)
    if xv in (0, 1) or yv in (0, 1) or xv == yv:
        raise DegenerateConfigurationError("five-term relation needs distinct x, y outside {0, 1}")
    return xv, yv, one


def _checked(args: list[Any]) -> list[Any]:
    for a in args:
        if a == 0 or a == 1:
            raise DegenerateConfigurationError(f"five-term argument {a} lies in {{0, 1}}")
    return args


def five_term_arguments(x: Any, y: Any) -> list[Any]:
    """x, y, y/x, (1-1/x)/(1-1/y), (1-x)/(1-y), with signs +, -, +, -, +."""
    xv, yv, one = _five_term_setup(x, y)
    return _checked([xv, yv, yv / xv, (one - one / xv) / (one - one / yv), (one - xv) / (one - yv)])


def displayed_five_term_arguments(x: Any, y: Any) -> list[Any]:
    """x, y, y/x, (1-y)/(1-x), (1-1/y)/(1-1/x): the last two inverted relative to five_term_arguments."""
    xv, yv, one = _five_term_setup(x, y)
    return _checked([xv, yv, yv / xv, (one - yv) / (one - xv), (one - one / yv) / (one - one / xv)])


def five_term_element(x: Any, y: Any) -> BlochCombo:
    """[x] - [y] + [y/x] - [(1-1/x)/(1-1/y)] + [(1-x)/(1-y)].

    This normalization is killed exactly by wedge_map.  The variant with the
    last two arguments inverted (five_term_element_displayed) agrees with it
    modulo [z] + [1/z], whose wedge image (-1)^z is 2-torsion.
    """
    return BlochCombo(tuple(zip(five_term_arguments(x, y), (1, -1, 1, -1, 1))))


def five_term_element_displayed(x: Any, y: Any) -> BlochCombo:
    """[x] - [y] + [y/x] - [(1-y)/(1-x)] + [(1-1/y)/(1-1/x)]."""
    return BlochCombo(tuple(zip(displayed_five_term_arguments(x, y), (1, -1, 1, -1, 1))))


def d2_eval(c: BlochCombo, prec: PrecisionConfig | None = None) -> mpmath.mpf:
    prec = resolve(prec)
    with prec.workprec():
        return mpmath.fsum(k * d2(x, prec) for x, k in c.terms)


def parse_combo_text(text: str) -> BlochCombo:
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected '<coeff> <value>'")
        try:
            coeff = int(parts[0])
        except ValueError:
            raise ParseError(f"line {lineno}: coefficient must be an integer") from None
        re_part, im_part = parse_complex(parts[1])
        value = re_part if im_part == 0 else (re_part, im_part)
        terms.append((value, coeff))
    return BlochCombo(tuple(terms))


def format_combo(c: BlochCombo) -> str:
    return "".join(f"{k} {_fmt_element(x)}\n" for x, k in c.terms)


# ---------------------------------------------------------------------------
# exterior square of Q^*

MINUS_ONE = -1


def factor_rational(q: Fraction) -> tuple[int, dict[int, int]]:
    """q = (-1)^s prod p^e: returns (s mod 2, {p: e})."""
    q = Fraction(q)
    if q == 0:
        raise DegenerateConfigurationError("0 is not a unit")
    sign = 1 if q < 0 else 0
    exps: dict[int, int] = {}
    for p, e in sympy.factorint(abs(q.numerator)).items():
        exps[int(p)] = exps.get(int(p), 0) + int(e)
    for p, e in sympy.factorint(q.denominator).items():
        exps[int(p)] = exps.get(int(p), 0) - int(e)
    return sign, {p: e for p, e in exps.items() if e}


@dataclass(frozen=True)
class WedgeElement:
    """Element of Lambda^2 Q^* over the basis -1 < 2 < 3 < 5 < ...; (-1)^p coefficients live in Z/2."""

    terms: tuple[tuple[tuple[int, int], int], ...] = ()

    def __post_init__(self) -> None:
        acc: dict[tuple[int, int], int] = {}
        for (a, b), c in self.terms:
            if a == b:
                continue
            if a > b:
                a, b, c = b, a, -c
            acc[(a, b)] = acc.get((a, b), 0) + c
        norm = {}
        for (a, b), c in acc.items():
            if a == MINUS_ONE:
                c %= 2
            if c:
                norm[(a, b)] = c
        object.__setattr__(self, "terms", tuple(sorted(norm.items())))

    @classmethod
    def wedge(cls, u: Fraction, v: Fraction) -> WedgeElement:
        """u ^ v expanded bilinearly."""
        su, eu = factor_rational(u)
        sv, ev = factor_rational(v)
        terms: list[tuple[tuple[int, int], int]] = []
        for p, e in ev.items():
            if su:
                terms.append(((MINUS_ONE, p), e))
        for p, e in eu.items():
            if sv:
                terms.append(((p, MINUS_ONE), e))
            for q, f in ev.items():
                terms.append(((p, q), e * f))
        return cls(tuple(terms))

    def __add__(self, other: WedgeElement) -> WedgeElement:
        return WedgeElement(self.terms + other.terms)

    def __neg__(self) -> WedgeElement:
        return WedgeElement(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: WedgeElement) -> WedgeElement:
        return self + (-other)

    def scale(self, k: int) -> WedgeElement:
        return WedgeElement(tuple((key, k * c) for key, c in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*({a})^({b})" for (a, b), c in self.terms)


def wedge_map(c: BlochCombo) -> WedgeElement:
    """sum k [x] -> sum k (1 - x) ^ x."""
    out = WedgeElement()
    for x, k in c.terms:
        if not isinstance(x, Fraction):
            raise DegenerateConfigurationError("wedge_map needs rational support")
        out = out + WedgeElement.wedge(1 - x, x).scale(k)
    return out


# ---------------------------------------------------------------------------
# rho and its probe


@dataclass(frozen=True)
class FormalWedge:
    """Unnormalized sum of c * (a ^ b) in Lambda^2 C, with rational weights c."""

    terms: tuple[tuple[Fraction, Any, Any], ...] = ()

    def __add__(self, other: FormalWedge) -> FormalWedge:
        return FormalWedge(self.terms + other.terms)

    def __neg__(self) -> FormalWedge:
        return FormalWedge(tuple((-c, a, b) for c, a, b in self.terms))

    def __sub__(self, other: FormalWedge) -> FormalWedge:
        return self + (-other)

    def scale(self, k: Any) -> FormalWedge:
        return FormalWedge(tuple((Fraction(k) * c, a, b) for c, a, b in self.terms))


def probe_form(a: Any, b: Any) -> mpmath.mpf:
    """beta(a, b) = Re a Im b - Im a Re b."""
    a, b = to_complex(a), to_complex(b)
    return a.real * b.imag - a.imag * b.real


def rho_probe(w: FormalWedge) -> mpmath.mpf:
    return mpmath.fsum((mpmath.mpf(c.numerator) / c.denominator) * probe_form(a, b) for c, a, b in w.terms)


def _branch_rows(x: Any, path: Path, prec: PrecisionConfig) -> list[list[mpmath.mpc]]:
    """Rows 0 and 1 of Lambda (order 2) continued along ``path``."""
    lam = base_state(2, prec).rows
    return transport_rows(connection_form(2), path, [lam[0], lam[1]], prec)


def rho(x: Any, prec: PrecisionConfig | None = None, path: Path | None = None) -> FormalWedge:
    """rho(x) = 1/2 [log x ^ log(1-x) + 2 pi i ^ (Li2(1-x) - Li2(x) - pi^2/6) / (2 pi i)].

    Branches: x is reached along ``path`` (default: the straight route) and
    1 - x along its mirror image, so log(1-x) = -Li_1(x) and Li_2(1-x) are
    continued consistently with Li_2(x).
    """
    prec = resolve(prec)
    with prec.workprec():
        xe = exact_point(x)
        xv = to_complex(xe)
        if xv in (0, 1):
            raise DegenerateConfigurationError("rho is defined on C - {0, 1}")
        if path is None:
            path = route_to(xe)
        tpi = mpmath.mpc(0, 2 * mpmath.pi)
        rows_x = _branch_rows(xe, path, prec)
        rows_y = _branch_rows(None, path.mirrored(), prec)
        log_x = rows_x[1][2] / tpi
        log_1mx = -rows_x[0][1]
        li2_x = rows_x[0][2]
        li2_1mx = rows_y[0][2]
        half = Fraction(1, 2)
        second = (li2_1mx - li2_x - mpmath.pi ** 2 / 6) / tpi
        return FormalWedge(((half, log_x, log_1mx), (half, tpi, second)))


def rho_combo(c: BlochCombo, prec: PrecisionConfig | None = None) -> FormalWedge:
    out = FormalWedge()
    for x, k in c.terms:
        out = out + rho(x, prec).scale(k)
    return out


def points_from_text(text: str) -> list[ProjectivePoint]:
    return [ProjectivePoint.of(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def all_points_distinct(points: Iterable[Any]) -> bool:
    pts = [ProjectivePoint.of(p) for p in points]
    return not any(_same(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts)))


__all__ = [
    "INF",
    "INFINITY",
    "ProjectivePoint",
    "cross_ratio",
    "tetra_volume",
    "polyhedron_check",
    "antisymmetry_residual",
    "BlochCombo",
    "five_term_element",
    "five_term_arguments",
    "five_term_element_displayed",
    "displayed_five_term_arguments",
    "d2_eval",
    "WedgeElement",
    "wedge_map",
    "FormalWedge",
    "rho",
    "rho_probe",
    "rho_combo",
]
