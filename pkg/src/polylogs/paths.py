"""Piecewise line/arc contours in the punctured plane and homotopy words.

Points are kept exact (``Fraction`` or pairs of ``Fraction``) whenever the
caller supplies exact data, and are converted to mpmath numbers only at the
precision of the computation that consumes them.  Arc angles are stored in
units of pi, so the standard loops are exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import mpmath
from mpmath import mp

from .errors import DiscontinuityError, ParseError, SingularityError
from .numerics import to_complex

HALF = Fraction(1, 2)
SINGULAR_POINTS = (Fraction(0), Fraction(1))


def exact_point(value: Any) -> Any:
    """Normalize a point: exact rationals/pairs stay exact, anything else becomes mpc."""
    if isinstance(value, bool):
        raise TypeError("bool is not a point")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, tuple) and len(value) == 2:
        re_part, im_part = value
        if isinstance(re_part, (int, Fraction)) and isinstance(im_part, (int, Fraction)):
            if im_part == 0:
                return Fraction(re_part)
            return (Fraction(re_part), Fraction(im_part))
    return to_complex(value)


def exact_angle(value: Any) -> Any:
    """Angles in units of pi: ints/Fractions stay exact, anything else is an mpf."""
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    return mpmath.mpf(value)


def _mpf(value: Any) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def _distance_point_line(p, a, b) -> mpmath.mpf:
    d = b - a
    dd = abs(d) ** 2
    if dd == 0:
        return abs(p - a)
    u = ((p - a) * mpmath.conj(d)).real / dd
    if u <= 0:
        return abs(p - a)
    if u >= 1:
        return abs(p - b)
    return abs(p - (a + u * d))


@dataclass(frozen=True)
class PathSegment:
    """A straight segment or a circular arc.

    For arcs, ``angle_start``/``angle_end`` are measured in units of pi and
    the orientation is the sign of ``angle_end - angle_start``.
    """

    kind: str
    start: Any = None
    end: Any = None
    center: Any = None
    radius: Any = None
    angle_start: Any = None
    angle_end: Any = None

    def __post_init__(self) -> None:
        if self.kind not in ("line", "arc"):
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.kind == "arc" and not _mpf(self.radius) > 0:
            raise ValueError("arc radius must be positive")

    @classmethod
    def line(cls, start: Any, end: Any) -> PathSegment:
        return cls("line", start=exact_point(start), end=exact_point(end))

    @classmethod
    def arc(cls, center: Any, radius: Any, angle_start: Any, angle_end: Any) -> PathSegment:
        """Arc with angles given in units of pi."""
        r = Fraction(radius) if isinstance(radius, (int, Fraction)) else mpmath.mpf(radius)
        return cls("arc", center=exact_point(center), radius=r,
                   angle_start=exact_angle(angle_start), angle_end=exact_angle(angle_end))

    @classmethod
    def arc_radians(cls, center: Any, radius: Any, theta0: Any, theta1: Any) -> PathSegment:
        return cls.arc(center, radius, mpmath.mpf(theta0) / mpmath.pi, mpmath.mpf(theta1) / mpmath.pi)

    # geometry at the current working precision
    def geometry(self) -> tuple:
        if self.kind == "line":
            return ("line", to_complex(self.start), to_complex(self.end))
        return ("arc", to_complex(self.center), _mpf(self.radius),
                _mpf(self.angle_start) * mpmath.pi, _mpf(self.angle_end) * mpmath.pi)

    def _arc_point(self, angle_pi: Any) -> mpmath.mpc:
        c = to_complex(self.center)
        if isinstance(angle_pi, Fraction):
            # exact quarter turns avoid rounding at the standard basepoints
            q = angle_pi % 2
            unit = {Fraction(0): 1, Fraction(1, 2): 1j, Fraction(1): -1, Fraction(3, 2): -1j}.get(q)
            if unit is not None:
                return c + _mpf(self.radius) * mpmath.mpc(unit)
        return c + _mpf(self.radius) * mpmath.expjpi(_mpf(angle_pi))

    def start_point(self) -> mpmath.mpc:
        if self.kind == "line":
            return to_complex(self.start)
        return self._arc_point(self.angle_start)

    def end_point(self) -> mpmath.mpc:
        if self.kind == "line":
            return to_complex(self.end)
        return self._arc_point(self.angle_end)

    def point_at(self, u: Any) -> mpmath.mpc:
        u = mpmath.mpf(u)
        if self.kind == "line":
            a = to_complex(self.start)
            return a + (to_complex(self.end) - a) * u
        t0, t1 = _mpf(self.angle_start), _mpf(self.angle_end)
        return self._arc_point(t0 + (t1 - t0) * u)

    def length(self) -> mpmath.mpf:
        if self.kind == "line":
            return abs(to_complex(self.end) - to_complex(self.start))
        return _mpf(self.radius) * abs(_mpf(self.angle_end) - _mpf(self.angle_start)) * mpmath.pi

    def distance_to(self, p: Any) -> mpmath.mpf:
        """Euclidean distance from the point ``p`` to this segment."""
        p = to_complex(p)
        if self.kind == "line":
            return _distance_point_line(p, to_complex(self.start), to_complex(self.end))
        c = to_complex(self.center)
        r = _mpf(self.radius)
        t0, t1 = _mpf(self.angle_start), _mpf(self.angle_end)
        lo, hi = min(t0, t1), max(t0, t1)
        rel = p - c
        if rel == 0:
            return r
        if hi - lo >= 2:
            return abs(abs(rel) - r)
        phi = mpmath.arg(rel) / mpmath.pi
        # shift phi into [lo, lo + 2)
        k = mpmath.floor((phi - lo) / 2)
        phi -= 2 * k
        if phi <= hi:
            return abs(abs(rel) - r)
        return min(abs(p - self.start_point()), abs(p - self.end_point()))

    def reversed(self) -> PathSegment:
        if self.kind == "line":
            return PathSegment("line", start=self.end, end=self.start)
        return PathSegment("arc", center=self.center, radius=self.radius,
                           angle_start=self.angle_end, angle_end=self.angle_start)

    def split(self, u: Any) -> tuple[PathSegment, PathSegment]:
        """Cut at parameter ``u`` in (0, 1); exact when ``u`` and the data are exact."""
        if self.kind == "line":
            if isinstance(u, Fraction) and not isinstance(self.start, mpmath.mpc) and not isinstance(self.end, mpmath.mpc):
                mid = _exact_lerp(self.start, self.end, u)
            else:
                mid = self.point_at(u)
            return PathSegment.line(self.start, mid), PathSegment.line(mid, self.end)
        if isinstance(u, Fraction) and isinstance(self.angle_start, Fraction) and isinstance(self.angle_end, Fraction):
            mid = self.angle_start + (self.angle_end - self.angle_start) * u
        else:
            mid = _mpf(self.angle_start) + (_mpf(self.angle_end) - _mpf(self.angle_start)) * mpmath.mpf(u)
        return (PathSegment.arc(self.center, self.radius, self.angle_start, mid),
                PathSegment.arc(self.center, self.radius, mid, self.angle_end))

    def mirrored(self) -> PathSegment:
        """Image under z -> 1 - z."""
        if self.kind == "line":
            return PathSegment.line(_one_minus(self.start), _one_minus(self.end))
        return PathSegment.arc(_one_minus(self.center), self.radius,
                               self.angle_start + 1, self.angle_end + 1)


def _exact_lerp(a: Any, b: Any, u: Fraction) -> Any:
    ar, ai = (a, Fraction(0)) if isinstance(a, Fraction) else a
    br, bi = (b, Fraction(0)) if isinstance(b, Fraction) else b
    return exact_point((ar + (br - ar) * u, ai + (bi - ai) * u))


def _one_minus(p: Any) -> Any:
    if isinstance(p, Fraction):
        return 1 - p
    if isinstance(p, tuple):
        return (1 - p[0], -p[1])
    return 1 - p


def _points_close(a: mpmath.mpc, b: mpmath.mpc) -> bool:
    scale = max(mpmath.mpf(1), abs(a), abs(b))
    return abs(a - b) <= scale * mpmath.mpf(2) ** (-(mp.prec - 8))


@dataclass(frozen=True)
class Path:
    """Ordered segments starting at ``basepoint`` (default 1/2)."""

    segments: tuple[PathSegment, ...] = ()
    basepoint: Any = field(default=HALF)

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "basepoint", exact_point(self.basepoint))

    def __len__(self) -> int:
        return len(self.segments)

    def __add__(self, other: Path) -> Path:
        return compose(self, other)

    def start_point(self) -> mpmath.mpc:
        return to_complex(self.basepoint)

    def end_point(self) -> mpmath.mpc:
        if not self.segments:
            return to_complex(self.basepoint)
        return self.segments[-1].end_point()

    def length(self) -> mpmath.mpf:
        return mpmath.fsum(s.length() for s in self.segments)

    def is_closed(self) -> bool:
        return _points_close(self.start_point(), self.end_point())

    def distance_to(self, p: Any) -> mpmath.mpf:
        if not self.segments:
            return abs(self.start_point() - to_complex(p))
        return min(s.distance_to(p) for s in self.segments)

    def split_segment(self, index: int, u: Any) -> Path:
        first, second = self.segments[index].split(u)
        segs = self.segments[:index] + (first, second) + self.segments[index + 1:]
        return Path(segs, self.basepoint)

    def mirrored(self) -> Path:
        return Path(tuple(s.mirrored() for s in self.segments), _one_minus(self.basepoint))


def validate(path: Path, singular: Iterable[Any] = SINGULAR_POINTS, *, regularized_end: bool = False) -> Path:
    """Check continuity and that no segment passes through a singular point."""
    here = path.start_point()
    for idx, seg in enumerate(path.segments):
        if not _points_close(here, seg.start_point()):
            raise DiscontinuityError(f"segment {idx} starts at {seg.start_point()} but the path is at {here}")
        here = seg.end_point()
    pts = [to_complex(p) for p in singular]
    for idx, seg in enumerate(path.segments):
        last = idx == len(path.segments) - 1
        for p in pts:
            if seg.distance_to(p) == 0 and not (last and regularized_end and _points_close(seg.end_point(), p)):
                raise SingularityError(f"segment {idx} passes through the singular point {p}")
    return path


def compose(first: Path, second: Path) -> Path:
    """Traverse ``first`` then ``second``."""
    if not _points_close(first.end_point(), second.start_point()):
        raise DiscontinuityError(f"cannot compose: {first.end_point()} != {second.start_point()}")
    return Path(first.segments + second.segments, first.basepoint)


def invert(path: Path) -> Path:
    segs = tuple(s.reversed() for s in reversed(path.segments))
    if not path.segments:
        return path
    end = path.segments[-1]
    base = end.end if end.kind == "line" else end.end_point()
    return Path(segs, base)


# ---------------------------------------------------------------------------
# words in the fundamental group

LETTERS = ("s0", "s1", "s0^-1", "s1^-1")
_LETTER_RE = re.compile(r"\s*(?:σ|s|S)\s*([01])\s*(\^\s*-\s*1|⁻¹|\^\{-1\}|-1|')?\s*")


@dataclass(frozen=True)
class MonodromyWord:
    """Word over s0, s1 and their inverses, read left to right (first letter traversed first)."""

    letters: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        for letter in letters:
            if letter not in LETTERS:
                raise ParseError(f"unknown letter {letter!r}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> MonodromyWord:
        text = text.strip()
        if text in ("", "1", "e", "id"):
            return cls(())
        pos, out = 0, []
        compact = text.replace(",", " ").replace("*", " ").replace(".", " ")
        while pos < len(compact):
            m = _LETTER_RE.match(compact, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse monodromy word {text!r} at position {pos}")
            out.append(f"s{m.group(1)}" + ("^-1" if m.group(2) else ""))
            pos = m.end()
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: MonodromyWord) -> MonodromyWord:
        return MonodromyWord(self.letters + other.letters)

    def inverse(self) -> MonodromyWord:
        return MonodromyWord(tuple(inverse_letter(a) for a in reversed(self.letters)))

    def __str__(self) -> str:
        return " ".join(self.letters) if self.letters else "1"


def inverse_letter(letter: str) -> str:
    return letter[:2] if letter.endswith("^-1") else letter + "^-1"


def standard_loop(letter: str) -> Path:
    """Radius-1/2 circles about 0 and 1 based at 1/2, positively oriented for s0, s1."""
    table = {
        "s0": PathSegment.arc(0, HALF, 0, 2),
        "s0^-1": PathSegment.arc(0, HALF, 0, -2),
        "s1": PathSegment.arc(1, HALF, 1, 3),
        "s1^-1": PathSegment.arc(1, HALF, 1, -1),
    }
    if letter not in table:
        letter = MonodromyWord.parse(letter).letters[0] if MonodromyWord.parse(letter).letters else letter
    if letter not in table:
        raise ParseError(f"unknown letter {letter!r}")
    return Path((table[letter],), HALF)


def word_to_path(word: MonodromyWord | str | Sequence[str]) -> Path:
    if isinstance(word, str):
        word = MonodromyWord.parse(word)
    elif not isinstance(word, MonodromyWord):
        word = MonodromyWord(tuple(word))
    segs: tuple[PathSegment, ...] = ()
    for letter in word.letters:
        segs += standard_loop(letter).segments
    return Path(segs, HALF)


def random_word(rng, max_length: int, min_length: int = 0) -> MonodromyWord:
    length = rng.randint(min_length, max_length)
    return MonodromyWord(tuple(rng.choice(LETTERS) for _ in range(length)))


# ---------------------------------------------------------------------------
# straight routes with small detours


def _detour(a: mpmath.mpc, b: mpmath.mpc, p: mpmath.mpc, c: mpmath.mpf, prefer_above: bool):
    """If the chord a->b meets the disk |z - p| < c, return (u_in, u_out, arc) replacing that piece."""
    d = b - a
    dd = abs(d) ** 2
    if dd == 0:
        return None
    # |a + u d - p|^2 = c^2
    w = a - p
    bq = (w * mpmath.conj(d)).real / dd
    cq = (abs(w) ** 2 - c * c) / dd
    disc = bq * bq - cq
    if disc <= 0:
        return None
    root = mpmath.sqrt(disc)
    u_in, u_out = -bq - root, -bq + root
    if u_out <= 0 or u_in >= 1:
        return None
    if u_in <= 0 or u_out >= 1:
        raise SingularityError("route endpoint lies inside a detour disk")
    z_in, z_out = a + u_in * d, a + u_out * d
    t_in = mpmath.arg(z_in - p) / mpmath.pi
    t_out = mpmath.arg(z_out - p) / mpmath.pi
    delta = t_out - t_in
    # candidate sweeps: delta mod 2 in (-1, 1] (short way) and its complement
    delta = delta - 2 * mpmath.floor((delta + 1) / 2)
    side = (mpmath.conj(d) * (p - a)).imag
    sweep = delta
    if abs(side) <= abs(d) * mpmath.mpf(2) ** (-(mp.prec // 2)):
        # chord through the pole: both sweeps have length pi, pick the requested side
        mid = mpmath.sinpi(t_in + mpmath.sign(delta) / 2)
        if (mid > 0) != prefer_above:
            sweep = -delta
    return u_in, u_out, PathSegment.arc(p, c, t_in, t_in + sweep)


def route_to(x: Any, base: Any = HALF, poles: Sequence[Any] = SINGULAR_POINTS) -> Path:
    """Straight route from ``base`` to ``x`` with semicircular detours around nearby poles.

    A pole within c = min(1/4, |x - p|/2) of the chord is bypassed along the
    shorter arc of radius c, which is homotopic to the chord whenever the
    chord misses the pole.  When the chord runs through 0 the detour passes
    above it, and through 1 it passes below; with base 1/2 these reproduce
    the usual principal determinations on the cut lines.
    """
    xe = exact_point(x)
    a, b = to_complex(base), to_complex(xe)
    for p in poles:
        if to_complex(p) == b:
            raise SingularityError(f"route target {b} is a singular point")
    pieces = []
    for p in poles:
        pc = to_complex(p)
        c = min(mpmath.mpf(1) / 4, abs(b - pc) / 2, abs(a - pc) / 2)
        hit = _detour(a, b, pc, c, prefer_above=(pc.real < a.real))
        if hit is not None:
            pieces.append(hit)
    pieces.sort(key=lambda h: h[0])
    segs: list[PathSegment] = []
    here: Any = exact_point(base)
    for _u_in, _u_out, arc in pieces:
        segs.append(PathSegment.line(here, arc.start_point()))
        segs.append(arc)
        here = arc.end_point()
    segs.append(PathSegment.line(here, xe))
    return Path(tuple(s for s in segs if not (s.kind == "line" and s.length() == 0)), exact_point(base))


# ---------------------------------------------------------------------------
# path files

_PI_TOKEN = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?)?\*?pi$")


def _parse_real(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad decimal literal {token!r}") from exc


def _parse_angle(token: str) -> Any:
    """Angle token in radians; ``<q>pi`` forms are kept exact in units of pi."""
    m = _PI_TOKEN.match(token.strip())
    if m:
        coeff = m.group(1)
        if coeff in (None, "", "+"):
            return Fraction(1)
        if coeff == "-":
            return Fraction(-1)
        return _parse_real(coeff)
    return mpmath.mpf(_parse_real(token).numerator) / _parse_real(token).denominator / mpmath.pi


def parse_path_text(text: str) -> Path:
    base: Any = HALF
    segs: list[PathSegment] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].lower()
        try:
            if head == "basepoint":
                if seen_header or segs or len(parts) != 3:
                    raise ParseError("basepoint must be the first directive, with two numbers")
                base = exact_point((_parse_real(parts[1]), _parse_real(parts[2])))
                seen_header = True
            elif head == "line":
                if len(parts) != 5:
                    raise ParseError("line needs 4 numbers")
                vals = [_parse_real(t) for t in parts[1:]]
                segs.append(PathSegment.line((vals[0], vals[1]), (vals[2], vals[3])))
            elif head == "arc":
                if len(parts) != 6:
                    raise ParseError("arc needs 5 numbers")
                cre, cim, rad = (_parse_real(t) for t in parts[1:4])
                if rad <= 0:
                    raise ParseError("arc radius must be positive")
                segs.append(PathSegment.arc((cre, cim), rad, _parse_angle(parts[4]), _parse_angle(parts[5])))
            else:
                raise ParseError(f"unknown directive {parts[0]!r}")
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    path = Path(tuple(segs), base)
    return validate(path, singular=())


def read_path_file(filename: str) -> Path:
    try:
        with open(filename, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read path file {filename}: {exc.strerror}") from None
    return parse_path_text(text)


def _fmt_real(v: Any) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return mpmath.nstr(mpmath.mpf(v.numerator) / v.denominator, 40) if _is_long(v) else _decimal(v)
    return mpmath.nstr(mpmath.mpf(v), 40)


def _is_long(v: Fraction) -> bool:
    d = v.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d != 1


def _decimal(v: Fraction) -> str:
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = 60
        return format(Decimal(v.numerator) / Decimal(v.denominator), "f")


def _split_point(p: Any) -> tuple[Any, Any]:
    if isinstance(p, Fraction):
        return p, Fraction(0)
    if isinstance(p, tuple):
        return p
    return p.real, p.imag


def format_path(path: Path) -> str:
    lines = []
    bre, bim = _split_point(path.basepoint)
    lines.append(f"basepoint {_fmt_real(bre)} {_fmt_real(bim)}")
    for seg in path.segments:
        if seg.kind == "line":
            (ar, ai), (br, bi) = _split_point(seg.start), _split_point(seg.end)
            lines.append(f"line {_fmt_real(ar)} {_fmt_real(ai)} {_fmt_real(br)} {_fmt_real(bi)}")
        else:
            cr, ci = _split_point(seg.center)
            angles = []
            for t in (seg.angle_start, seg.angle_end):
                if isinstance(t, Fraction):
                    angles.append(f"{t}pi")
                else:
                    angles.append(mpmath.nstr(t * mpmath.pi, 40))
            lines.append(f"arc {_fmt_real(cr)} {_fmt_real(ci)} {_fmt_real(seg.radius)} {angles[0]} {angles[1]}")
    return "\n".join(lines) + "\n"
