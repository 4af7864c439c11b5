"""Chen iterated integrals of logarithmic 1-forms along paths.

An iterated integral  int_gamma w_1 ... w_r  (w_1 integrated first) is the
(0, r) entry of the transport of the strictly upper-triangular connection
with w_i in slot (i-1, i).  The transport series Theta collects all of
them for the two forms e0 = dz/z and e1 = -dz/(1-z) = dz/(z-1), which pair
with X0 and X1 respectively (omega = omega0 X0 - omega1 X1).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

import mpmath

from .errors import ArgumentError
from .hopf import TensorSeries
from .numerics import LogConnection, PrecisionConfig, resolve, to_complex, transport_rows
from .paths import Path, exact_point


def _exact_coeff(c: Any) -> Any:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return to_complex(c)


@dataclass(frozen=True)
class LogForm:
    """A logarithmic 1-form  sum_a c_a dz/(z - a)."""

    terms: tuple[tuple[Any, Any], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        merged: dict[Any, Any] = {}
        for a, c in self.terms:
            a = exact_point(a)
            merged[a] = merged.get(a, 0) + _exact_coeff(c)
        object.__setattr__(self, "terms", tuple((a, c) for a, c in merged.items() if c != 0))

    @classmethod
    def pole(cls, a: Any, coeff: Any = 1, name: str = "") -> LogForm:
        return cls(((a, coeff),), name or f"dz/(z-{a})")

    @classmethod
    def omega0(cls) -> LogForm:
        return cls(((0, 1),), "w0")

    @classmethod
    def omega1(cls) -> LogForm:
        """dz/(1 - z) = -dz/(z - 1)."""
        return cls(((1, -1),), "w1")

    @classmethod
    def dlog(cls, f: Any, prec: PrecisionConfig | None = None, name: str = "") -> LogForm:
        """dlog f for a rational function exposing ``log_poles(prec)`` -> [(point, multiplicity)]."""
        return cls(tuple(f.log_poles(prec)), name or f"dlog({f})")

    def poles(self) -> list[Any]:
        return [a for a, _ in self.terms]

    def scaled(self, c: Any) -> LogForm:
        return LogForm(tuple((a, c * v) for a, v in self.terms), self.name)

    def __add__(self, other: LogForm) -> LogForm:
        return LogForm(self.terms + other.terms)

    def __call__(self, z: Any) -> mpmath.mpc:
        """Coefficient of dz at z."""
        z = to_complex(z)
        return mpmath.fsum(to_complex(c) / (z - to_complex(a)) for a, c in self.terms)

    def integrate(self, path: Path, prec: PrecisionConfig | None = None) -> mpmath.mpc:
        """Closed-form single integral: sums of logarithm increments along short chords."""
        prec = resolve(prec)
        with prec.workprec():
            total = mpmath.mpc(0)
            for a, c in self.terms:
                av = to_complex(a)
                inc = mpmath.mpc(0)
                for seg in path.segments:
                    inc += _log_increment(seg, av)
                total += to_complex(c) * inc
            return total

    def __str__(self) -> str:
        return self.name or " + ".join(f"({c})dz/(z-{a})" for a, c in self.terms)


def _log_increment(seg, a: mpmath.mpc) -> mpmath.mpc:
    """Change of log(z - a) along a segment, by principal logs over pieces shorter than the clearance."""
    dist = seg.distance_to(a)
    if dist == 0:
        raise ArgumentError("segment passes through a pole")
    pieces = int(mpmath.ceil(2 * seg.length() / dist)) + 1
    inc = mpmath.mpc(0)
    prev = seg.start_point() - a
    for k in range(1, pieces + 1):
        cur = (seg.point_at(mpmath.mpf(k) / pieces) if k < pieces else seg.end_point()) - a
        inc += mpmath.log(cur / prev)
        prev = cur
    return inc


FormWord = tuple[LogForm, ...]


def word_connection(word: Sequence[LogForm]) -> LogConnection:
    """Strictly upper-triangular connection with w_i in slot (i-1, i)."""
    r = len(word)
    data: dict[Any, dict[tuple[int, int], Any]] = {}
    for i, form in enumerate(word, start=1):
        for a, c in form.terms:
            data.setdefault(a, {})[(i - 1, i)] = c
    return LogConnection.from_dict(r + 1, data)


def iterated_integral(word: Sequence[LogForm], path: Path, prec: PrecisionConfig | None = None, *,
                      clearance: Any = None) -> mpmath.mpc:
    """int_gamma w_1 ... w_r, computed by one transport of the triangular connection."""
    prec = resolve(prec)
    word = tuple(word)
    with prec.workprec():
        if not word:
            return mpmath.mpc(1)
        r = len(word)
        start = [[1] + [0] * r]
        row = transport_rows(word_connection(word), path, start, prec, clearance=clearance, cache_arcs=False)[0]
        return row[r]


def iterated_integrals_all(word: Sequence[LogForm], path: Path, prec: PrecisionConfig | None = None
                           ) -> list[mpmath.mpc]:
    """All prefixes at once: [1, int w_1, int w_1 w_2, ...]."""
    prec = resolve(prec)
    word = tuple(word)
    with prec.workprec():
        if not word:
            return [mpmath.mpc(1)]
        start = [[1] + [0] * len(word)]
        return transport_rows(word_connection(word), path, start, prec, cache_arcs=False)[0]


def shuffle_product(u: Sequence[Any], v: Sequence[Any]) -> Counter:
    """Sum of all (r, s)-shuffles of u and v, as a Counter {word: multiplicity}."""
    return Counter(_shuffles(tuple(u), tuple(v)))


@lru_cache(maxsize=4096)
def _shuffle_cached(u: tuple, v: tuple) -> tuple:
    if not u:
        return (v,)
    if not v:
        return (u,)
    out = [(u[0],) + w for w in _shuffle_cached(u[1:], v)]
    out += [(v[0],) + w for w in _shuffle_cached(u, v[1:])]
    return tuple(out)


def _shuffles(u: tuple, v: tuple) -> Iterable[tuple]:
    return _shuffle_cached(u, v)


# ---------------------------------------------------------------------------
# transport series


E0 = LogForm.omega0()
E1 = LogForm(((1, 1),), "e1")  # -omega1 = dz/(z - 1)


@lru_cache(maxsize=None)
def _word_index(m: int) -> tuple[tuple[tuple[int, ...], ...], dict]:
    words: list[tuple[int, ...]] = [()]
    for r in range(1, m + 1):
        words.extend(w + (a,) for w in words if len(w) == r - 1 for a in (0, 1))
    return tuple(words), {w: i for i, w in enumerate(words)}


@lru_cache(maxsize=None)
def series_connection(m: int) -> LogConnection:
    """Right multiplication by e0 X0 + e1 X1 on the truncated word space."""
    words, index = _word_index(m)
    data: dict[Any, dict[tuple[int, int], Any]] = {Fraction(0): {}, Fraction(1): {}}
    for w in words:
        if len(w) < m:
            data[Fraction(0)][(index[w], index[w + (0,)])] = 1
            data[Fraction(1)][(index[w], index[w + (1,)])] = 1
    return LogConnection.from_dict(len(words), data)


def transport_series(path: Path, m: int, prec: PrecisionConfig | None = None) -> TensorSeries:
    """Theta(gamma) = 1 + sum_w (int_gamma e_w) X_w truncated at degree m."""
    if int(m) != m or m < 1:
        raise ArgumentError(f"truncation degree must be an integer >= 1, got {m!r}")
    prec = resolve(prec)
    words, _ = _word_index(m)
    with prec.workprec():
        if not path.segments:
            return TensorSeries.one(m)
        start = [[1] + [0] * (len(words) - 1)]
        row = transport_rows(series_connection(m), path, start, prec, cache_arcs=False)[0]
        return TensorSeries(m, tuple(zip(words, row)))


def form_word_for(w: Sequence[int]) -> FormWord:
    """The FormWord (e_{i_1}, ..., e_{i_r}) matching a word in X0, X1."""
    return tuple(E0 if a == 0 else E1 for a in w)
