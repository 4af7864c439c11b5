"""Truncated free associative algebra on X0, X1 with its Hopf structure,
Lyndon bases of the free Lie algebra, the polylogarithm quotient and its
matrix representation.

Words are tuples over {0, 1}; letter i stands for X_i.  Coefficients are
Fractions in exact computations and mpmath numbers once transport enters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Iterable, Iterator, Mapping

import mpmath

from .errors import ArgumentError, DomainError
from .monodromy import ExactMatrix, monodromy_exact
from .numerics import PrecisionConfig, max_abs_diff, resolve

Word = tuple[int, ...]
LETTER_NAMES = ("X0", "X1")


def all_words(max_len: int, min_len: int = 0) -> Iterator[Word]:
    for r in range(min_len, max_len + 1):
        yield from product((0, 1), repeat=r)


def _is_zero(c: Any) -> bool:
    return c == 0


@dataclass(frozen=True)
class TensorSeries:
    """Element of Q<X0, X1> (or C<X0, X1>) truncated above degree ``m``."""

    m: int
    terms: tuple[tuple[Word, Any], ...] = ()

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ArgumentError("truncation degree must be >= 0")
        clean: dict[Word, Any] = {}
        for w, c in self.terms:
            w = tuple(int(a) for a in w)
            if any(a not in (0, 1) for a in w):
                raise ArgumentError(f"letters must be 0 or 1, got {w}")
            if len(w) <= self.m and not _is_zero(c):
                clean[w] = clean.get(w, 0) + c
        items = tuple(sorted(((w, c) for w, c in clean.items() if not _is_zero(c)), key=lambda t: (len(t[0]), t[0])))
        object.__setattr__(self, "terms", items)

    # construction
    @classmethod
    def from_dict(cls, m: int, data: Mapping[Word, Any]) -> TensorSeries:
        return cls(m, tuple(data.items()))

    @classmethod
    def one(cls, m: int) -> TensorSeries:
        return cls(m, (((), Fraction(1)),))

    @classmethod
    def zero(cls, m: int) -> TensorSeries:
        return cls(m, ())

    @classmethod
    def letter(cls, i: int, m: int) -> TensorSeries:
        return cls(m, (((i,), Fraction(1)),))

    @property
    def coeffs(self) -> dict[Word, Any]:
        return dict(self.terms)

    def __getitem__(self, w: Word) -> Any:
        return self.coeffs.get(tuple(w), 0)

    def constant_term(self) -> Any:
        return self.coeffs.get((), 0)

    def truncate(self, m: int) -> TensorSeries:
        return TensorSeries(min(m, self.m), self.terms)

    def degree_part(self, d: int) -> TensorSeries:
        return TensorSeries(self.m, tuple((w, c) for w, c in self.terms if len(w) == d))

    def is_homogeneous(self, d: int) -> bool:
        return all(len(w) == d for w, _ in self.terms)

    # arithmetic
    def _coerce(self, other: TensorSeries) -> int:
        if not isinstance(other, TensorSeries):
            raise TypeError("expected a TensorSeries")
        return min(self.m, other.m)

    def __add__(self, other: TensorSeries) -> TensorSeries:
        return TensorSeries(self._coerce(other), self.terms + other.terms)

    def __neg__(self) -> TensorSeries:
        return TensorSeries(self.m, tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: TensorSeries) -> TensorSeries:
        return self + (-other)

    def scale(self, c: Any) -> TensorSeries:
        return TensorSeries(self.m, tuple((w, c * v) for w, v in self.terms))

    def __mul__(self, other: Any) -> TensorSeries:
        if isinstance(other, TensorSeries):
            return concat_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.m, self.terms))

    def max_abs(self) -> Any:
        return max((abs(c) for _, c in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            name = "*".join(LETTER_NAMES[a] for a in w) or "1"
            parts.append(f"({c})*{name}")
        return " + ".join(parts)


def concat_product(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    m = min(a.m, b.m)
    out: dict[Word, Any] = {}
    for u, cu in a.terms:
        for v, cv in b.terms:
            if len(u) + len(v) <= m:
                w = u + v
                out[w] = out.get(w, 0) + cu * cv
    return TensorSeries.from_dict(m, out)


def bracket(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    return concat_product(a, b) - concat_product(b, a)


# ---------------------------------------------------------------------------
# coproduct


@lru_cache(maxsize=4096)
def deshuffle(w: Word) -> tuple[tuple[tuple[Word, Word], int], ...]:
    """Delta(w) for the letter-primitive coproduct: sum over subsets of positions."""
    if not w:
        return ((((), ()), 1),)
    prev = deshuffle(w[:-1])
    x = w[-1]
    out: dict[tuple[Word, Word], int] = {}
    for (u, v), c in prev:
        for key in ((u + (x,), v), (u, v + (x,))):
            out[key] = out.get(key, 0) + c
    return tuple(sorted(out.items()))


def coproduct(a: TensorSeries) -> dict[tuple[Word, Word], Any]:
    """Delta(a) as a table {(u, v): coefficient}, truncated at |u| + |v| <= m."""
    out: dict[tuple[Word, Word], Any] = {}
    for w, c in a.terms:
        for key, k in deshuffle(w):
            out[key] = out.get(key, 0) + k * c
    return {k: v for k, v in out.items() if not _is_zero(v)}


def tensor(a: TensorSeries, b: TensorSeries) -> dict[tuple[Word, Word], Any]:
    m = min(a.m, b.m)
    out: dict[tuple[Word, Word], Any] = {}
    for u, cu in a.terms:
        for v, cv in b.terms:
            if len(u) + len(v) <= m:
                out[(u, v)] = out.get((u, v), 0) + cu * cv
    return out


def _table_residual(x: dict, y: dict) -> Any:
    keys = set(x) | set(y)
    worst: Any = 0
    for k in keys:
        d = abs(x.get(k, 0) - y.get(k, 0))
        if d > worst:
            worst = d
    return worst


def is_grouplike(a: TensorSeries) -> Any:
    """max |Delta(a) - a (x) a| over all coefficients through degree m."""
    return _table_residual(coproduct(a), tensor(a, a))


def is_primitive(a: TensorSeries) -> Any:
    """max |Delta(a) - 1 (x) a - a (x) 1| through degree m."""
    one = TensorSeries.one(a.m)
    rhs = tensor(one, a)
    for k, v in tensor(a, one).items():
        rhs[k] = rhs.get(k, 0) + v
    return _table_residual(coproduct(a), rhs)


def series_exp(a: TensorSeries) -> TensorSeries:
    if not _is_zero(a.constant_term()):
        raise DomainError("series_exp needs zero constant term")
    out = TensorSeries.one(a.m)
    term = TensorSeries.one(a.m)
    for k in range(1, a.m + 1):
        term = concat_product(term, a).scale(Fraction(1, k))
        out = out + term
    return out


def series_log(a: TensorSeries) -> TensorSeries:
    if a.constant_term() != 1:
        raise DomainError("series_log needs constant term 1")
    b = a - TensorSeries.one(a.m)
    out = TensorSeries.zero(a.m)
    power = TensorSeries.one(a.m)
    for k in range(1, a.m + 1):
        power = concat_product(power, b)
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


# ---------------------------------------------------------------------------
# Lyndon words and the free Lie algebra


def lyndon_words(max_len: int, alphabet: int = 2) -> list[Word]:
    """Lyndon words of length 1..max_len in lexicographic order (Duval's algorithm)."""
    out: list[Word] = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()
    return out


def is_lyndon(w: Word) -> bool:
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """w = uv with v the longest proper suffix of w that is Lyndon."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ArgumentError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def lyndon_bracket(w: Word, m: int) -> TensorSeries:
    """Standard bracketing P(w): a letter, or [P(u), P(v)] for the standard factorization."""
    if not is_lyndon(w):
        raise ArgumentError(f"{w} is not a Lyndon word")
    if len(w) == 1:
        return TensorSeries.letter(w[0], m)
    u, v = standard_factorization(w)
    return bracket(lyndon_bracket(u, m), lyndon_bracket(v, m))


def witt_dimension(d: int) -> int:
    """dim of the degree-d part of the free Lie algebra on two generators."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * 2 ** (d // e)
    return total // d


def _mobius(k: int) -> int:
    result, p = 1, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    return -result if k > 1 else result


def lyndon_coordinates(a: TensorSeries) -> dict[Word, Any]:
    """Coefficients of a Lie element in the basis {P(w)}, by peeling off lex-minimal support words.

    Raises DomainError if ``a`` is not a Lie element.
    """
    rest = a
    coords: dict[Word, Any] = {}
    while rest.terms:
        d = min(len(w) for w, _ in rest.terms)
        w, c = min(((w, c) for w, c in rest.terms if len(w) == d), key=lambda t: t[0])
        if not is_lyndon(w):
            raise DomainError(f"not a Lie element: leading word {w} is not Lyndon")
        coords[w] = coords.get(w, 0) + c
        rest = rest - lyndon_bracket(w, a.m).scale(c)
        if len(coords) > 10 ** 6:  # pragma: no cover - defensive
            raise DomainError("decomposition did not terminate")
    return coords


@dataclass(frozen=True)
class LieElement:
    """A primitive element, stored both as a series and in Lyndon coordinates."""

    series: TensorSeries

    def __post_init__(self) -> None:
        if not _is_zero(self.series.constant_term()):
            raise DomainError("Lie elements have no constant term")

    @property
    def coordinates(self) -> dict[Word, Any]:
        return lyndon_coordinates(self.series)

    def bracket(self, other: LieElement) -> LieElement:
        return LieElement(bracket(self.series, other.series))

    def degree(self) -> int:
        return max((len(w) for w, _ in self.series.terms), default=0)

    def __str__(self) -> str:
        parts = []
        for w, c in sorted(self.coordinates.items(), key=lambda t: (len(t[0]), t[0])):
            parts.append(f"({c})*{format_bracket(w)}")
        return " + ".join(parts) if parts else "0"


def format_bracket(w: Word) -> str:
    if len(w) == 1:
        return LETTER_NAMES[w[0]]
    u, v = standard_factorization(w)
    return f"[{format_bracket(u)},{format_bracket(v)}]"


def ad_power(x: int, k: int, y: TensorSeries) -> TensorSeries:
    out = y
    gen = TensorSeries.letter(x, y.m)
    for _ in range(k):
        out = bracket(gen, out)
    return out


def _echelon(vectors: list[dict[Word, Fraction]]) -> list[dict[Word, Fraction]]:
    """Row-reduce sparse rational vectors; returns an independent spanning subset (reduced copies)."""
    basis: list[tuple[Word, dict[Word, Fraction]]] = []
    for vec in vectors:
        v = {k: c for k, c in vec.items() if c != 0}
        for piv, b in basis:
            c = v.get(piv, 0)
            if c:
                for k, bc in b.items():
                    nv = v.get(k, 0) - c * bc
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        if v:
            piv = min(v)
            pc = v[piv]
            v = {k: c / pc for k, c in v.items()}
            # keep the basis fully reduced on the new pivot
            for i, (p2, b2) in enumerate(basis):
                c = b2.get(piv, 0)
                if c:
                    nb = dict(b2)
                    for k, vc in v.items():
                        nv = nb.get(k, 0) - c * vc
                        if nv:
                            nb[k] = nv
                        else:
                            nb.pop(k, None)
                    basis[i] = (p2, nb)
            basis.append((piv, v))
    return [b for _, b in basis]


def rank(vectors: Iterable[dict[Word, Fraction]]) -> int:
    return len(_echelon(list(vectors)))


@lru_cache(maxsize=None)
def _relation_ideal(d: int) -> tuple[tuple[TensorSeries, ...], ...]:
    """Per-degree spanning sets (index = degree) of the ideal generated by [X1, [L, L]]."""
    levels: list[tuple[TensorSeries, ...]] = [(), (), ()]
    x1 = TensorSeries.letter(1, d)
    x0 = TensorSeries.letter(0, d)
    for deg in range(3, d + 1):
        cands: list[TensorSeries] = []
        for w in lyndon_words(deg - 1):
            if len(w) == deg - 1 and len(w) >= 2:
                cands.append(bracket(x1, lyndon_bracket(w, d)))
        for b in levels[deg - 1]:
            cands.append(bracket(x0, b))
            cands.append(bracket(x1, b))
        reduced = _echelon([lyndon_coordinates(c) for c in cands])
        levels.append(tuple(_from_coordinates(v, d) for v in reduced))
    return tuple(levels)


def _from_coordinates(coords: Mapping[Word, Any], m: int) -> TensorSeries:
    out = TensorSeries.zero(m)
    for w, c in coords.items():
        out = out + lyndon_bracket(w, m).scale(c)
    return out


def quotient_relation_basis(d: int) -> list[LieElement]:
    """A basis, in degrees 3..d, of the ideal of the free Lie algebra generated by ad(X1)[L, L]."""
    if d < 3:
        raise ArgumentError(f"degree must be >= 3, got {d}")
    levels = _relation_ideal(d)
    return [LieElement(s.truncate(d)) for level in levels for s in level]


def relation_rank(d: int, D: int | None = None) -> int:
    """Dimension of the degree-d part of the relation ideal (computed with truncation D >= d)."""
    if d < 3:
        return 0
    return len(_relation_ideal(max(d, D or d))[d])


def quotient_dimension(d: int) -> int:
    if d == 1:
        return 2
    return witt_dimension(d) - relation_rank(d)


def quotient_generator_independent(d: int) -> bool:
    """ad(X0)^(d-1) X1 is nonzero modulo the relation ideal in degree d."""
    gen = ad_power(0, d - 1, TensorSeries.letter(1, d))
    base = [lyndon_coordinates(s) for s in (_relation_ideal(d)[d] if d >= 3 else ())]
    return rank(base + [lyndon_coordinates(gen)]) == len(base) + 1


# ---------------------------------------------------------------------------
# the polylogarithm representation


def polylog_rep(n: int) -> tuple[ExactMatrix, ExactMatrix]:
    """X0 -> sum_{1<=j<n} E_{j,j+1},  X1 -> -E_{0,1}."""
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    size = n + 1
    x0 = ExactMatrix.from_entries(size, {(j, j + 1): 1 for j in range(1, n)})
    x1 = ExactMatrix.from_entries(size, {(0, 1): -1})
    return x0, x1


def represent(a: TensorSeries, n: int) -> ExactMatrix:
    """Image of a rational series under the algebra homomorphism extending polylog_rep."""
    gens = polylog_rep(n)
    out = ExactMatrix.zero(n + 1)
    cache: dict[Word, ExactMatrix] = {(): ExactMatrix.identity(n + 1)}
    for w, c in a.terms:
        if len(w) > n:
            # any product of more than n strictly upper-triangular matrices vanishes
            continue
        mat = cache.get(w)
        if mat is None:
            mat = cache[w[:-1]] if w[:-1] in cache else _word_matrix(w[:-1], gens, cache)
            mat = mat @ gens[w[-1]]
            cache[w] = mat
        out = out + mat.scale(Fraction(c))
    return out


def _word_matrix(w: Word, gens, cache) -> ExactMatrix:
    if w in cache:
        return cache[w]
    mat = _word_matrix(w[:-1], gens, cache) @ gens[w[-1]]
    cache[w] = mat
    return mat


def represent_numeric(a: TensorSeries, n: int, prec: PrecisionConfig | None = None) -> mpmath.matrix:
    """Image of a complex series under the representation."""
    prec = resolve(prec)
    gens = [g.to_numeric(prec) for g in polylog_rep(n)]
    with prec.workprec():
        out = mpmath.zeros(n + 1, n + 1)
        mats: dict[Word, Any] = {(): mpmath.eye(n + 1)}
        for w, c in sorted(a.terms, key=lambda t: len(t[0])):
            if len(w) > n:
                continue
            if w not in mats:
                mats[w] = mats[w[:-1]] * gens[w[-1]] if w[:-1] in mats else _num_word(w, gens, mats)
            out += mats[w] * c
        return out


def _num_word(w: Word, gens, mats):
    if w in mats:
        return mats[w]
    mats[w] = _num_word(w[:-1], gens, mats) * gens[w[-1]]
    return mats[w]


def monodromy_from_series(word: Any, n: int, prec: PrecisionConfig | None = None) -> mpmath.matrix:
    """Lambda(1/2) rho(Theta) Lambda(1/2)^-1 computed as exp(rho(log Theta)), Theta the loop's transport series."""
    from .itint import transport_series
    from .paths import word_to_path
    from .polylog import base_state

    prec = resolve(prec)
    theta = transport_series(word_to_path(word), n, prec)
    with prec.workprec():
        lie = series_log(theta)
        rep = represent_numeric(lie, n, prec)
        expo = mpmath.eye(n + 1)
        term = mpmath.eye(n + 1)
        for k in range(1, n + 1):
            term = term * rep / k
            expo += term
        lam = mpmath.matrix([list(r) for r in base_state(n, prec).rows])
        return lam * expo * mpmath.inverse(lam)


def monodromy_series_residual(word: Any, n: int, prec: PrecisionConfig | None = None) -> Any:
    prec = resolve(prec)
    with prec.workprec():
        return max_abs_diff(monodromy_from_series(word, n, prec), monodromy_exact(word, n).to_numeric(prec))
