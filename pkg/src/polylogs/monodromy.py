"""Exact monodromy of the polylogarithm local system, residues, filtrations,
limit period matrices and extension matrices.

Convention: an :class:`ExactMatrix` with entries ``A`` and ``twist`` p
stands for the complex matrix (2 pi i)^p * A.  Monodromy matrices are
rational in the frame of Lambda itself, so they carry twist 0; the local
monodromy logarithms N_P = log(T_P) / (2 pi i) carry twist -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Iterable, Sequence

import mpmath
from mpmath import mp

from .errors import ArgumentError, DomainError, PrecisionTooLowError
from .numerics import PrecisionConfig, max_abs_diff, resolve, to_complex, transport_rows
from .paths import HALF, MonodromyWord, Path, PathSegment, exact_point, inverse_letter, word_to_path
from .polylog import base_state, connection_form, lambda_closed_form_rows

Rows = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of Fractions, read numerically as (2 pi i)^twist * entries."""

    entries: Rows
    twist: int = 0

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(v) for v in r) for r in self.entries)
        if any(len(r) != len(rows) for r in rows):
            raise ArgumentError("ExactMatrix must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, size: int) -> ExactMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)))

    @classmethod
    def zero(cls, size: int, twist: int = 0) -> ExactMatrix:
        return cls(tuple(tuple(Fraction(0) for _ in range(size)) for _ in range(size)), twist)

    @classmethod
    def from_entries(cls, size: int, entries: dict[tuple[int, int], Any], twist: int = 0) -> ExactMatrix:
        rows = [[Fraction(0)] * size for _ in range(size)]
        for (i, j), v in entries.items():
            rows[i][j] = Fraction(v)
        return cls(tuple(tuple(r) for r in rows), twist)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return self.size - 1

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.entries[i][j]

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.size != other.size:
            raise ArgumentError("size mismatch")
        cols = list(zip(*other.entries))
        prod = tuple(tuple(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols)
                     for row in self.entries)
        return ExactMatrix(prod, self.twist + other.twist)

    def _same_twist(self, other: ExactMatrix) -> None:
        if self.size != other.size:
            raise ArgumentError("size mismatch")
        if self.twist != other.twist and not (self.is_zero() or other.is_zero()):
            raise ArgumentError("cannot add matrices with different twists")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._same_twist(other)
        twist = self.twist if not self.is_zero() else other.twist
        return ExactMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)), twist)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(tuple(tuple(-a for a in r) for r in self.entries), self.twist)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self + (-other)

    def scale(self, c: Any) -> ExactMatrix:
        c = Fraction(c)
        return ExactMatrix(tuple(tuple(c * a for a in r) for r in self.entries), self.twist)

    def __pow__(self, k: int) -> ExactMatrix:
        if k < 0:
            return self.inverse() ** (-k)
        out = ExactMatrix.identity(self.size)
        out = ExactMatrix(out.entries, 0)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def is_nilpotent(self) -> bool:
        return (ExactMatrix(self.entries) ** self.size).is_zero()

    def is_unipotent(self) -> bool:
        return (ExactMatrix(self.entries) - ExactMatrix.identity(self.size)).is_nilpotent()

    def is_rational(self) -> bool:
        return all(isinstance(a, Fraction) for r in self.entries for a in r)

    def inverse(self) -> ExactMatrix:
        """Gauss-Jordan inverse; the twist is negated."""
        size = self.size
        aug = [list(r) + [Fraction(int(i == j)) for j in range(size)] for i, r in enumerate(self.entries)]
        for col in range(size):
            piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
            if piv is None:
                raise DomainError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [v / pv for v in aug[col]]
            for r in range(size):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return ExactMatrix(tuple(tuple(r[size:]) for r in aug), -self.twist)

    def to_numeric(self, prec: PrecisionConfig | None = None) -> mpmath.matrix:
        """The complex matrix (2 pi i)^twist * entries."""
        prec = resolve(prec)
        with prec.workprec():
            scale = mpmath.mpc(0, 2 * mpmath.pi) ** self.twist
            return mpmath.matrix([[scale * (mpmath.mpf(a.numerator) / a.denominator) for a in r] for r in self.entries])

    def __str__(self) -> str:
        return format_exact(self)


def format_exact(m: ExactMatrix) -> str:
    cells = [[str(a) for a in r] for r in m.entries]
    width = max((len(c) for r in cells for c in r), default=1)
    body = "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)
    if m.twist:
        return f"(2*pi*i)^{m.twist} *\n{body}"
    return body


def from_numeric(matrix: Any, twist: int = 0, tol: float = 1e-20, max_denominator: int = 10 ** 6) -> ExactMatrix:
    """Recover an ExactMatrix from (2 pi i)^twist * A by rationalizing A.

    Inverse of :meth:`ExactMatrix.to_numeric` on matrices with small
    denominators; raises DomainError when an entry is not close to a
    rational with denominator <= ``max_denominator``.
    """
    rows = matrix.tolist() if isinstance(matrix, mpmath.matrix) else [list(r) for r in matrix]
    scale = mpmath.mpc(0, 2 * mpmath.pi) ** (-twist)
    out = []
    for r in rows:
        new = []
        for v in r:
            w = to_complex(v) * scale
            if abs(w.imag) > tol:
                raise DomainError(f"entry {w} is not real after removing the twist")
            q = Fraction(mpmath.nstr(w.real, mp.dps, min_fixed=-mp.dps, max_fixed=mp.dps)).limit_denominator(max_denominator)
            if abs(w.real - mpmath.mpf(q.numerator) / q.denominator) > tol:
                raise DomainError(f"entry {w.real} is not a small-denominator rational")
            new.append(q)
        out.append(tuple(new))
    return ExactMatrix(tuple(out), twist)


# ---------------------------------------------------------------------------
# generators and words


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ArgumentError(f"order n must be an integer >= 1, got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def generator_matrix(letter: str, n: int) -> ExactMatrix:
    """M(sigma_0) = blockdiag(1, J) with J_ij = 1/(j-i)!; M(sigma_1) = I - E_01; inverses exactly."""
    n = _check_n(n)
    if letter not in ("s0", "s1", "s0^-1", "s1^-1"):
        letters = MonodromyWord.parse(letter).letters
        if len(letters) != 1:
            raise ArgumentError(f"not a single letter: {letter!r}")
        letter = letters[0]
    if letter.endswith("^-1"):
        return generator_matrix(inverse_letter(letter), n).inverse()
    size = n + 1
    if letter == "s0":
        entries = {(0, 0): 1}
        for i in range(1, size):
            for j in range(i, size):
                entries[(i, j)] = Fraction(1, factorial(j - i))
        return ExactMatrix.from_entries(size, entries)
    entries = {(i, i): 1 for i in range(size)}
    entries[(0, 1)] = -1
    return ExactMatrix.from_entries(size, entries)


def _as_word(word: MonodromyWord | str | Sequence[str]) -> MonodromyWord:
    if isinstance(word, MonodromyWord):
        return word
    if isinstance(word, str):
        return MonodromyWord.parse(word)
    return MonodromyWord(tuple(word))


def monodromy_exact(word: MonodromyWord | str | Sequence[str], n: int) -> ExactMatrix:
    """M(w) = M(a_1) M(a_2) ... for w = a_1 a_2 ... (first letter traversed first)."""
    word = _as_word(word)
    out = ExactMatrix.identity(_check_n(n) + 1)
    for letter in word.letters:
        out = out @ generator_matrix(letter, n)
    return out


def _mat_rows(m: mpmath.matrix) -> list[list[mpmath.mpc]]:
    return [[m[i, j] for j in range(m.cols)] for i in range(m.rows)]


def monodromy_numeric(word: MonodromyWord | str | Sequence[str], n: int,
                      prec: PrecisionConfig | None = None) -> mpmath.matrix:
    """Lambda_end Lambda(1/2)^-1, with Lambda_end the continuation of Lambda(1/2) along the word's loop."""
    prec = resolve(prec)
    word = _as_word(word)
    n = _check_n(n)
    with prec.workprec():
        lam = base_state(n, prec).rows
        end = transport_rows(connection_form(n), word_to_path(word), lam, prec)
        return mpmath.matrix(end) * mpmath.inverse(mpmath.matrix([list(r) for r in lam]))


def monodromy_residual(word: MonodromyWord | str | Sequence[str], n: int,
                       prec: PrecisionConfig | None = None) -> mpmath.mpf:
    prec = resolve(prec)
    with prec.workprec():
        return max_abs_diff(monodromy_numeric(word, n, prec), monodromy_exact(word, n).to_numeric(prec))


# ---------------------------------------------------------------------------
# residues and local logarithms


def connection_residues(n: int) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """Residues of omega at 0, 1 and infinity (the last in the chart w = 1/z)."""
    size = _check_n(n) + 1
    r0 = ExactMatrix.from_entries(size, {(j, j + 1): 1 for j in range(1, n)})
    r1 = ExactMatrix.from_entries(size, {(0, 1): -1})
    # dz/(z - a) = -dw/w + ..., so each pole term contributes -1 times its coefficient at w = 0
    rinf = -(r0 + r1)
    return r0, r1, rinf


def exact_exp(m: ExactMatrix) -> ExactMatrix:
    """exp of a nilpotent matrix (finite sum); twist must be 0."""
    if m.twist:
        raise ArgumentError("exp needs an untwisted matrix")
    if not m.is_nilpotent():
        raise DomainError("exact exp is only available for nilpotent matrices")
    out = ExactMatrix.identity(m.size)
    term = ExactMatrix.identity(m.size)
    for k in range(1, m.size):
        term = (term @ m).scale(Fraction(1, k))
        out = out + term
    return out


def exact_log(m: ExactMatrix) -> ExactMatrix:
    """log of a unipotent matrix (finite series)."""
    if m.twist:
        raise ArgumentError("log needs an untwisted matrix")
    if not m.is_unipotent():
        raise DomainError("exact log is only available for unipotent matrices")
    x = m - ExactMatrix.identity(m.size)
    out = ExactMatrix.zero(m.size)
    power = ExactMatrix.identity(m.size)
    for k in range(1, m.size):
        power = power @ x
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def local_log(letter: str, n: int) -> ExactMatrix:
    """N_P = log(T_P) / (2 pi i): entries of log T_P with twist -1."""
    return ExactMatrix(exact_log(generator_matrix(letter, n)).entries, -1)


@dataclass(frozen=True)
class FiltrationSpec:
    """Weight and Hodge filtrations of the polylogarithm variation of order n.

    W_{-2l} = W_{-2l+1} = span{e_l, ..., e_n}; F^{-p} = span{e_0, ..., e_p}.
    """

    n: int

    def weight(self, m: int) -> frozenset[int]:
        if m >= 0:
            return frozenset(range(self.n + 1))
        level = (-m + 1) // 2  # m = -2l or -2l + 1
        return frozenset(range(level, self.n + 1))

    def hodge(self, p: int) -> frozenset[int]:
        """F^p: span{e_0..e_{-p}}; everything for p <= -n, nothing for p > 0."""
        if p > 0:
            return frozenset()
        return frozenset(range(0, min(-p, self.n) + 1))

    def weight_range(self) -> range:
        return range(-2 * self.n - 2, 2)

    def check(self) -> bool:
        """Nested and exhaustive."""
        ws = [self.weight(m) for m in self.weight_range()]
        hs = [self.hodge(p) for p in range(-self.n - 1, 2)]
        nested = all(a <= b for a, b in zip(ws, ws[1:])) and all(a >= b for a, b in zip(hs, hs[1:]))
        full = frozenset(range(self.n + 1))
        return nested and ws[-1] == full and not ws[0] and hs[0] == full and not hs[-1]


def check_relative_weight(L: ExactMatrix, W: FiltrationSpec) -> bool:
    """True iff L(W_m) is contained in W_{m-2} for every m.

    Basis vectors act through rows: e_j is sent to sum_k L[j][k] e_k.
    The scalar 2 pi i twist does not affect containment.
    """
    if L.size != W.n + 1:
        raise ArgumentError("filtration and matrix sizes differ")
    for m in W.weight_range():
        target = W.weight(m - 2)
        for j in W.weight(m):
            if any(L.entries[j][k] != 0 and k not in target for k in range(L.size)):
                return False
    return True


# ---------------------------------------------------------------------------
# limit period matrices


@dataclass(frozen=True)
class LimitMHSResult:
    basepoint: int
    tangent_sign: int
    n: int
    matrix: Any  # mpmath.matrix, rows s_0..s_n in the frame e_0..e_n
    t0: Fraction
    residual: Any

    def rows(self) -> list[list[mpmath.mpc]]:
        return _mat_rows(self.matrix)


def _limit_t0(prec: PrecisionConfig) -> Fraction:
    return Fraction(1, 10 ** -(-prec.internal_bits // 8))


def _regularized_frame(P: int, n: int, t: Fraction, prec: PrecisionConfig) -> mpmath.matrix:
    """exp(-log t N_P) Lambda(z) with z = t (P = 0) or z = 1 - t (P = 1), reached along the real segment."""
    z = t if P == 0 else 1 - t
    lam = base_state(n, prec).rows
    path = Path((PathSegment.line(HALF, z),), HALF)
    # row j >= 1 of Lambda on (0, 1) is given in closed form by the real logarithm;
    # only row 0 needs transport, which keeps the regularized end cheap
    row0 = transport_rows(connection_form(n), path, [lam[0]], prec, regularized_end=True)[0]
    zv = mpmath.mpf(z.numerator) / z.denominator
    rows = [row0] + lambda_closed_form_rows(zv, n, mpmath.log(zv))
    lam_z = mpmath.matrix(rows)
    log_t = mpmath.log(mpmath.mpf(t.numerator) / t.denominator)
    nmat = local_log("s0" if P == 0 else "s1", n).to_numeric(prec)
    return _nilpotent_exp(-log_t * nmat) * lam_z


def _nilpotent_exp(a: mpmath.matrix) -> mpmath.matrix:
    out = mpmath.eye(a.rows)
    term = mpmath.eye(a.rows)
    for k in range(1, a.rows):
        term = term * a / k
        out += term
    return out


def limit_mhs(P: int, n: int, prec: PrecisionConfig | None = None) -> LimitMHSResult:
    """Rational structure of the limit at P in {0, 1}: rows s_j = lim t^(-N) e_j(t).

    Tangent vectors are d/dz at 0 (t = z) and -d/dz at 1 (t = 1 - z).  The
    frame is evaluated once at t0 = 10^(-ceil(bits/8)); its change between
    t0 and 2 t0 serves as the residual estimate.
    """
    prec = resolve(prec)
    n = _check_n(n)
    if P not in (0, 1):
        raise ArgumentError(f"limit point must be 0 or 1, got {P!r}")
    with prec.workprec():
        t0 = _limit_t0(prec)
        near = _regularized_frame(P, n, t0, prec)
        far = _regularized_frame(P, n, 2 * t0, prec)
        residual = max_abs_diff(near, far)
        if residual > prec.target_tol:
            raise PrecisionTooLowError(
                f"limit residual {mpmath.nstr(residual, 5)} exceeds tolerance {prec.target_tol}; "
                "increase working bits")
        return LimitMHSResult(P, 1 if P == 0 else -1, n, near, t0, residual)


def limit_expected(P: int, n: int, zetas: Sequence[Any]) -> mpmath.matrix:
    """The predicted limit matrix, given zeta(2..n) from any source."""
    tpi = mpmath.mpc(0, 2 * mpmath.pi)
    m = mpmath.matrix(n + 1, n + 1)
    for j in range(n + 1):
        m[j, j] = tpi ** j
    if P == 1:
        for k in range(2, n + 1):
            m[0, k] = zetas[k - 2]
    return m


def ext_class_matrix(lam: Any, m: int, prec: PrecisionConfig | None = None) -> mpmath.matrix:
    """Period matrix [[1, lambda], [0, (2 pi i)^m]] of the extension of Q(0) by Q(m)."""
    if int(m) != m or m < 1:
        raise ArgumentError(f"m must be an integer >= 1, got {m!r}")
    prec = resolve(prec)
    with prec.workprec():
        return mpmath.matrix([[1, to_complex(lam)], [0, mpmath.mpc(0, 2 * mpmath.pi) ** int(m)]])
