"""Arbitrary-precision numerics: precision contract, power-series kernels,
path-ordered transport of logarithmic connections, and reference constants.

Public values are mpmath numbers.  The transport kernel runs on gmpy2
(MPC) internally because it is several times faster per operation; the
conversion happens once per segment.

The reference constants (``zeta_reference``, ``pi_reference``,
``catalan_reference``) never call any polylogarithm code: they are built
from Euler--Maclaurin summation of Hurwitz zeta values and Machin's arctan
formula, so they can serve as independent oracles.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

import gmpy2
import mpmath
from mpmath import mp

from .errors import (
    ArgumentError,
    DomainError,
    NonConvergenceError,
    ParseError,
    SingularityError,
    SingularityProximityWarning,
)

GUARD_BITS = 24
SERIES_RADIUS = Fraction(3, 4)
# step length as a fraction of the distance to the nearest pole
STEP_RATIO = 0.4
MAX_TERMS = 1500
MAX_STEPS = 200000


@dataclass(frozen=True)
class PrecisionConfig:
    """Binary working precision plus the absolute output tolerance.

    ``internal_bits`` is what computations actually run at: at least
    ``working_bits`` and at least twice the decimal digits of
    ``target_tol``, plus a fixed guard.
    """

    working_bits: int = 256
    target_tol: float = 1e-30

    def __post_init__(self) -> None:
        if int(self.working_bits) != self.working_bits or self.working_bits < 64:
            raise ArgumentError(f"working_bits must be an integer >= 64, got {self.working_bits!r}")
        if not self.target_tol > 0:
            raise ArgumentError(f"target_tol must be positive, got {self.target_tol!r}")

    @property
    def tol_digits(self) -> int:
        return max(1, math.ceil(-math.log10(self.target_tol)))

    @property
    def internal_bits(self) -> int:
        needed = math.ceil(2 * self.tol_digits * math.log2(10))
        return max(self.working_bits, needed) + GUARD_BITS

    @property
    def step_tol(self) -> float:
        # per-step truncation target; leaves room for ~1e6 steps and propagator growth
        return self.target_tol * 1e-12

    def workprec(self):
        return mp.workprec(self.internal_bits)

    def doubled(self) -> PrecisionConfig:
        return PrecisionConfig(2 * self.working_bits, self.target_tol)


DEFAULT_PRECISION = PrecisionConfig()


def resolve(prec: PrecisionConfig | None) -> PrecisionConfig:
    return DEFAULT_PRECISION if prec is None else prec


# ---------------------------------------------------------------------------
# complex values

_COMPLEX_RE = re.compile(
    r"""^\s*
    (?:(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?![\d.]*[ij]))?
    \s*
    (?:(?P<im>[+-]?\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)\s*[ij])?
    \s*$""",
    re.VERBOSE,
)

_RATIONAL_COMPLEX_RE = re.compile(r"^(?P<re>[+-]?\d+(?:/\d+)?(?=[+-]))?(?P<im>[+-]?(?:\d+(?:/\d+)?)?)[ij]$")
_PURE_IMAG_RE = re.compile(r"^[+-]?\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?[ij]$")


def _decimal_fraction(text: str) -> Fraction:
    text = text.replace(" ", "")
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return Fraction(text)


def parse_complex(text: str) -> tuple[Fraction, Fraction]:
    """Parse ``a+bi`` style literals into an exact pair of rationals.

    Accepts ``0.5``, ``-2i``, ``i``, ``1.5-0.25i``, ``3e-2+1e-1j`` and
    rational components such as ``1/3`` or ``1/2-2/3i``.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty complex literal")
    if "/" in s:
        m = _RATIONAL_COMPLEX_RE.match(s)
        try:
            if not s.endswith(("i", "j")):
                return Fraction(s), Fraction(0)
            if m is None:
                raise ParseError(f"bad rational complex literal {text!r}")
            re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
            return re_part, _decimal_fraction(m.group("im"))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {text!r}") from exc
    try:
        if _PURE_IMAG_RE.match(s):
            return Fraction(0), _decimal_fraction(s[:-1])
        m = _COMPLEX_RE.match(s)
        if not m or (m.group("re") is None and m.group("im") is None):
            raise ParseError(f"bad complex literal {text!r}")
        re_part = Fraction(m.group("re")) if m.group("re") is not None else Fraction(0)
        im_part = _decimal_fraction(m.group("im")) if m.group("im") is not None else Fraction(0)
    except ValueError as exc:
        raise ParseError(f"bad complex literal {text!r}") from exc
    return re_part, im_part


def to_complex(value: Any) -> mpmath.mpc:
    """Convert numbers, exact pairs and literals to an mpc at the current precision."""
    if isinstance(value, mpmath.mpc):
        return +value
    if isinstance(value, tuple) and len(value) == 2:
        return mpmath.mpc(_to_real(value[0]), _to_real(value[1]))
    if isinstance(value, str):
        re_part, im_part = parse_complex(value)
        return mpmath.mpc(_to_real(re_part), _to_real(im_part))
    if isinstance(value, gmpy2.mpc().__class__):
        return _from_g(value)
    if isinstance(value, complex):
        return mpmath.mpc(value.real, value.imag)
    return mpmath.mpc(_to_real(value), 0)


def _to_real(value: Any) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, gmpy2.mpfr().__class__):
        return _mpfr_to_mpf(value)
    return mpmath.mpf(value)


def format_complex(z: Any, digits: int = 30) -> str:
    z = to_complex(z)
    re_s = mpmath.nstr(z.real, digits, min_fixed=-5, max_fixed=8)
    if z.imag == 0:
        return re_s
    im = z.imag
    sign = "-" if im < 0 else "+"
    return f"{re_s}{sign}{mpmath.nstr(abs(im), digits, min_fixed=-5, max_fixed=8)}i"


# ---------------------------------------------------------------------------
# mpmath <-> gmpy2

_MPFR = type(gmpy2.mpfr(0))
_MPC = type(gmpy2.mpc(0))


def _mpf_to_mpfr(x: mpmath.mpf):
    sign, man, exp, _bc = x._mpf_
    if not man:
        if exp:
            raise DomainError("non-finite value in transport kernel")
        return gmpy2.mpfr(0)
    v = gmpy2.mul_2exp(gmpy2.mpfr(int(man)), int(exp))
    return -v if sign else v


def _mpfr_to_mpf(v) -> mpmath.mpf:
    if v == 0:
        return mpmath.mpf(0)
    if not gmpy2.is_finite(v):
        raise NonConvergenceError("non-finite value produced by transport kernel")
    man, exp = v.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


def _to_g(z: Any):
    z = to_complex(z)
    return gmpy2.mpc(_mpf_to_mpfr(z.real), _mpf_to_mpfr(z.imag))


def _from_g(z) -> mpmath.mpc:
    return mpmath.mpc(_mpfr_to_mpf(z.real), _mpfr_to_mpf(z.imag))


def _gabs(z):
    # sup norm on (re, im) is cheaper than the modulus and fine for term decay
    a = abs(z.real)
    b = abs(z.imag)
    return a if a > b else b


# ---------------------------------------------------------------------------
# series


def series_polylog(k: int, x: Any, prec: PrecisionConfig | None = None) -> mpmath.mpc:
    """Partial sum of sum_{n>=1} x^n / n^k with a certified geometric tail.

    Restricted to |x| <= 3/4 so the tail bound |x|^(N+1)/((N+1)^k (1-|x|))
    is cheap; everything else is reached by transport.
    """
    prec = resolve(prec)
    if int(k) != k or k < 1:
        raise ArgumentError(f"polylog order must be an integer >= 1, got {k!r}")
    k = int(k)
    with prec.workprec():
        x = to_complex(x)
        ax = abs(x)
        if ax > mpmath.mpf(SERIES_RADIUS.numerator) / SERIES_RADIUS.denominator:
            raise DomainError(f"series_polylog needs |x| <= 3/4, got |x| = {mpmath.nstr(ax, 8)}")
        if x == 0:
            return mpmath.mpc(0)
        target = mpmath.mpf(prec.step_tol)
        with gmpy2.context(precision=prec.internal_bits):
            gx = _to_g(x)
            gax = _mpf_to_mpfr(ax)
            gtarget = _mpf_to_mpfr(target)
            tail_den = 1 - gax
            total = gmpy2.mpc(0)
            power = gmpy2.mpc(1)
            apow = gmpy2.mpfr(1)
            n = 0
            while True:
                n += 1
                power *= gx
                apow *= gax
                total += power / gmpy2.mpz(n) ** k
                if apow * gax / (gmpy2.mpz(n + 1) ** k * tail_den) < gtarget:
                    break
            result = _from_g(total)
        return result


def polylog_row_series(n: int, x: Any, prec: PrecisionConfig | None = None) -> list[mpmath.mpc]:
    """(1, Li_1(x), ..., Li_n(x)) by the power series, |x| <= 3/4.  One pass for all orders."""
    prec = resolve(prec)
    with prec.workprec():
        x = to_complex(x)
        ax = abs(x)
        if ax > mpmath.mpf(3) / 4:
            raise DomainError(f"series needs |x| <= 3/4, got |x| = {mpmath.nstr(ax, 8)}")
        if x == 0:
            return [mpmath.mpc(1)] + [mpmath.mpc(0)] * n
        target = mpmath.mpf(prec.step_tol)
        with gmpy2.context(precision=prec.internal_bits):
            gx = _to_g(x)
            gax = _mpf_to_mpfr(ax)
            gtarget = _mpf_to_mpfr(target)
            tail_den = 1 - gax
            sums = [gmpy2.mpc(0)] * (n + 1)
            power = gmpy2.mpc(1)
            apow = gmpy2.mpfr(1)
            m = 0
            while True:
                m += 1
                power *= gx
                apow *= gax
                term = power
                for k in range(1, n + 1):
                    term = term / m
                    sums[k] += term
                # k = 1 has the slowest tail
                if apow * gax / ((m + 1) * tail_den) < gtarget:
                    break
            row = [mpmath.mpc(1)] + [_from_g(s) for s in sums[1:]]
        return row


# ---------------------------------------------------------------------------
# logarithmic connections and transport


@dataclass(frozen=True)
class LogConnection:
    """Matrix-valued logarithmic 1-form  A(z) dz = sum_p E_p dz / (z - p).

    ``residues`` is a tuple of ``(pole, entries)`` where ``entries`` is a
    tuple of ``(i, j, coefficient)`` for the nonzero slots of the constant
    residue matrix ``E_p``.  Poles and coefficients may be ints, Fractions,
    mpmath numbers or exact pairs; they are converted at the working
    precision of each computation.  Horizontal sections solve
    M' = M A(z) (row vectors, matrix acting on the right).
    """

    size: int
    residues: tuple[tuple[Any, tuple[tuple[int, int, Any], ...]], ...]

    @classmethod
    def from_dict(cls, size: int, data: dict[Any, dict[tuple[int, int], Any]]) -> LogConnection:
        residues = []
        for pole, entries in data.items():
            ents = tuple((int(i), int(j), c) for (i, j), c in sorted(entries.items()) if c != 0)
            for i, j, _ in ents:
                if not (0 <= i < size and 0 <= j < size):
                    raise ArgumentError(f"residue slot {(i, j)} outside a {size}x{size} matrix")
            if ents:
                residues.append((pole, ents))
        return cls(size, tuple(residues))

    @classmethod
    def zero(cls, size: int) -> LogConnection:
        return cls(size, ())

    def poles(self) -> list[mpmath.mpc]:
        return [to_complex(p) for p, _ in self.residues]

    def residue_matrix(self, pole: Any) -> mpmath.matrix:
        target = to_complex(pole)
        out = mpmath.zeros(self.size, self.size)
        for p, ents in self.residues:
            if to_complex(p) == target:
                for i, j, c in ents:
                    out[i, j] += to_complex(c)
        return out

    def __call__(self, z: Any) -> mpmath.matrix:
        """Coefficient matrix A(z) of dz."""
        z = to_complex(z)
        out = mpmath.zeros(self.size, self.size)
        for p, ents in self.residues:
            inv = 1 / (z - to_complex(p))
            for i, j, c in ents:
                out[i, j] += to_complex(c) * inv
        return out


def _default_clearance(poles: Sequence[mpmath.mpc], start: mpmath.mpc, end: mpmath.mpc) -> mpmath.mpf:
    pts = list(poles) + [start, end]
    best = None
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            d = abs(pts[a] - pts[b])
            if d > 0 and (best is None or d < best):
                best = d
    if best is None:
        return mpmath.mpf(0)
    return best / 1000


def check_clearance(form: LogConnection, path, clearance: Any = None, *, regularized_end: bool = False,
                    warn_only: bool = False) -> mpmath.mpf:
    """Verify that ``path`` stays at least ``clearance`` away from every pole.

    Returns the clearance used.  Raises :class:`SingularityError` (or warns,
    with ``warn_only``) on violation; a path through a pole always raises.
    """
    poles = form.poles()
    segs = list(path.segments)
    if not segs:
        return mpmath.mpf(0)
    start, end = segs[0].start_point(), segs[-1].end_point()
    delta = _default_clearance(poles, start, end) if clearance is None else mpmath.mpf(clearance)
    for idx, seg in enumerate(segs):
        last = idx == len(segs) - 1
        for p in poles:
            d = seg.distance_to(p)
            if d == 0:
                raise SingularityError(f"segment {idx} passes through the pole {format_complex(p, 12)}")
            if d < delta and not (last and regularized_end):
                msg = (f"segment {idx} comes within {mpmath.nstr(d, 6)} of the pole "
                       f"{format_complex(p, 12)} (clearance {mpmath.nstr(delta, 6)})")
                if warn_only:
                    warnings.warn(msg, SingularityProximityWarning, stacklevel=2)
                else:
                    raise SingularityError(msg)
    return delta


def _g_geometry(seg):
    geo = seg.geometry()
    if geo[0] == "line":
        _, a, b = geo
        return ("line", _to_g(a), _to_g(b))
    _, c, r, t0, t1 = geo
    return ("arc", _to_g(c), _mpf_to_mpfr(r), _mpf_to_mpfr(t0), _mpf_to_mpfr(t1))


def _g_point(geo, u):
    if geo[0] == "line":
        _, a, b = geo
        if u == 1:
            return b
        return a + (b - a) * u
    _, c, r, t0, t1 = geo
    theta = t0 + (t1 - t0) * u
    return c + r * gmpy2.exp(gmpy2.mpc(0, theta))


def _g_length(geo):
    if geo[0] == "line":
        return abs(geo[2] - geo[1])
    return geo[2] * abs(geo[4] - geo[3])


def _prepare_form(form: LogConnection):
    prepared = []
    for pole, ents in form.residues:
        cols = sorted({i for i, _, _ in ents})
        index = {c: k for k, c in enumerate(cols)}
        coded = []
        for i, j, c in ents:
            gc = _to_g(c)
            kind = 1 if gc == 1 else (-1 if gc == -1 else 0)
            coded.append((index[i], j, kind, gc))
        prepared.append((_to_g(pole), cols, tuple(coded)))
    return prepared


def _taylor_step(rows, prepared, z0, h, eps, size):
    """Advance the row system from z0 to z0 + h by its Taylor series in h.

    With s = (z - z0)/h, d/ds R = R sum_p E_p / (q_p + s), q_p = (z0 - p)/h.
    Writing R = sum T_k s^k and G^p = R/(q_p + s) gives
    G^p_k = (T_k - G^p_{k-1}) / q_p and (k+1) T_{k+1} = sum_p G^p_k E_p.
    Returns the new rows or None when the series has not settled within
    MAX_TERMS terms.
    """
    zero = gmpy2.mpc(0)
    nrows = len(rows)
    qinv = [h / (z0 - pole) for pole, _, _ in prepared]
    gstate = [[[zero] * len(cols) for _ in range(nrows)] for _, cols, _ in prepared]
    term = [list(r) for r in rows]
    total = [list(r) for r in rows]
    quiet = 0
    for k in range(MAX_TERMS):
        nxt = [[zero] * size for _ in range(nrows)]
        for (pole, cols, coded), qi, gp in zip(prepared, qinv, gstate):
            for r in range(nrows):
                tr = term[r]
                gr = gp[r]
                for ci, col in enumerate(cols):
                    gr[ci] = (tr[col] - gr[ci]) * qi
                nr = nxt[r]
                for ci, j, kind, coef in coded:
                    if kind == 1:
                        nr[j] += gr[ci]
                    elif kind == -1:
                        nr[j] -= gr[ci]
                    else:
                        nr[j] += gr[ci] * coef
        inv = gmpy2.mpfr(1) / (k + 1)
        biggest = gmpy2.mpfr(0)
        for r in range(nrows):
            nr = nxt[r]
            tr = total[r]
            for j in range(size):
                v = nr[j]
                if v:
                    v = v * inv
                    nr[j] = v
                    tr[j] += v
                    m = _gabs(v)
                    if m > biggest:
                        biggest = m
        term = nxt
        if biggest <= eps:
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    return None


def _propagate_segment(rows, prepared, geo, eps, size):
    pole_pts = [p for p, _, _ in prepared]
    length = _g_length(geo)
    if length == 0 or not pole_pts:
        # no poles: the form vanishes identically
        return rows
    u = gmpy2.mpfr(0)
    z = _g_point(geo, u)
    ratio = STEP_RATIO
    steps = 0
    while u < 1:
        dist = min(abs(z - p) for p in pole_pts)
        if dist == 0:
            raise SingularityError("transport reached a pole")
        du = ratio * dist / length
        u1 = u + du
        if u1 >= 1:
            u1 = gmpy2.mpfr(1)
        z1 = _g_point(geo, u1)
        new_rows = _taylor_step(rows, prepared, z, z1 - z, eps, size)
        if new_rows is None:
            ratio /= 2
            if ratio < 1e-6:
                raise NonConvergenceError("transport step size underflow")
            continue
        rows, u, z = new_rows, u1, z1
        ratio = min(STEP_RATIO, ratio * 2)
        steps += 1
        if steps > MAX_STEPS:
            raise NonConvergenceError("transport exceeded the step budget")
    return rows


@lru_cache(maxsize=512)
def _segment_propagator(form: LogConnection, seg, bits: int, eps: float):
    with mp.workprec(bits), gmpy2.context(precision=bits):
        one, zero = gmpy2.mpc(1), gmpy2.mpc(0)
        ident = [[one if i == j else zero for j in range(form.size)] for i in range(form.size)]
        out = _propagate_segment(ident, _prepare_form(form), _g_geometry(seg), _mpf_to_mpfr(mpmath.mpf(eps)), form.size)
        return tuple(tuple(r) for r in out)


def _as_rows(init: Any) -> list[list[Any]]:
    if isinstance(init, mpmath.matrix):
        return [[init[i, j] for j in range(init.cols)] for i in range(init.rows)]
    rows = [list(r) for r in init]
    if rows and not isinstance(rows[0], list):
        raise ArgumentError("init must be a matrix or a sequence of rows")
    return rows


def transport_rows(form: LogConnection, path, rows: Sequence[Sequence[Any]], prec: PrecisionConfig | None = None, *,
                   clearance: Any = None, regularized_end: bool = False, cache_arcs: bool = True) -> list[list[mpmath.mpc]]:
    """Row-vector form of :func:`ode_transport` returning lists of mpc.

    Arc segments go through a cached identity propagator (standard loops
    recur constantly); line segments propagate the given rows directly.
    """
    prec = resolve(prec)
    bits = prec.internal_bits
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != form.size:
            raise ArgumentError(f"row length {len(r)} does not match connection size {form.size}")
    with mp.workprec(bits):
        check_clearance(form, path, clearance, regularized_end=regularized_end)
        with gmpy2.context(precision=bits):
            grows = [[_to_g(v) for v in r] for r in rows]
            if not form.residues:
                return [[to_complex(v) for v in r] for r in rows]
            prepared = None
            eps = _mpf_to_mpfr(mpmath.mpf(prec.step_tol))
            for seg in path.segments:
                if cache_arcs and seg.kind == "arc":
                    prop = _segment_propagator(form, seg, bits, prec.step_tol)
                    grows = _gmatmul(grows, prop)
                else:
                    if prepared is None:
                        prepared = _prepare_form(form)
                    grows = _propagate_segment(grows, prepared, _g_geometry(seg), eps, form.size)
            return [[_from_g(v) for v in r] for r in grows]


def _gmatmul(a, b):
    n = len(b)
    m = len(b[0]) if n else 0
    zero = gmpy2.mpc(0)
    out = []
    for row in a:
        acc = [zero] * m
        for k, v in enumerate(row):
            if v:
                bk = b[k]
                for j in range(m):
                    w = bk[j]
                    if w:
                        acc[j] += v * w
        out.append(acc)
    return out


def ode_transport(form: LogConnection, path, init: Any, prec: PrecisionConfig | None = None, *,
                  clearance: Any = None, regularized_end: bool = False) -> mpmath.matrix:
    """Solve M'(t) = M(t) A(gamma(t)) gamma'(t), M(0) = init, along ``path``.

    Adaptive Taylor-series integration: each step is expanded about its
    start point to radius STEP_RATIO times the distance to the nearest pole,
    with terms summed until three consecutive terms fall below
    ``prec.step_tol``.  A step whose series does not settle is halved.
    """
    rows = transport_rows(form, path, _as_rows(init), prec, clearance=clearance, regularized_end=regularized_end)
    with resolve(prec).workprec():
        return mpmath.matrix(rows)


# ---------------------------------------------------------------------------
# reference constants


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


def _hurwitz_em(s: int, a: Fraction, bits: int) -> mpmath.mpf:
    """Hurwitz zeta(s, a) for integer s >= 2 by Euler--Maclaurin summation."""
    with mp.workprec(bits + 20):
        digits = int(bits * 0.302) + 5
        big_n = digits + 10
        av = mpmath.mpf(a.numerator) / a.denominator
        head = mpmath.fsum((n + av) ** -s for n in range(big_n))
        x = big_n + av
        total = head + x ** (1 - s) / (s - 1) + x ** -s / 2
        eps = mpmath.mpf(2) ** (-bits - 10)
        rising = mpmath.mpf(s)  # s (s+1) ... (s + 2j - 2)
        xpow = x ** (-s - 1)
        fact = mpmath.mpf(2)
        j = 1
        while True:
            b = _bernoulli(2 * j)
            term = mpmath.mpf(b.numerator) / b.denominator / fact * rising * xpow
            total += term
            if abs(term) < eps:
                break
            if j > 4 * big_n:
                raise NonConvergenceError("Euler-Maclaurin remainder did not decay")
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            xpow /= x * x
            fact *= (2 * j + 1) * (2 * j + 2)
            j += 1
        return +total


def _check_order(k: int) -> int:
    if int(k) != k or k < 2:
        raise ArgumentError(f"zeta_reference needs an integer k >= 2, got {k!r}")
    return int(k)


def zeta_reference(k: int, prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """Riemann zeta(k), k >= 2, by Euler--Maclaurin; independent of all polylog code."""
    k = _check_order(k)
    prec = resolve(prec)
    with prec.workprec():
        return +_hurwitz_em(k, Fraction(1), prec.internal_bits)


def _arctan_inv(m: int, bits: int) -> mpmath.mpf:
    with mp.workprec(bits + 20):
        x2 = mpmath.mpf(m) ** 2
        power = 1 / mpmath.mpf(m)
        total = mpmath.mpf(0)
        eps = mpmath.mpf(2) ** (-bits - 10)
        k = 0
        while True:
            term = power / (2 * k + 1)
            total += -term if k % 2 else term
            if term < eps:
                return total
            power /= x2
            k += 1


def pi_reference(prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """pi from Machin's formula 16 atan(1/5) - 4 atan(1/239)."""
    prec = resolve(prec)
    bits = prec.internal_bits
    with prec.workprec():
        return +(16 * _arctan_inv(5, bits) - 4 * _arctan_inv(239, bits))


def catalan_reference(prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """Catalan's constant as (zeta(2, 1/4) - zeta(2, 3/4)) / 16."""
    prec = resolve(prec)
    bits = prec.internal_bits
    with prec.workprec():
        return +((_hurwitz_em(2, Fraction(1, 4), bits) - _hurwitz_em(2, Fraction(3, 4), bits)) / 16)


def two_pi_i() -> mpmath.mpc:
    return mpmath.mpc(0, 2 * mpmath.pi)


def max_abs_diff(a: Any, b: Any) -> mpmath.mpf:
    """Largest entrywise modulus of a - b for matrices or nested sequences."""
    ra, rb = _as_rows(a), _as_rows(b)
    if len(ra) != len(rb) or any(len(x) != len(y) for x, y in zip(ra, rb)):
        raise ArgumentError("shape mismatch")
    worst = mpmath.mpf(0)
    for x, y in zip(ra, rb):
        for u, v in zip(x, y):
            d = abs(to_complex(u) - to_complex(v))
            if d > worst:
                worst = d
    return worst


def identity_rows(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def iter_pairs(items: Iterable[Any]):
    items = list(items)
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            yield items[a], items[b]


class _Infinity:
    """The point at infinity of the projective line."""

    is_infinite = True
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_infinite(x: Any) -> bool:
    return getattr(x, "is_infinite", False) is True or (isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "∞"))
