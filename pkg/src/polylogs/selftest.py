"""Seeded acceptance suites.  Each suite returns a SuiteResult; the CLI and the
test-suite both drive them through ``run_suite``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import mpmath

from . import bloch, hopf, itint, monodromy, polylog, regulator
from .errors import ArgumentError, DegenerateConfigurationError
from .numerics import PrecisionConfig, catalan_reference, max_abs_diff, resolve, to_complex, zeta_reference
from .paths import HALF, Path, PathSegment, compose, invert, random_word, route_to, word_to_path


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: Any
    tol: Any
    cases: int
    elapsed: float = 0.0
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = mpmath.nstr(self.worst, 3) if not isinstance(self.worst, (int, Fraction, bool)) else str(self.worst)
        return f"{status} {self.name}: cases={self.cases} worst={worst} tol={self.tol} time={self.elapsed:.1f}s"


class _Tracker:
    def __init__(self) -> None:
        self.worst = mpmath.mpf(0)
        self.cases = 0
        self.details: list[str] = []
        self.failed = False

    def record(self, value: Any, tol: Any, label: str = "") -> None:
        self.cases += 1
        value = abs(value)
        if value > self.worst:
            self.worst = value
        if not value < tol:
            self.failed = True
            self.details.append(f"{label}: {mpmath.nstr(value, 5)}")

    def check(self, ok: bool, label: str) -> None:
        self.cases += 1
        if not ok:
            self.failed = True
            self.details.append(label)


def _rand_rational(rng: random.Random, bound: int, den: int) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(-bound * d, bound * d), d)


def _rand_complex(rng: random.Random, bound: int = 3, den: int = 8) -> tuple[Fraction, Fraction]:
    return (_rand_rational(rng, bound, den), _rand_rational(rng, bound, den))


def _far_from(z: Any, points: tuple[Any, ...], gap: float) -> bool:
    zc = to_complex(z)
    return all(abs(zc - to_complex(p)) > gap for p in points)


# ---------------------------------------------------------------------------
# 1. monodromy


def suite_monodromy(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 20) -> SuiteResult:
    prec = resolve(prec)
    rng = random.Random(seed)
    tr = _Tracker()
    tol = mpmath.mpf("1e-20")
    with prec.workprec():
        for _ in range(count):
            word = random_word(rng, 6)
            for n in range(1, 7):
                tr.record(monodromy.monodromy_residual(word, n, prec), tol, f"{word} n={n}")
    return SuiteResult("monodromy", not tr.failed, tr.worst, "1e-20", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 2. zeta recovery


def suite_zeta(seed: int = 0, prec: PrecisionConfig | None = None) -> SuiteResult:
    prec = resolve(prec)
    tr = _Tracker()
    tol = mpmath.mpf("1e-20")
    n = 5
    with prec.workprec():
        zetas = [zeta_reference(k, prec) for k in range(2, n + 1)]
        at1 = monodromy.limit_mhs(1, n, prec)
        for k in range(2, n + 1):
            tr.record(at1.matrix[0, k] - zetas[k - 2], tol, f"zeta({k})")
        tr.record(max_abs_diff(at1.matrix, monodromy.limit_expected(1, n, zetas)), tol, "P=1 matrix")
        at0 = monodromy.limit_mhs(0, n, prec)
        tr.record(max_abs_diff(at0.matrix, monodromy.limit_expected(0, n, zetas)), tol, "P=0 diagonal")
    return SuiteResult("zeta", not tr.failed, tr.worst, "1e-20", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 3. five-term relation for D2


def random_five_term_pair(rng: random.Random) -> tuple[Any, Any]:
    """A pair (x, y) whose five-term arguments stay at distance >= 1/100 from 0, 1 and within |z| <= 50."""
    while True:
        x, y = _rand_complex(rng), _rand_complex(rng)
        try:
            args = bloch.five_term_arguments(x, y)
        except (DegenerateConfigurationError, ZeroDivisionError):
            continue
        if all(_far_from(a, (0, 1), 0.01) and abs(to_complex(a)) <= 50 for a in args):
            return x, y


def suite_five_term(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 1000) -> SuiteResult:
    prec = resolve(prec)
    rng = random.Random(seed)
    tr = _Tracker()
    tol = mpmath.mpf("1e-25")
    with prec.workprec():
        for _ in range(count):
            x, y = random_five_term_pair(rng)
            tr.record(bloch.d2_eval(bloch.five_term_element(x, y), prec), tol, f"x={x} y={y}")
    return SuiteResult("five-term", not tr.failed, tr.worst, "1e-25", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 4. single-valuedness


def suite_single_valued(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 100) -> SuiteResult:
    prec = resolve(prec)
    rng = random.Random(seed)
    tr = _Tracker()
    tol = mpmath.mpf("1e-25")
    with prec.workprec():
        for _ in range(count):
            x = _rand_complex(rng, 2)
            while not _far_from(x, (0, 1), 0.05):
                x = _rand_complex(rng, 2)
            word = random_word(rng, 3, 1)
            path = compose(word_to_path(word), route_to(x))
            tr.record(polylog.d2(x, prec, path) - polylog.d2(x, prec), tol, f"D2 x={x} w={word}")
            tr.record(polylog.d3(x, prec, path) - polylog.d3(x, prec), tol, f"D3 x={x} w={word}")
    return SuiteResult("single-valued", not tr.failed, tr.worst, "1e-25", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 5. special values


def suite_special_values(seed: int = 0, prec: PrecisionConfig | None = None) -> SuiteResult:
    prec = resolve(prec)
    tr = _Tracker()
    tol = mpmath.mpf("1e-25")
    with prec.workprec():
        tr.record(polylog.d2(mpmath.mpc(0, 1), prec) - catalan_reference(prec), tol, "D2(i)")
        tr.record(polylog.d3(1, prec) - zeta_reference(3, prec), tol, "D3(1)")
    return SuiteResult("special-values", not tr.failed, tr.worst, "1e-25", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 6. Chen laws

_EXTRA_POLES = (Fraction(-1), Fraction(2), (Fraction(0), Fraction(1)), (Fraction(1, 2), Fraction(-1)))
_ALL_POLES = (Fraction(0), Fraction(1)) + _EXTRA_POLES


def _random_form(rng: random.Random) -> itint.LogForm:
    kind = rng.randrange(4)
    if kind == 0:
        return itint.E0
    if kind == 1:
        return itint.LogForm.omega1()
    if kind == 2:
        return itint.LogForm.pole(rng.choice(_EXTRA_POLES), rng.choice([1, -1, 2, Fraction(1, 2)]))
    return itint.E0 + itint.LogForm.pole(rng.choice(_EXTRA_POLES), -1)


def _random_word(rng: random.Random, length: int) -> tuple[itint.LogForm, ...]:
    return tuple(_random_form(rng) for _ in range(length))


def random_path(rng: random.Random, start: Any = HALF, pieces: int | None = None, gap: float = 0.15) -> Path:
    """A random polyline with rational vertices, every edge at distance > gap from the test poles."""
    pieces = pieces if pieces is not None else rng.randint(1, 3)
    while True:
        verts = [start]
        ok = True
        for _ in range(pieces):
            for _attempt in range(50):
                v = (Fraction(rng.randint(-12, 16), 8), Fraction(rng.randint(-12, 12), 8))
                seg = PathSegment.line(verts[-1], v)
                if to_complex(v) != to_complex(verts[-1]) and all(seg.distance_to(to_complex(p)) > gap for p in _ALL_POLES):
                    verts.append(v)
                    break
            else:
                ok = False
                break
        if ok:
            return Path(tuple(PathSegment.line(a, b) for a, b in zip(verts, verts[1:])), start)


def suite_chen(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 50) -> SuiteResult:
    prec = resolve(prec)
    rng = random.Random(seed)
    tr = _Tracker()
    tol = mpmath.mpf("1e-25")
    ii = itint.iterated_integral
    with prec.workprec():
        for case in range(count):
            # reparameterization: subdividing a segment
            word = _random_word(rng, rng.randint(1, 5))
            path = random_path(rng)
            k = rng.randrange(len(path.segments))
            u = Fraction(rng.randint(1, 99), 100)
            tr.record(ii(word, path, prec) - ii(word, path.split_segment(k, u), prec), tol, f"reparam {case}")

            # composition
            word = _random_word(rng, rng.randint(1, 4))
            alpha = random_path(rng)
            beta = random_path(rng, alpha.segments[-1].end)
            left = ii(word, compose(alpha, beta), prec)
            pa = itint.iterated_integrals_all(word, alpha, prec)
            right = mpmath.fsum(pa[i] * ii(word[i:], beta, prec) for i in range(len(word) + 1))
            tr.record(left - right, tol, f"compose {case}")

            # inversion
            word = _random_word(rng, rng.randint(1, 5))
            path = random_path(rng)
            sign = (-1) ** len(word)
            tr.record(ii(word, invert(path), prec) - sign * ii(tuple(reversed(word)), path, prec), tol, f"invert {case}")

            # shuffle
            r = rng.randint(1, 4)
            s = rng.randint(1, 5 - r)
            u_word, v_word = _random_word(rng, r), _random_word(rng, s)
            path = random_path(rng)
            lhs = ii(u_word, path, prec) * ii(v_word, path, prec)
            rhs = mpmath.fsum(c * ii(w, path, prec) for w, c in itint.shuffle_product(u_word, v_word).items())
            tr.record(lhs - rhs, tol, f"shuffle {case}")

        for case in range(3):
            path = compose(word_to_path(random_word(rng, 2, 1)), random_path(rng, HALF, 1))
            theta = itint.transport_series(path, 5, prec)
            tr.record(hopf.is_grouplike(theta), tol, f"group-like {case}")
    return SuiteResult("chen", not tr.failed, tr.worst, "1e-25", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 7. regulator

_REG_SUPPORT = tuple(Fraction(k) for k in (-2, -1, 0, 1, 2, 3))


def _random_regulator_triple(rng: random.Random):
    while True:
        f = regulator.random_split_function(rng, _REG_SUPPORT, 2, 5)
        g = regulator.random_split_function(rng, _REG_SUPPORT, 2, 5)
        pts = sorted(set(f.rational_support()) | set(g.rational_support()))
        if not pts:
            continue
        choices: list[Any] = list(pts) + ["inf"]
        return f, g, rng.choice(choices)


def _loop_functions(rng: random.Random) -> regulator.RationalFunction:
    """Split functions with zeros/poles off the standard loops (which stay in |z - 1/2| <= 1)."""
    return regulator.random_split_function(rng, (Fraction(-2), Fraction(0), Fraction(1), Fraction(3)), 2, 5)


def suite_regulator(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 50) -> SuiteResult:
    prec = resolve(prec)
    rng = random.Random(seed)
    tr = _Tracker()
    tol = mpmath.mpf("1e-25")
    rel = mpmath.mpf("1e-15")
    with prec.workprec():
        for case in range(count):
            f, g, p = _random_regulator_triple(rng)
            hol, tame = regulator.holonomy_vs_tame(f, g, p, prec)
            tame_c = mpmath.mpf(tame.numerator) / tame.denominator
            tr.record(abs(hol - tame_c) / abs(tame_c), rel, f"tame {case}: f={f} g={g} p={p}")
        loops = [word_to_path("s0"), word_to_path("s1")]
        loops += [word_to_path(random_word(rng, 4, 1)) for _ in range(10)]
        for loop in loops:
            tr.record(regulator.steinberg_residual(loop, prec), tol, "steinberg")
        for case in range(10):
            loop = word_to_path(random_word(rng, 3, 1))
            f1, f2, g = _loop_functions(rng), _loop_functions(rng), _loop_functions(rng)
            h = regulator.heisenberg_holonomy
            bil = h(f1 * f2, g, loop, prec) - h(f1, g, loop, prec) - h(f2, g, loop, prec)
            tr.record(bil.distance_to_lattice(), tol, f"bilinear {case}")
            skew = h(f1, g, loop, prec) + h(g, f1, loop, prec)
            tr.record(skew.distance_to_lattice(), tol, f"skew {case}")
    return SuiteResult("regulator", not tr.failed, tr.worst, "1e-25 (1e-15 relative for tame)", tr.cases,
                       details=tr.details)


# ---------------------------------------------------------------------------
# 8. exact algebra


def suite_exact(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 500) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker()
    done = 0
    while done < count:
        x, y = _rand_rational(rng, 10, 12), _rand_rational(rng, 10, 12)
        try:
            element = bloch.five_term_element(x, y)
        except (DegenerateConfigurationError, ZeroDivisionError):
            continue
        w = bloch.wedge_map(element)
        tr.check(w.is_zero(), f"wedge x={x} y={y}: {w}")
        done += 1
    pts = [Fraction(k, 2) for k in range(-6, 7)]
    for case in range(100):
        f = regulator.random_split_function(rng, pts)
        g = regulator.random_split_function(rng, pts)
        tr.check(regulator.reciprocity_product(f, g) == 1, f"reciprocity {case}: f={f} g={g}")
    basis = hopf.quotient_relation_basis(8)
    for n in range(1, 9):
        tr.check(all(hopf.represent(b.series, n).is_zero() for b in basis), f"polylog_rep n={n}")
    for n in range(1, 9):
        spec = monodromy.FiltrationSpec(n)
        for letter in ("s0", "s1"):
            tr.check(monodromy.check_relative_weight(monodromy.local_log(letter, n), spec), f"weight {letter} n={n}")
        r0, r1, rinf = monodromy.connection_residues(n)
        tr.check(r0.is_nilpotent() and r1.is_nilpotent() and rinf.is_nilpotent(), f"nilpotent n={n}")
        tr.check((r0 + r1 + rinf).is_zero(), f"residue sum n={n}")
    return SuiteResult("exact", not tr.failed, 0 if not tr.failed else 1, "exact", tr.cases, details=tr.details)


# ---------------------------------------------------------------------------
# 9. volumes


def _random_ideal_points(rng: random.Random, k: int, with_infinity: bool) -> list[Any]:
    while True:
        pts: list[Any] = [_rand_complex(rng, 2, 6) for _ in range(k)]
        if with_infinity:
            pts[rng.randrange(k)] = "inf"
        if not bloch.all_points_distinct(pts):
            continue
        try:
            crs = bloch.omitted_cross_ratios(pts) if k == 5 else [bloch.cross_ratio(*pts)]
        except DegenerateConfigurationError:
            continue
        if all(_far_from(c.value, (0, 1), 0.01) and abs(to_complex(c.value)) < 100 for c in crs):
            return pts


def suite_volume(seed: int = 0, prec: PrecisionConfig | None = None, count: int = 100, perm_count: int = 20
                 ) -> SuiteResult:
    prec = resolve(prec)
    rng = random.Random(seed)
    tr = _Tracker()
    tol = mpmath.mpf("1e-25")
    with prec.workprec():
        for case in range(count):
            pts = _random_ideal_points(rng, 5, case % 4 == 0)
            tr.record(bloch.polyhedron_check(pts, prec), tol, f"polyhedron {case}")
        for case in range(perm_count):
            pts = _random_ideal_points(rng, 4, case % 5 == 0)
            tr.record(bloch.antisymmetry_residual(pts, prec), tol, f"antisymmetry {case}")
    return SuiteResult("volume", not tr.failed, tr.worst, "1e-25", tr.cases, details=tr.details)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "monodromy": suite_monodromy,
    "zeta": suite_zeta,
    "five-term": suite_five_term,
    "single-valued": suite_single_valued,
    "special-values": suite_special_values,
    "chen": suite_chen,
    "regulator": suite_regulator,
    "exact": suite_exact,
    "volume": suite_volume,
}


def run_suite(name: str, seed: int = 0, prec: PrecisionConfig | None = None) -> SuiteResult:
    if name not in SUITES:
        raise ArgumentError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    start = time.perf_counter()
    result = SUITES[name](seed=seed, prec=prec)
    result.elapsed = time.perf_counter() - start
    return result


def run_all(seed: int = 0, prec: PrecisionConfig | None = None) -> list[SuiteResult]:
    return [run_suite(name, seed, prec) for name in SUITES]
