from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, strategies as st

from polylogs.errors import ArgumentError
from polylogs.hopf import TensorSeries, concat_product, is_grouplike
from polylogs.itint import (
    E0,
    E1,
    LogForm,
    form_word_for,
    iterated_integral,
    iterated_integrals_all,
    shuffle_product,
    transport_series,
)
from polylogs.paths import HALF, Path, PathSegment, compose, invert, route_to, word_to_path
from polylogs.polylog import branch_value
from polylogs.selftest import random_path



def tpi():
    return mpmath.mpc(0, 2 * mpmath.pi)

W1 = LogForm.omega1()


def test_empty_word_is_one(prec):
    assert iterated_integral((), word_to_path("s0"), prec) == 1


def test_basic_loops(prec):
    s0 = word_to_path("s0")
    assert abs(iterated_integral([E0], s0, prec) - tpi()) < 1e-35
    assert abs(iterated_integral([E0, E0], s0, prec) - tpi() ** 2 / 2) < 1e-35
    assert abs(iterated_integral([W1], word_to_path("s1"), prec) + tpi()) < 1e-35


def test_closed_form_single_integral(prec):
    path = route_to((Fraction(2), Fraction(3)))
    form = LogForm(((0, 2), (1, -1), ((Fraction(0), Fraction(1)), Fraction(1, 3))))
    assert abs(form.integrate(path, prec) - iterated_integral([form], path, prec)) < 1e-32


def test_polylog_as_iterated_integral(prec):
    # Li_2(x) = int_0^x w1 w0 once it has left 0; start near 0 and correct with the series
    x = Fraction(1, 2)
    eps = Fraction(1, 10 ** 12)
    path = Path((PathSegment.line(eps, x),), eps)
    val = iterated_integral([W1, E0], path, prec)
    e, xv = mpmath.mpf(1) / 10 ** 12, mpmath.mpf(1) / 2
    head = mpmath.polylog(2, e) - mpmath.log(1 - e) * (mpmath.log(xv) - mpmath.log(e))
    assert abs(val + head - branch_value(x, 2, None, prec)) < 1e-30


@pytest.mark.parametrize(
    "u,v,expected",
    [
        (("a",), ("b",), {("a", "b"): 1, ("b", "a"): 1}),
        (("a",), (), {("a",): 1}),
        (("a", "b"), ("c",), {("a", "b", "c"): 1, ("a", "c", "b"): 1, ("c", "a", "b"): 1}),
        (("a",), ("a",), {("a", "a"): 2}),
    ],
)
def test_shuffle_product(u, v, expected):
    assert shuffle_product(u, v) == Counter(expected)


@given(st.integers(0, 4), st.integers(0, 4))
def test_shuffle_count(r, s):
    total = sum(shuffle_product(tuple(range(r)), tuple(range(10, 10 + s))).values())
    assert total == comb(r + s, r)


def test_chen_laws_seeded(prec):
    rng = random.Random(3)
    word = (E0, E1, LogForm.pole(-1))
    alpha = random_path(rng)
    beta = random_path(rng, alpha.segments[-1].end)
    both = compose(alpha, beta)
    pa = iterated_integrals_all(word, alpha, prec)
    conv = mpmath.fsum(pa[i] * iterated_integral(word[i:], beta, prec) for i in range(4))
    assert abs(iterated_integral(word, both, prec) - conv) < 1e-30
    rev = iterated_integral(tuple(reversed(word)), alpha, prec)
    assert abs(iterated_integral(word, invert(alpha), prec) + rev) < 1e-30
    split = alpha.split_segment(0, Fraction(1, 3))
    assert abs(iterated_integral(word, split, prec) - iterated_integral(word, alpha, prec)) < 1e-30


def test_shuffle_numeric(prec):
    path = random_path(random.Random(8))
    u, v = (E0, E1), (LogForm.pole(2),)
    lhs = iterated_integral(u, path, prec) * iterated_integral(v, path, prec)
    rhs = mpmath.fsum(c * iterated_integral(w, path, prec) for w, c in shuffle_product(u, v).items())
    assert abs(lhs - rhs) < 1e-30


def test_transport_series_basics(prec):
    assert transport_series(Path((), HALF), 3, prec) == TensorSeries.one(3)
    th = transport_series(word_to_path("s0"), 1, prec)
    assert abs(th[(0,)] - tpi()) < 1e-35 and abs(th[(1,)]) < 1e-35
    with pytest.raises(ArgumentError):
        transport_series(word_to_path("s0"), 0, prec)


def test_transport_series_entries_are_iterated_integrals(prec):
    path = word_to_path("s1 s0")
    th = transport_series(path, 3, prec)
    for w in [(0, 1), (1, 1, 0)]:
        assert abs(th[w] - iterated_integral(form_word_for(w), path, prec)) < 1e-30


def test_transport_series_multiplicative_and_grouplike(prec):
    a, b = word_to_path("s0"), word_to_path("s1^-1")
    ta, tb, tab = (transport_series(p, 4, prec) for p in (a, b, compose(a, b)))
    assert (tab - concat_product(ta, tb)).max_abs() < 1e-30
    assert is_grouplike(tab) < 1e-30
