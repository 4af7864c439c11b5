from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from polylogs.errors import DomainError
from polylogs.numerics import catalan_reference, to_complex, zeta_reference
from polylogs.paths import compose, route_to, word_to_path
from polylogs.polylog import (
    base_state,
    branch_at,
    branch_value,
    continue_branch,
    d1,
    d2,
    d3,
    li_value,
    polylog_row,
    principal_lambda,
)


def test_principal_lambda_structure(prec):
    st_ = principal_lambda(Fraction(1, 3), 4, prec)
    m = st_.matrix
    tpi = 2j * mpmath.pi
    log_x = mpmath.log(mpmath.mpf(1) / 3)
    assert m[0, 0] == 1
    for k in range(1, 5):
        assert abs(m[0, k] - mpmath.polylog(k, mpmath.mpf(1) / 3)) < 1e-35
    assert abs(m[1, 2] - tpi * log_x) < 1e-35
    assert abs(m[2, 4] - tpi ** 2 * log_x ** 2 / 2) < 1e-35
    assert st_.diagonal_residual() < 1e-35


def test_principal_lambda_domain(prec):
    with pytest.raises(DomainError):
        principal_lambda(Fraction(3, 2), 2, prec)


@pytest.mark.parametrize("x", [Fraction(-2), Fraction(3), (Fraction(1, 3), Fraction(5, 4)), (Fraction(-1), Fraction(-1))])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_default_route_is_principal_branch(prec, x, k):
    xv = to_complex(x)
    ref = mpmath.polylog(k, xv)
    if k == 1:
        ref = -mpmath.log(1 - xv)
    assert abs(branch_value(x, k, None, prec) - ref) < 1e-32


def test_loop_around_one_shifts_dilog(prec):
    # continuing Li2 once around 1 (positively) adds -2 pi i log x
    x = Fraction(1, 3)
    path = compose(word_to_path("s1"), route_to(x))
    shifted = branch_value(x, 2, path, prec)
    assert abs(shifted - (mpmath.polylog(2, mpmath.mpf(1) / 3) - 2j * mpmath.pi * mpmath.log(mpmath.mpf(1) / 3))) < 1e-32


def test_loop_around_zero_keeps_li(prec):
    path = compose(word_to_path("s0"), route_to(Fraction(1, 3)))
    assert abs(branch_value(Fraction(1, 3), 3, path, prec) - mpmath.polylog(3, mpmath.mpf(1) / 3)) < 1e-32


def test_continue_branch_history(prec):
    s = continue_branch(base_state(3, prec), word_to_path("s0 s1"), prec)
    assert len(s.history.segments) == 2
    # Li_1 = -log(1 - x) loses 2 pi i around 1; the loop around 0 changes nothing
    assert abs(li_value(s, 1) - li_value(base_state(3, prec), 1) + 2j * mpmath.pi) < 1e-30
    assert abs(s.log_value() - mpmath.log(2) * -1 - 2j * mpmath.pi) < 1e-30


def test_branch_at_matches_row(prec):
    x = (Fraction(2), Fraction(1))
    assert abs(branch_at(x, 3, None, prec).rows[0][3] - polylog_row(x, 3, prec)[3]) < 1e-35


def test_special_values(prec):
    assert abs(d2(mpmath.mpc(0, 1), prec) - catalan_reference(prec)) < 1e-30
    assert abs(d3(1, prec) - zeta_reference(3, prec)) < 1e-30
    assert d2(Fraction(1, 2), prec) == 0


@given(st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=60))
def test_d2_vanishes_on_unit_interval(x):
    assert abs(d2(x)) < 1e-30


@given(st.tuples(st.fractions(-3, 3, max_denominator=8), st.fractions(-3, 3, max_denominator=8)))
def test_d2_reflections(pt):
    re_part, im_part = pt
    z = to_complex((re_part, im_part))
    if abs(z) < 0.05 or abs(z - 1) < 0.05:
        return
    v = d2(z)
    assert abs(d2(1 - z) + v) < 1e-30
    assert abs(d2(1 / z) + v) < 1e-30
    assert abs(d2(mpmath.conj(z)) + v) < 1e-30


def test_d1_is_log_abs(prec):
    assert abs(d1((Fraction(3), Fraction(4)), prec) - mpmath.log(5)) < 1e-35
    with pytest.raises(DomainError):
        d1(0, prec)


@pytest.mark.parametrize("word", ["s0", "s1", "s0 s1^-1", "s1 s1 s0"])
def test_single_valued_under_loops(prec, word):
    x = (Fraction(-1, 2), Fraction(3, 4))
    path = compose(word_to_path(word), route_to(x))
    assert abs(d2(x, prec, path) - d2(x, prec)) < 1e-30
    assert abs(d3(x, prec, path) - d3(x, prec)) < 1e-30
