from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from polylogs.bloch import (
    BlochCombo,
    FormalWedge,
    WedgeElement,
    antisymmetry_residual,
    cross_ratio,
    d2_eval,
    displayed_five_term_arguments,
    five_term_element,
    five_term_element_displayed,
    format_combo,
    omitted_cross_ratios,
    parse_combo_text,
    polyhedron_check,
    rho,
    rho_combo,
    rho_probe,
    tetra_volume,
    wedge_map,
)
from polylogs.errors import DegenerateConfigurationError, ParseError
from polylogs.numerics import catalan_reference
from polylogs.polylog import d2

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=20)
pts = st.tuples(st.fractions(-3, 3, max_denominator=6), st.fractions(-3, 3, max_denominator=6))


def test_five_term_displayed_example():
    assert displayed_five_term_arguments(2, 3) == [2, 3, Fraction(3, 2), 2, Fraction(4, 3)]
    assert five_term_element_displayed(2, 3) == BlochCombo(((3, -1), (Fraction(3, 2), 1), (Fraction(4, 3), 1)))


def test_five_term_degenerate():
    for x, y in [(2, 2), (0, 3), (1, 3), (2, Fraction(1, 2) * 0)]:
        with pytest.raises(DegenerateConfigurationError):
            five_term_element(x, y)


def test_wedge_examples():
    assert wedge_map(BlochCombo.generator(2)) == WedgeElement((((-1, 2), 1),))
    # 2 ^ (-1) = -((-1) ^ 2), which equals (-1) ^ 2 in the 2-torsion part
    assert wedge_map(BlochCombo.generator(-1)) == WedgeElement((((-1, 2), 1),))
    assert wedge_map(BlochCombo.generator(Fraction(1, 2))).is_zero()
    assert WedgeElement.wedge(Fraction(-1), Fraction(-1)).is_zero()
    assert WedgeElement.wedge(Fraction(6), Fraction(6)).is_zero()
    assert str(WedgeElement.wedge(Fraction(2), Fraction(9))) == "2*(2)^(3)"


@given(rationals, rationals)
def test_wedge_kills_five_term(x, y):
    try:
        element = five_term_element(x, y)
    except (DegenerateConfigurationError, ZeroDivisionError):
        assume(False)
    assert wedge_map(element).is_zero()
    # the literal display differs by 2-torsion
    assert wedge_map(five_term_element_displayed(x, y)).scale(2).is_zero()


@given(rationals, rationals)
def test_wedge_is_additive(x, y):
    assume(x not in (0, 1) and y not in (0, 1))
    a, b = BlochCombo.generator(x), BlochCombo.generator(y).scale(3)
    assert wedge_map(a + b) == wedge_map(a) + wedge_map(b)


def test_combo_text_roundtrip():
    c = parse_combo_text("# comment\n2 3\n-1 1/2\n1 0.5+2i\n")
    assert parse_combo_text(format_combo(c)) == c
    with pytest.raises(ParseError):
        parse_combo_text("x 2")
    with pytest.raises(DegenerateConfigurationError):
        parse_combo_text("1 1")


def test_d2_eval_five_term(prec):
    x, y = (Fraction(1, 3), Fraction(1)), (Fraction(-2), Fraction(1, 2))
    assert abs(d2_eval(five_term_element(x, y), prec)) < 1e-30
    assert abs(d2_eval(five_term_element_displayed(x, y), prec)) < 1e-30


def test_rho_probe_alternating():
    a = mpmath.mpc(1.5, -2)
    assert rho_probe(FormalWedge(((Fraction(1), a, a),))) == 0


@pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(-2), Fraction(5), (Fraction(1, 2), Fraction(2)), (Fraction(3), Fraction(-1))])
def test_rho_probe_equals_d2(prec, x):
    assert abs(rho_probe(rho(x, prec)) - d2(x, prec)) < 1e-30


def test_rho_five_term(prec):
    x, y = (Fraction(2), Fraction(1)), (Fraction(-1, 3), Fraction(1, 2))
    assert abs(rho_probe(rho_combo(five_term_element(x, y), prec))) < 1e-30


def test_rho_real_interval(prec):
    assert abs(rho_probe(rho(Fraction(1, 4), prec))) < 1e-30


def test_cross_ratio_normalization():
    assert cross_ratio(Fraction(5, 7), 1, 0, "inf").value == Fraction(5, 7)
    with pytest.raises(DegenerateConfigurationError):
        cross_ratio(1, 1, 0, "inf")


def test_omitted_cross_ratios_give_five_term_arguments():
    x, y = Fraction(2, 7), Fraction(-3, 5)
    crs = [c.value for c in omitted_cross_ratios([y, x, 1, 0, "inf"])]
    assert crs == [x, y, y / x, (1 - y) / (1 - x), x * (y - 1) / (y * (x - 1))]


def test_tetra_volume_catalan(prec):
    assert abs(tetra_volume((Fraction(0), Fraction(1)), 1, 0, "inf", prec=prec) - catalan_reference(prec)) < 1e-30
    assert tetra_volume(Fraction(1, 3), 1, 0, "inf", prec=prec) == 0


@given(st.lists(pts, min_size=5, max_size=5, unique=True))
def test_polyhedron_alternating_sum(points):
    try:
        assume(all(abs(mpmath.mpmathify(c.value) - t) > 0.01 for c in omitted_cross_ratios(points) for t in (0, 1)))
    except DegenerateConfigurationError:
        assume(False)
    assert polyhedron_check(points) < 1e-30


def test_antisymmetry(prec):
    assert antisymmetry_residual([(Fraction(2), Fraction(1)), (Fraction(1, 3), Fraction(-1)), Fraction(-1), "inf"], prec) < 1e-30
