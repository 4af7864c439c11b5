from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polylogs.errors import DomainError
from polylogs.hopf import (
    LieElement,
    TensorSeries,
    ad_power,
    bracket,
    concat_product,
    coproduct,
    deshuffle,
    format_bracket,
    is_grouplike,
    is_lyndon,
    is_primitive,
    lyndon_bracket,
    lyndon_coordinates,
    lyndon_words,
    monodromy_series_residual,
    polylog_rep,
    quotient_dimension,
    quotient_generator_independent,
    quotient_relation_basis,
    rank,
    represent,
    series_exp,
    series_log,
    standard_factorization,
    witt_dimension,
)
from polylogs.monodromy import ExactMatrix

M = 5
X0 = TensorSeries.letter(0, M)
X1 = TensorSeries.letter(1, M)

small = st.integers(-3, 3).map(Fraction)


@st.composite
def lie_elements(draw):
    """Random rational combinations of low-degree brackets."""
    gens = [X0, X1, bracket(X0, X1), bracket(X0, bracket(X0, X1)), bracket(X1, bracket(X0, X1))]
    out = TensorSeries.zero(M)
    for g in gens:
        out = out + g.scale(draw(small))
    return out


def test_letters_and_product():
    p = concat_product(X0, X1)
    assert p[(0, 1)] == 1 and p[(1, 0)] == 0
    assert bracket(X0, X1)[(1, 0)] == -1


def test_deshuffle_counts():
    # (0, 1) splits as ((),(0,1)), ((0,),(1,)), ((1,),(0,)), ((0,1),())
    table = dict(deshuffle((0, 1)))
    assert len(table) == 4 and all(v == 1 for v in table.values())


@given(lie_elements())
def test_lie_elements_primitive(a):
    assert is_primitive(a) == 0


@given(lie_elements())
def test_exp_of_lie_is_grouplike(a):
    g = series_exp(a)
    assert is_grouplike(g) == 0
    assert series_log(g) == a


def test_grouplike_rejects():
    assert is_grouplike(TensorSeries.one(M) + X0 + X1) != 0
    with pytest.raises(DomainError):
        series_log(X0)


def test_coproduct_of_letter():
    assert coproduct(X0) == {((), (0,)): 1, ((0,), ()): 1}


@pytest.mark.parametrize("d,expected", [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6), (6, 9), (7, 18), (8, 30)])
def test_witt_dimension(d, expected):
    assert witt_dimension(d) == expected
    assert len([w for w in lyndon_words(d) if len(w) == d]) == expected


def test_lyndon_machinery():
    assert lyndon_words(3) == [(0,), (0, 0, 1), (0, 1), (0, 1, 1), (1,)]
    assert is_lyndon((0, 0, 1)) and not is_lyndon((1, 0))
    assert standard_factorization((0, 0, 1)) == ((0,), (0, 1))
    assert format_bracket((0, 0, 1)) == "[X0,[X0,X1]]"
    assert lyndon_bracket((0, 1), M) == bracket(X0, X1)


@given(lie_elements())
def test_lyndon_coordinates_reconstruct(a):
    coords = lyndon_coordinates(a)
    rebuilt = TensorSeries.zero(M)
    for w, c in coords.items():
        rebuilt = rebuilt + lyndon_bracket(w, M).scale(c)
    assert rebuilt == a


def test_lyndon_coordinates_rejects_non_lie():
    with pytest.raises(DomainError):
        lyndon_coordinates(concat_product(X0, X1))


def test_lie_element_requires_no_constant():
    with pytest.raises(DomainError):
        LieElement(TensorSeries.one(M))


@pytest.mark.parametrize("d", range(2, 8))
def test_quotient_is_one_dimensional(d):
    assert quotient_dimension(d) == 1
    assert quotient_generator_independent(d)


def test_relation_basis_killed_by_representation():
    basis = quotient_relation_basis(6)
    assert rank([b.coordinates for b in basis]) == len(basis)
    for n in (2, 4, 6):
        assert all(represent(b.series, n).is_zero() for b in basis)


def test_rep_images():
    a0, a1 = polylog_rep(3)
    assert isinstance(a0, ExactMatrix) and a0.is_nilpotent() and a1.is_nilpotent()
    # ad(X0)^k X1 is not killed: it spans the quotient
    assert not represent(ad_power(0, 2, TensorSeries.letter(1, 4)), 3).is_zero()


@pytest.mark.parametrize("word", ["s0", "s1", "s0 s1^-1"])
def test_monodromy_from_series(prec, word):
    assert monodromy_series_residual(word, 3, prec) < 1e-30
