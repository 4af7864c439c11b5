from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import mpmath
import pytest
from hypothesis import given, strategies as st

from polylogs.errors import ArgumentError
from polylogs.monodromy import (
    ExactMatrix,
    FiltrationSpec,
    check_relative_weight,
    connection_residues,
    exact_exp,
    exact_log,
    ext_class_matrix,
    from_numeric,
    generator_matrix,
    limit_expected,
    limit_mhs,
    local_log,
    monodromy_exact,
    monodromy_residual,
)
from polylogs.numerics import max_abs_diff, zeta_reference
from polylogs.paths import MonodromyWord, random_word

words = st.lists(st.sampled_from(["s0", "s1", "s0^-1", "s1^-1"]), max_size=5).map(MonodromyWord)


def test_generator_s1():
    m = generator_matrix("s1", 3)
    assert m[0, 1] == -1
    assert (m - ExactMatrix.identity(4))[0, 1] == -1
    assert sum(abs(v) for row in m.entries for v in row) == 5


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_generator_s0_is_exponential_block(n):
    m = generator_matrix("s0", n)
    assert m[0, 0] == 1 and all(m[0, j] == 0 for j in range(1, n + 1))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            assert m[i, j] == Fraction(1, factorial(j - i))


@given(words, words)
def test_monodromy_is_homomorphism(u, v):
    assert monodromy_exact(u + v, 4) == monodromy_exact(u, 4) @ monodromy_exact(v, 4)


@given(words)
def test_inverse_word(u):
    assert monodromy_exact(u + u.inverse(), 3) == ExactMatrix.identity(4)
    assert monodromy_exact(u, 3).is_unipotent()


@pytest.mark.parametrize("word", ["s0", "s1", "s0 s1", "s1^-1 s0 s0", ""])
def test_numeric_matches_exact(prec, word):
    assert monodromy_residual(word, 4, prec) < 1e-30


def test_seeded_random_words(prec):
    rng = random.Random(11)
    for _ in range(3):
        w = random_word(rng, 4)
        assert monodromy_residual(w, 3, prec) < 1e-30


def test_from_numeric_recovers_rationals(prec):
    m = monodromy_exact("s0 s1 s0", 3)
    assert from_numeric(m.to_numeric(prec)) == m


@pytest.mark.parametrize("n", [1, 3, 6])
def test_residues_nilpotent_and_sum_zero(n):
    r0, r1, rinf = connection_residues(n)
    assert r0.is_nilpotent() and r1.is_nilpotent() and rinf.is_nilpotent()
    assert (r0 + r1 + rinf).is_zero()


@pytest.mark.parametrize("letter", ["s0", "s1"])
@pytest.mark.parametrize("n", [2, 5, 8])
def test_local_log(letter, n):
    L = local_log(letter, n)
    assert L.is_nilpotent()
    # exp(2 pi i N) recovers the monodromy: N carries twist -1
    assert exact_exp(ExactMatrix(L.entries, 0)) == generator_matrix(letter, n)
    assert check_relative_weight(L, FiltrationSpec(n))


def test_exact_log_exp_roundtrip():
    m = monodromy_exact("s0 s1^-1 s0", 4)
    assert exact_exp(exact_log(m)) == m


def test_filtration_spec():
    spec = FiltrationSpec(3)
    assert spec.check()


def test_relative_weight_rejects_wrong_operator():
    bad = ExactMatrix.from_entries(4, {(3, 0): 1})
    assert not check_relative_weight(bad, FiltrationSpec(3))


def test_limit_at_one_gives_zetas(prec):
    res = limit_mhs(1, 4, prec)
    zetas = [zeta_reference(k, prec) for k in range(2, 5)]
    assert max_abs_diff(res.matrix, limit_expected(1, 4, zetas)) < 1e-30
    assert res.residual < 1e-30


def test_limit_at_zero_is_diagonal(prec):
    res = limit_mhs(0, 3, prec)
    assert max_abs_diff(res.matrix, limit_expected(0, 3, [])) < 1e-30


def test_limit_bad_point(prec):
    with pytest.raises(ArgumentError):
        limit_mhs(2, 3, prec)


def test_ext_class_matrix(prec):
    m = ext_class_matrix(mpmath.zeta(3), 3, prec)
    assert m[0, 0] == 1 and m[1, 0] == 0
    assert abs(m[1, 1] - (2j * mpmath.pi) ** 3) < 1e-30
    with pytest.raises(ArgumentError):
        ext_class_matrix(1, 0, prec)
