from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from polylogs.errors import DiscontinuityError, ParseError, SingularityError
from polylogs.numerics import to_complex
from polylogs.paths import (
    HALF,
    MonodromyWord,
    Path,
    PathSegment,
    compose,
    format_path,
    invert,
    parse_path_text,
    random_word,
    route_to,
    standard_loop,
    validate,
    word_to_path,
)


@pytest.mark.parametrize(
    "text,letters",
    [
        ("s0", ("s0",)),
        ("s0 s1^-1", ("s0", "s1^-1")),
        ("s1⁻¹ s0", ("s1^-1", "s0")),
        ("1", ()),
        ("", ()),
        ("s0*s1", ("s0", "s1")),
    ],
)
def test_parse_word(text, letters):
    assert MonodromyWord.parse(text).letters == letters


def test_parse_word_rejects():
    with pytest.raises(ParseError):
        MonodromyWord.parse("s2")


def test_word_inverse():
    w = MonodromyWord.parse("s0 s1^-1 s1")
    assert str(w.inverse()) == "s1^-1 s1 s0^-1"


@pytest.mark.parametrize("letter", ["s0", "s1", "s0^-1", "s1^-1"])
def test_standard_loops_closed(letter):
    loop = standard_loop(letter)
    assert loop.is_closed()
    assert abs(loop.start_point() - mpmath.mpf("0.5")) < 1e-40
    assert loop.distance_to(0) > 0.4 and loop.distance_to(1) > 0.4


def test_word_to_path_concatenates():
    p = word_to_path("s0 s1 s0^-1")
    assert len(p.segments) == 3 and p.is_closed()


def test_compose_requires_meeting_point():
    a = Path((PathSegment.line(HALF, 2),), HALF)
    b = Path((PathSegment.line(3, 4),), Fraction(3))
    with pytest.raises(DiscontinuityError):
        compose(a, b)


def test_validate_rejects_poles():
    p = Path((PathSegment.line(Fraction(-1), Fraction(1, 2)),), Fraction(-1))
    with pytest.raises(SingularityError):
        validate(p)


def test_invert_roundtrip():
    p = route_to((Fraction(2), Fraction(1)))
    q = invert(invert(p))
    assert abs(q.end_point() - p.end_point()) < 1e-40
    assert abs(invert(p).end_point() - mpmath.mpf("0.5")) < 1e-40


@given(st.floats(0.01, 0.99))
def test_split_preserves_endpoints(u):
    p = word_to_path("s1")
    q = p.split_segment(0, Fraction(u).limit_denominator(1000))
    assert len(q.segments) == 2
    assert abs(q.end_point() - p.end_point()) < 1e-40


@pytest.mark.parametrize("x", [Fraction(-2), Fraction(3), (Fraction(1, 2), Fraction(2)), (Fraction(5), Fraction(-1))])
def test_route_ends_at_target_and_clears_poles(x):
    p = route_to(x)
    target = to_complex(x)
    assert abs(p.end_point() - target) < 1e-40
    assert p.distance_to(0) > 0 and p.distance_to(1) > 0


def test_mirror_maps_route():
    x = (Fraction(2), Fraction(1))
    m = route_to(x).mirrored()
    assert abs(m.end_point() - mpmath.mpc(-1, -1)) < 1e-40


def test_path_file_roundtrip():
    text = "basepoint 0.5 0\n# loop around 0\narc 0 0 0.5 0 2pi\nline 0.5 0 2 1\n"
    p = parse_path_text(text)
    q = parse_path_text(format_path(p))
    assert abs(q.end_point() - mpmath.mpc(2, 1)) < 1e-40
    assert len(q.segments) == 2


@pytest.mark.parametrize("text", ["lin 0 0 1 1", "arc 0 0 -1 0 1", "line 0 0 1"])
def test_path_file_errors(text):
    with pytest.raises(ParseError):
        parse_path_text(text)


def test_random_word_seeded():
    a = random_word(random.Random(5), 6)
    b = random_word(random.Random(5), 6)
    assert a == b and len(a) <= 6
