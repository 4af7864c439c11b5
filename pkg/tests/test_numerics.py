from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from polylogs.errors import ArgumentError, DomainError, ParseError
from polylogs.numerics import (
    INF,
    LogConnection,
    PrecisionConfig,
    catalan_reference,
    format_complex,
    is_infinite,
    ode_transport,
    parse_complex,
    pi_reference,
    polylog_row_series,
    series_polylog,
    transport_rows,
    zeta_reference,
)
from polylogs.paths import Path, PathSegment


def test_internal_bits_cover_tolerance():
    assert PrecisionConfig(256, 1e-30).internal_bits == 256 + 24
    assert PrecisionConfig(64, 1e-40).internal_bits >= 2 * 40 * 3.32
    assert PrecisionConfig(128).doubled().working_bits == 256


@pytest.mark.parametrize("bits,tol", [(32, 1e-30), (256, 0), (256, -1.0)])
def test_bad_precision(bits, tol):
    with pytest.raises(ArgumentError):
        PrecisionConfig(bits, tol)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("0.5", (Fraction(1, 2), Fraction(0))),
        ("2+1i", (Fraction(2), Fraction(1))),
        ("-1.25-3i", (Fraction(-5, 4), Fraction(-3))),
        ("i", (Fraction(0), Fraction(1))),
        ("-i", (Fraction(0), Fraction(-1))),
        ("1e-2j", (Fraction(0), Fraction(1, 100))),
        ("1/3", (Fraction(1, 3), Fraction(0))),
        ("1/2-2/3i", (Fraction(1, 2), Fraction(-2, 3))),
        ("1/2+i", (Fraction(1, 2), Fraction(1))),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "1+", "abc", "1+2", "i i", "1/0", "1/2++i", "e-2j"])
def test_parse_complex_rejects(text):
    with pytest.raises(ParseError):
        parse_complex(text)


def test_format_complex():
    assert format_complex(mpmath.mpc(1, -2), 5) == "1.0-2.0i"


def test_infinity_sentinel():
    assert is_infinite(INF) and is_infinite("inf") and is_infinite("∞")
    assert not is_infinite(0) and not is_infinite("1")


@pytest.mark.parametrize("k", [1, 2, 3, 5])
@pytest.mark.parametrize("x", [mpmath.mpf("0.3"), mpmath.mpc("-0.5", "0.4"), mpmath.mpc(0, "0.75")])
def test_series_matches_mpmath(prec, k, x):
    assert abs(series_polylog(k, x, prec) - mpmath.polylog(k, x)) < 1e-35


def test_series_domain(prec):
    with pytest.raises(DomainError):
        series_polylog(2, mpmath.mpf("0.8"), prec)
    with pytest.raises(ArgumentError):
        series_polylog(0, mpmath.mpf("0.1"), prec)


def test_series_row(prec):
    x = mpmath.mpf("0.25")
    row = polylog_row_series(3, x, prec)
    assert row[0] == 1
    assert abs(row[1] + mpmath.log(1 - x)) < 1e-35


@given(st.fractions(min_value=Fraction(-7, 10), max_value=Fraction(7, 10), max_denominator=50))
def test_series_dilog_real(x):
    xv = mpmath.mpf(x.numerator) / x.denominator
    assert abs(series_polylog(2, xv) - mpmath.polylog(2, xv)) < 1e-35


def test_references(prec):
    assert abs(pi_reference(prec) - mpmath.pi) < 1e-40
    assert abs(catalan_reference(prec) - mpmath.catalan) < 1e-40
    for k in (2, 3, 4, 5):
        assert abs(zeta_reference(k, prec) - mpmath.zeta(k)) < 1e-40


def test_transport_log_around_zero(prec):
    # row (1, 0) under d(row) = row * [[0, dz/z], [0, 0]]: second entry gains 2 pi i
    conn = LogConnection.from_dict(2, {0: {(0, 1): 1}})
    loop = Path((PathSegment.arc(0, Fraction(1, 2), 0, 2),), Fraction(1, 2))
    row = transport_rows(conn, loop, [[1, 0]], prec)[0]
    assert abs(row[1] - 2j * mpmath.pi) < 1e-35
    m = ode_transport(conn, loop, mpmath.eye(2), prec)
    assert abs(m[0, 1] - 2j * mpmath.pi) < 1e-35


def test_transport_line_gives_log(prec):
    conn = LogConnection.from_dict(2, {0: {(0, 1): 1}})
    path = Path((PathSegment.line(Fraction(1, 2), Fraction(3)),), Fraction(1, 2))
    row = transport_rows(conn, path, [[1, 0]], prec)[0]
    assert abs(row[1] - mpmath.log(6)) < 1e-35
