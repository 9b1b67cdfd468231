import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ultradisc.errors import (
    DivisionByZero,
    FieldMismatch,
    NonInvertibleDenominator,
    ParseError,
    PrecisionExhausted,
)
from ultradisc.ufield import FieldDesc, format_scalar, parse_scalar, valuation

Q5 = FieldDesc.padic(5)
F3 = FieldDesc.laurent_fp(3)
QT = FieldDesc.laurent_q()


def test_field_defaults():
    assert Q5.precision == 64
    assert F3.precision == 256
    assert str(Q5) == "Q_5" and str(F3) == "F_3((T))" and str(QT) == "Q((T))"


@pytest.mark.parametrize("kind,p", [("padic", 4), ("laurent_fp", 1), ("laurent_q", 3)])
def test_bad_field(kind, p):
    with pytest.raises(ValueError):
        FieldDesc(kind, p)


def test_valuation_examples():
    assert valuation(Q5.from_int(75)) == 2
    assert F3.parse("T^-1 + T").valuation() == -1
    assert Q5.zero().valuation() == math.inf


def test_arith_examples():
    assert (Q5.from_int(5) - Q5.from_int(5)).is_exact_zero
    one = Q5.from_int(5) * Q5.from_fraction(Fraction(1, 5))
    assert one == Q5.one() and one.valuation() == 0
    assert (F3.parse("T") + F3.parse("2*T")).is_exact_zero


def test_padic_division_tracks_precision():
    x = Q5.one() / Q5.from_int(-20)
    assert x.valuation() == -1
    assert x.relative_precision == 64
    assert format_scalar(x) == "-1/20 + O(5^63)"


def test_cancellation_gives_zero_to_precision():
    x = Q5.one() / Q5.from_int(3)
    d = x - Q5.parse("1/3")
    assert d.is_zero_to_precision
    assert d.valuation() == 64


def test_zero_to_precision_absorbs():
    z = Q5.zero_to_precision(10)
    assert (z + Q5.from_int(5)).valuation() == 1
    assert (z + Q5.uniformizer_power(12)).is_zero_to_precision


def test_division_errors():
    with pytest.raises(DivisionByZero):
        Q5.one() / Q5.zero()
    with pytest.raises(PrecisionExhausted):
        Q5.one() / Q5.zero_to_precision(3)


def test_cross_field_rejected():
    with pytest.raises(FieldMismatch):
        Q5.one() + FieldDesc.padic(7).one()


@pytest.mark.parametrize(
    "field,text,expected",
    [
        (Q5, "3*5^2 + 1 + O(5^3)", "76 + O(5^3)"),
        (Q5, "-1/20", "-1/20 + O(5^63)"),
        (Q5, "-75", "-75"),
        (F3, "T^-1 + 2 + T^3", "T^-1 + 2 + T^3"),
        (QT, "1/2*T - 3*T^2", "1/2*T - 3*T^2"),
        (F3, "O(T^4)", "O(T^4)"),
    ],
)
def test_parse_format(field, text, expected):
    assert format_scalar(parse_scalar(field, text)) == expected


@pytest.mark.parametrize("field,text", [(Q5, "1/3"), (F3, "2*T^-2 + 1"), (QT, "7/5*T^3")])
def test_round_trip_literals(field, text):
    x = field.parse(text)
    assert field.parse(format_scalar(x)) == x


def test_round_trip_inexact():
    x = F3.one() / F3.parse("1 + T")
    assert F3.parse(format_scalar(x)) == x
    y = Q5.one() / Q5.from_int(7)
    assert Q5.parse(format_scalar(y)) == y


def test_parse_errors():
    with pytest.raises(ParseError):
        Q5.parse("3 +")
    with pytest.raises(NonInvertibleDenominator):
        F3.parse("1/3")


# -- properties -------------------------------------------------------------------

small = st.fractions(min_value=-50, max_value=50, max_denominator=7)


@st.composite
def laurent_q(draw):
    coeffs = draw(st.lists(small, min_size=1, max_size=5))
    if coeffs[0] == 0:
        coeffs[0] = Fraction(1)
    return QT.laurent(coeffs, draw(st.integers(-4, 4)))


@st.composite
def laurent_f3(draw):
    coeffs = draw(st.lists(st.integers(0, 2), min_size=1, max_size=6))
    if coeffs[0] == 0:
        coeffs[0] = 1
    return F3.laurent(coeffs, draw(st.integers(-4, 4)))


@given(laurent_q(), laurent_q())
def test_ultrametric_q(x, y):
    s = x + y
    assert s.valuation() >= min(x.valuation(), y.valuation())
    if x.valuation() != y.valuation():
        assert s.valuation() == min(x.valuation(), y.valuation())


@given(laurent_q(), laurent_q(), laurent_q())
@settings(max_examples=200)
def test_ring_axioms_q(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y).valuation() == x.valuation() + y.valuation()


@given(laurent_f3(), laurent_f3(), laurent_f3())
def test_ring_axioms_f3(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x - x).is_exact_zero


@given(laurent_q())
def test_inverse_to_window(x):
    r = x * x.inverse() - QT.one()
    assert r.is_zero()


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_padic_fraction_valuation(a, b):
    x = Q5.from_fraction(Fraction(a, b))
    expect = 0
    while a % 5 == 0:
        a //= 5
        expect += 1
    while b % 5 == 0:
        b //= 5
        expect -= 1
    assert x.valuation() == expect
