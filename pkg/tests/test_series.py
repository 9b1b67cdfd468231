import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ultradisc.errors import NoTailModel, NotAPolynomial, OutsideConvergenceDisc
from ultradisc.series import (
    CoeffBoundModel,
    TruncatedSeries,
    newton_polygon,
    power_table,
    ps_add,
    ps_comp_inverse,
    ps_compose,
    ps_eval,
    ps_mul,
    series_from_json,
    series_to_json,
    variation_floor,
)
from ultradisc.ufield import FieldDesc

Q5 = FieldDesc.padic(5)
QT = FieldDesc.laurent_q()


def poly(field, *lits, order=None):
    lits = list(lits) + ["0"] * ((order or len(lits)) - len(lits))
    return TruncatedSeries.from_literals(field, lits, polynomial=True)


def text(h):
    return [str(c) for c in h.coeffs]


def test_mul_example():
    f = poly(Q5, "5", "1", order=4)
    assert text(ps_mul(f, f)) == ["0", "25", "10", "1"]


def test_compose_example():
    h = poly(QT, "1", "1", order=4)
    assert text(ps_compose(h, h)) == ["1", "2", "2", "1"]


def test_inverse_example():
    h = poly(QT, "1", "1", order=4)
    inv = ps_comp_inverse(h)
    assert text(inv) == ["1", "-1", "2", "-5"]
    assert text(ps_compose(h, inv)) == ["1", "0", "0", "0"]


def test_inverse_catalan():
    # (x - x^2)^{-1} has Catalan numbers as coefficients
    h = poly(QT, "1", "-1", order=10)
    assert text(ps_comp_inverse(h)) == [str(c) for c in (1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862)]


def test_power_table_entries():
    h = poly(QT, "1", "1", order=5)
    P = power_table(h)
    # (x + x^2)^3 = x^3 + 3x^4 + 3x^5 + ...
    assert [str(P[3][j]) for j in (3, 4, 5)] == ["1", "3", "3"]
    assert P[2][2] == QT.one()


def test_eval_polynomial_exact():
    f = poly(Q5, "5", "1")
    val, tail = ps_eval(f, Q5.from_int(-5))
    assert val.is_exact_zero and tail == math.inf


def test_eval_tail_floor():
    # sum x^k with |c_k| <= 1; at v(x) = 2 the tail past order 4 is O(5^10)
    g = TruncatedSeries.from_literals(Q5, ["1"] * 4)
    g = TruncatedSeries(Q5, g.coeffs, tail_model=CoeffBoundModel(c1=0))
    val, tail = ps_eval(g, Q5.from_int(25))
    assert tail == 10
    assert str(val) == str(Q5.from_int(25 + 625 + 5**6 + 5**8))


def test_eval_without_model():
    g = TruncatedSeries.from_literals(Q5, ["1", "1"])
    assert ps_eval(g, Q5.from_int(5))[1] is None
    with pytest.raises(NoTailModel):
        ps_eval(g, Q5.from_int(5), rigorous=True)


def test_eval_outside_model_disc():
    g = TruncatedSeries(Q5, [Q5.one(), Q5.one()], tail_model=CoeffBoundModel(c1=0))
    with pytest.raises(OutsideConvergenceDisc):
        ps_eval(g, Q5.one())


def test_variation_floor_polynomial():
    f = poly(Q5, "5", "1")
    # f(y + e) - f(y) = e (5 + 2y + e); v(y) = 2, v(e) >= 3 -> v >= 4
    assert variation_floor(f, Q5.from_int(25), 3) == 4


def test_newton_polygon_quadratic():
    f = poly(Q5, "5", "1")
    npg = newton_polygon(f)
    assert npg.root_valuations() == [(Fraction(1), 1)]


def test_newton_polygon_two_slopes():
    # hull (1,0) (2,-2) (3,-1): slopes -2 and 1, so roots of valuation 2 and -1
    f = poly(Q5, "1", "1/25", "1/5")
    assert newton_polygon(f).vertices == ((1, 0), (2, -2), (3, -1))
    assert newton_polygon(f).root_valuations() == [(Fraction(-1), 1), (Fraction(2), 1)]


def test_newton_polygon_needs_polynomial():
    with pytest.raises(NotAPolynomial):
        newton_polygon(TruncatedSeries.from_literals(Q5, ["1", "1"]))


def test_json_round_trip():
    h = poly(QT, "1", "-1/2*T", "T^-3")
    assert series_from_json(QT, series_to_json(h)) == h


# -- ring axioms over Q((T)) -----------------------------------------------------------

coeff = st.builds(
    lambda cs, v: QT.laurent(cs, v) if cs[0] else QT.zero(),
    st.lists(st.integers(-9, 9), min_size=1, max_size=3),
    st.integers(-2, 2),
)
series = st.lists(coeff, min_size=5, max_size=5).map(lambda cs: TruncatedSeries(QT, cs))


@given(series, series, series)
@settings(max_examples=60, deadline=None)
def test_series_ring_axioms(a, b, c):
    assert ps_add(ps_add(a, b), c) == ps_add(a, ps_add(b, c))
    assert ps_mul(ps_mul(a, b), c) == ps_mul(a, ps_mul(b, c))
    assert ps_mul(a, ps_add(b, c)) == ps_add(ps_mul(a, b), ps_mul(a, c))
    assert ps_mul(a, b) == ps_mul(b, a)


@given(series, series)
@settings(max_examples=40, deadline=None)
def test_compose_associative(a, b):
    x = TruncatedSeries.identity(QT, 5)
    a = ps_add(x, ps_mul(a, ps_mul(x, x)))
    b = ps_add(x, ps_mul(b, ps_mul(x, x)))
    assert ps_compose(ps_compose(a, b), x) == ps_compose(a, ps_compose(b, x))
    assert ps_compose(a, ps_comp_inverse(a)).coeffs == x.coeffs
