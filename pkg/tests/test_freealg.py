from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from doubleext.exactnum import QQ, QuadraticField
from doubleext.freealg import (NcPoly, format_poly, parse_poly, parse_word, poly_arith, word_key, words,
                               x, y)

x1, x2, y1, y2 = x(1), x(2), y(1), y(2)


def P(text, fld=QQ):
    return parse_poly(text, fld)


def test_expand_sum_times_difference():
    got = poly_arith(x1 + x2, x1 - x2, "mul")
    assert got == P("x1*x1 - x1*x2 + x2*x1 - x2*x2")


def test_scale_by_zero_is_empty():
    p = poly_arith(x1 + y2, 0, "scale")
    assert p == NcPoly() and len(p.terms) == 0


def test_expand_with_scalar_parameter():
    fld = QuadraticField(1, 1)
    p = fld.gen
    got = (y1 - y2) * (y1 - y2.scale(p))
    want = y1 * y1 - (y1 * y2).scale(p) - y2 * y1 + (y2 * y2).scale(p)
    assert got == want


def test_leading_terms():
    q = Fraction(3)
    assert (x2 * x1 - (x1 * x2).scale(q)).leading_term() == ((1, 0), 1)
    assert (y2 * y1 - (y1 * y2).scale(5) - (y1 * y1).scale(2)).leading_term() == ((3, 2), 1)
    assert (y1 * x1 - x1 * y1).leading_term() == ((2, 0), 1)


def test_leading_term_of_zero_raises():
    with pytest.raises(ValueError):
        NcPoly().leading_term()


def test_generator_precedence():
    assert word_key((0,)) < word_key((1,)) < word_key((2,)) < word_key((3,))
    assert word_key((3, 3)) < word_key((0, 0, 0))


def test_order_is_multiplicative():
    ws = [w for n in range(4) for w in words(n)]
    short = [w for n in range(3) for w in words(n)]
    for u in ws:
        for v in ws:
            if word_key(u) < word_key(v):
                for w in short:
                    assert word_key(w + u) < word_key(w + v)
                    assert word_key(u + w) < word_key(v + w)


def test_parse_power_syntax():
    assert P("y1^2*y2") == y1 * y1 * y2
    assert parse_word("y2*x1") == (3, 0)
    assert P(" 3/2 * x1 * y1 -  y2*x2 ") == (x1 * y1).scale(Fraction(3, 2)) - y2 * x2


def test_format_parse_roundtrip_quadratic_coefficients():
    fld = QuadraticField(0, 1)
    a = fld.gen
    p = (y1 * x1).scale(1 + a) - (x2 * y2).scale(a) + x1 * x1
    assert parse_poly(format_poly(p), fld) == p


coef = st.fractions(min_value=-5, max_value=5, max_denominator=4)
word = st.lists(st.integers(0, 3), min_size=0, max_size=3).map(tuple)
poly = st.dictionaries(word, coef, max_size=4).map(NcPoly)


@given(poly, poly, poly)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(poly)
def test_print_parse_roundtrip(p):
    if p:
        assert parse_poly(format_poly(p)) == p


@given(poly)
def test_no_zero_coefficients_stored(p):
    assert all(c != 0 for c in (p - p + p).terms.values())
    assert not (p - p).terms
