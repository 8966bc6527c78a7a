from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import poly_strategy, ring
from noethercert.parsing import ParseError, UnknownVariable, parse_polynomial
from noethercert.poly import Polynomial

R = ring("x", "y", "z")


def test_square_expansion():
    p = parse_polynomial("x^2 - 2*x*y + y^2", R)
    x, y = Polynomial.var(R, "x"), Polynomial.var(R, "y")
    assert p == (x - y) ** 2


def test_rational_literal():
    assert parse_polynomial("3/2*x", R).coeff((1, 0, 0)) == Fraction(3, 2)


@pytest.mark.parametrize("text,expected", [
    ("  x ^ 2  ", "x^2"),
    ("-(x - y)", "y - x"),
    ("--x", "x"),
    ("(x+1)^0", "1"),
    ("2*(x+y)^2 - 4*x*y", "2*x^2 + 2*y^2"),
    ("x*-y", "-x*y"),
    ("1/3 + 2/3", "1"),
])
def test_grammar_cases(text, expected):
    assert parse_polynomial(text, R) == parse_polynomial(expected, R)


@pytest.mark.parametrize("text,pos", [
    ("x y", 2),
    ("2x", 1),
    ("x^y", 2),
    ("x^-1", 2),
    ("(x+y", 4),
    ("x + ", 4),
    ("x $ y", 2),
    ("1/0", 2),
    ("x)", 1),
])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_polynomial(text, R)
    assert err.value.position == pos


def test_implicit_multiplication_message():
    with pytest.raises(ParseError, match="implicit multiplication"):
        parse_polynomial("x y", R)


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_polynomial("x + w", R)
    assert err.value.position == 4


@given(poly_strategy(R, coeff=st.fractions(min_value=-20, max_value=20, max_denominator=7)))
def test_parse_of_print_is_identity(p):
    assert parse_polynomial(p.to_expr(), R) == p


@given(poly_strategy(R))
def test_print_of_parse_is_identity_on_canonical_forms(p):
    s = p.to_expr()
    assert parse_polynomial(s, R).to_expr() == s
