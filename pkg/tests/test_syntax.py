import pytest

from orw.syntax import ParseError, parse_context, parse_monomial, parse_polynomial
from orw.terms import Bracket, Monomial

G, O = ("x", "y"), ("D", "P")


def test_juxtaposition_and_star_agree():
    assert parse_monomial("x P(y)", G, O) == parse_monomial("x*P(y)", G, O)
    assert parse_monomial("xy", G, O) == Monomial(("x", "y"))


def test_identity_and_empty_brackets():
    assert parse_monomial("1", G, O) == Monomial()
    assert parse_monomial("P(1)", G, O) == Monomial((Bracket("P", Monomial()),))
    assert parse_monomial("P()", G, O) == parse_monomial("P(1)", G, O)


def test_polynomials_with_lambda():
    p = parse_polynomial("2 x - lambda P(x) + 1/3 y", G, O, lam=2)
    assert p.coefficient(Monomial(("x",))) == 2
    assert p.coefficient(parse_monomial("P(x)", G, O)) == -2
    assert str(p.coefficient(Monomial(("y",)))) == "1/3"


def test_lambda_inverse_needs_nonzero():
    with pytest.raises(ParseError):
        parse_polynomial("lambda^-1 x", G, O, lam=0)


def test_errors_carry_columns():
    with pytest.raises(ParseError) as e:
        parse_monomial("P(x", G, O)
    assert e.value.column == 4
    with pytest.raises(ParseError) as e:
        parse_monomial("x Q(y)", G, O)
    assert "Q" in str(e.value)
    with pytest.raises(ParseError):
        parse_monomial("x + y", G, O)


def test_contexts():
    q = parse_context("D(x _) y", G, O)
    assert str(q) == "D(x*_)*y"
    with pytest.raises(ParseError):
        parse_context("x y", G, O)
