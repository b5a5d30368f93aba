from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orw.terms import (HOLE, ONE, Bracket, Context, Monomial, Polynomial, TermError,
                       compose_contexts, measure, plug, poly_arith, scalar, size)

from conftest import mono, poly


def test_measure_examples():
    assert measure(ONE) == (0, 0, 0)
    assert measure(mono("B(x)")) == (1, 1, 2)
    assert measure(mono("x B(y B(z))")) == (2, 2, 5)


def test_monomials_are_structural_values():
    a = Monomial(("x", Bracket("P", Monomial(("y",)))))
    assert a == mono("x P(y)")
    assert hash(a) == hash(mono("x*P(y)"))
    assert str(a) == "x*P(y)"
    assert str(ONE) == "1"


def test_plug_examples():
    assert plug(Context(mono("B(_)")), mono("x y")) == mono("B(x y)")
    m = mono("P(x) y")
    assert plug(Context(Monomial((HOLE,))), m) == m
    assert plug(Context(mono("x _")), poly("2 y + 3 z")) == poly("2 x y + 3 x z")


def test_plug_rejects_contexts():
    with pytest.raises(TermError):
        plug(Context(mono("B(_)")), Context(mono("x _")))


def test_context_needs_exactly_one_hole():
    with pytest.raises(TermError):
        Context(mono("x"))
    with pytest.raises(TermError):
        Context(mono("_ B(_)"))


def test_compose_examples():
    assert compose_contexts(Context(mono("B(_)")), Context(mono("x _"))) == Context(mono("B(x _)"))
    q = Context(mono("D(_) y"))
    assert compose_contexts(Context(mono("_")), q) == q
    assert compose_contexts(Context(mono("_ y")), Context(mono("B(_)"))) == Context(mono("B(_) y"))


def test_poly_arith_examples():
    x = poly("x")
    assert poly_arith("add", x, -x) == Polynomial()
    assert not poly_arith("add", x, -x)
    assert poly_arith("multiply", poly("x + y"), poly("z")) == poly("x z + y z")
    assert poly_arith("apply-operator", poly("x + 2 y"), "D") == poly("D(x) + 2 D(y)")
    with pytest.raises(ValueError):
        poly_arith("divide", x, x)


def test_scalars_stay_exact():
    assert scalar(Fraction(4, 2)) == 2 and type(scalar(Fraction(4, 2))) is int
    p = poly("1/3 x").scale(3)
    assert p == poly("x")
    assert poly("1/2 x + 1/2 x") == poly("x")
    assert str(poly("-1/2 x + y")) == "-1/2*x + y"


def test_printing_order_and_signs():
    assert str(poly("y + x")) == "x + y"
    assert str(poly("x - 2 P(x)")) == "x - 2*P(x)"
    assert str(Polynomial()) == "0"


# -- property tests -------------------------------------------------------

gens = st.sampled_from(["x", "y"])


def _monos(depth):
    if depth == 0:
        return st.lists(gens, max_size=3).map(Monomial)
    atom = st.one_of(gens, st.builds(Bracket, st.sampled_from(["D", "P"]), _monos(depth - 1)))
    return st.lists(atom, max_size=3).map(Monomial)


monos = _monos(2)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(monos, coeffs, max_size=4).map(Polynomial)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    one = Polynomial.from_monomial(ONE)
    assert a * one == a and one * a == a
    assert a - a == Polynomial()


@settings(max_examples=150, deadline=None)
@given(polys, polys, coeffs)
def test_operator_application_is_linear(a, b, c):
    assert (a + b).apply("D") == a.apply("D") + b.apply("D")
    assert a.scale(c).apply("P") == a.apply("P").scale(c)


@settings(max_examples=150, deadline=None)
@given(polys)
def test_no_zero_coefficients(a):
    assert all(c != 0 for _, c in a.items())


@settings(max_examples=200, deadline=None)
@given(monos, monos, st.integers(0, 3))
def test_plug_size(m, ctx_body, i):
    atoms = list(ctx_body)
    atoms.insert(min(i, len(atoms)), HOLE)
    q = Context(Monomial(atoms))
    assert size(plug(q, m)) == size(q.mono) - 1 + size(m)


def test_plug_compose_coherence_exhaustive():
    from orw.enumerate import MonomialSpace, contexts_up_to
    space = MonomialSpace(["x", "y"], ["B"])
    ctxs = list(contexts_up_to(["x", "y"], ["B"], 3))
    ms = list(space.up_to(4))
    for p in ctxs:
        for q in ctxs:
            pq = compose_contexts(p, q)
            for m in ms:
                assert plug(pq, m) == plug(p, plug(q, m))
