import pytest
from hypothesis import given, settings, strategies as st

from orw.enumerate import MonomialSpace
from orw.measures import (check_context_compatible, check_termination, count_measure,
                          diff_weight, named_measure, op_count, rb_weight)
from orw.systemfile import load_system
from orw.terms import Monomial

from conftest import mono, preset


def test_diff_weight_values():
    d = diff_weight()
    assert d.value(mono("D(1)")) == (0, 1, 0)
    assert d.value(mono("D(x y)")) == (1, 1, 2)
    assert d.value(mono("D(x) D(y)")) == (0, 2, 2)
    assert d.value(Monomial(())) == (0, 0, 0)


def test_rb_weight_values():
    d = rb_weight()
    assert d.value(mono("P(1)")) == (1, 1)
    assert d.value(mono("P(x) P(y)")) == (2, 4)
    assert d.value(mono("P(P(x) y)")) == (2, 3)
    assert d.value(Monomial(())) == (0, 0)


SPACE = MonomialSpace(("x", "y"), ("D", "P"))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.randoms(use_true_random=False))
def test_derivation_law(i, j, rng):
    a, b = SPACE.random(i, rng), SPACE.random(j, rng)
    for d in (diff_weight(), rb_weight(), op_count()):
        lhs = d.value(Monomial(tuple(a) + tuple(b)))
        rhs = tuple(p + q for p, q in zip(d.right(d.value(a), b), d.left(a, d.value(b))))
        assert lhs == rhs


@pytest.mark.parametrize("name", ["XD", "XP", "XPD", "YD", "XI", "X_DRB_pre"])
def test_bundled_termination(name):
    s = preset(name)
    r = check_termination(s, named_measure(s.measure_name, s), 6)
    assert r.passed and r.checked > 0
    assert "bounded" in r.note


def test_no_monomial_order_count_measure():
    s = preset("no_monomial_order", ("x", "y", "z"))
    r = check_termination(s, named_measure(s.measure_name, s), 8)
    assert r.passed
    c = count_measure("x B(y) z", s.gens, s.ops)
    assert c.value(mono("x B(y) z")) == (1,)
    assert c.value(mono("B(x B(y) z) x B(y) z")) == (2,)
    assert c.value(mono("B(x) y B(z)")) == (0,)


def test_counterexample_reported():
    s = preset("XD")
    r = check_termination(s, op_count(), 5)
    assert not r.passed
    ce = r.counterexample
    assert ce["rule"] == "alpha[x, x]"
    assert ce["term_value"] >= ce["source_value"]


def test_bad_system_fails_termination():
    s = load_system("gens x y\nops B\nrule grow: B(x) -> B(x) x\n", name="grow")
    r = check_termination(s, op_count(), 4)
    assert not r.passed and r.counterexample["source"] == "B(x)"


def test_context_compatibility_rb_weight():
    assert check_context_compatible(preset("XP"), rb_weight(), 5, ctx_bound=3) is None


def test_unknown_measure():
    with pytest.raises(ValueError):
        named_measure("nope")
