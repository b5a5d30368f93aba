import pytest

from orw.branchings import critical_n_branchings
from orw.enumerate import MonomialSpace
from orw.resolution import (ESSENTIAL_BRACKET, ESSENTIAL_GEN, NON_ESSENTIAL, REDUCED,
                            Contraction, SquierTuple, UnsupportedDimension, boundary,
                            essential_kind, sigma_path, squier_generators)
from orw.systemfile import load_system
from orw.terms import Bracket

from conftest import mono, poly, preset


def test_essential_kinds():
    xp = preset("XP_reduced", ("x", "y", "z"))
    assert essential_kind(xp, mono("P(x) P(y)")) == ESSENTIAL_BRACKET
    assert essential_kind(xp, mono("P(x) P(y) P(z)")) == NON_ESSENTIAL
    assert essential_kind(xp, mono("x P(y)")) == REDUCED
    assert essential_kind(xp, mono("x P(y) P(z)")) == NON_ESSENTIAL
    ground = load_system("gens x y z\nrule h: x y -> z\n", name="h")
    assert essential_kind(ground, mono("x y")) == ESSENTIAL_GEN
    assert essential_kind(ground, mono("z x y")) == NON_ESSENTIAL
    assert essential_kind(xp, mono("P(P(x) P(y)) z")) == NON_ESSENTIAL


def test_sigma_examples():
    xp = preset("XP_reduced", ("x", "y", "z"))
    assert sigma_path(xp, mono("x P(y)")).steps == []
    p = sigma_path(xp, mono("P(x) P(y)"))
    assert len(p.steps) == 1 and p.steps[0][1].rule_name == "alpha"
    p = sigma_path(xp, mono("P(x) P(y) P(z)"))
    # the right factor is contracted first, then the leading pair
    assert str(p.steps[0][1].context) == "P(x)*_"
    assert len(p.steps) > 1
    assert p.end == xp.normal_form(mono("P(x) P(y) P(z)"))


@pytest.mark.parametrize("name,gens,bound", [("XP_reduced", ("x",), 7), ("XD_reduced", ("x",), 7),
                                             ("XI_reduced", ("x",), 7),
                                             ("XPD_reduced", ("x",), 5)])
def test_sigma_endpoints(name, gens, bound):
    s = preset(name, gens)
    sig = Contraction(s)
    space = MonomialSpace(s.gens, s.ops)
    for m in space.up_to(bound):
        assert sigma_path(s, m, sig).end == s.normal_form(m)


def test_rb_generators_are_bracket_chains():
    xp = preset("XP_reduced")
    for n in (1, 2, 3):
        gens = squier_generators(xp, n, 7)
        assert gens
        for t in gens:
            assert not t.eps and t.dimension == n
            assert all(len(c) == 1 and isinstance(c[0], Bracket) for c in t.components)


def test_differential_generators():
    xd = preset("XD_reduced")
    one = squier_generators(xd, 1, 6)
    assert one and all(t.eps for t in one)
    assert squier_generators(xd, 2, 8) == []


def test_involutive_generators():
    xi = preset("XI_reduced")
    one = squier_generators(xi, 1, 5)
    assert all(str(t).startswith("eps | B(B(") for t in one)
    assert "eps | B(B(x))" in [str(t) for t in one]
    assert all(t.eps and essential_kind(xi, t.source) == ESSENTIAL_BRACKET for t in one)
    assert squier_generators(xi, 2, 7) == []


def test_boundaries():
    xp = preset("XP_reduced", ("x", "y", "z"))
    b = boundary(xp, SquierTuple((mono("P(x)"), mono("P(y)"))))
    assert b.source == mono("P(x) P(y)")
    assert b.target == poly("P(P(x) y) + P(x P(y)) + P(x y)")
    b = boundary(xp, SquierTuple((mono("P(x)"), mono("P(y)"), mono("P(z)"))))
    assert b.closed and b.left.end == xp.normal_form(mono("P(x) P(y) P(z)"))
    assert b.to_dict(xp)["closed"]
    xi = preset("XI_reduced")
    b = boundary(xi, SquierTuple((None, mono("B(B(x))"))))
    assert b.target == poly("x")
    with pytest.raises(UnsupportedDimension):
        boundary(xp, SquierTuple((mono("P(x)"),) * 4))


def test_all_two_boundaries_close_small():
    xp = preset("XP_reduced")
    sig = Contraction(xp)
    for t in squier_generators(xp, 2, 7):
        assert boundary(xp, t, sig).closed


def test_generators_match_critical_branchings():
    xp = preset("XP_reduced")
    bound = 7
    sq = {t.source for t in squier_generators(xp, 2, bound)}
    cb = {c[0].source for c in critical_n_branchings(xp, 2, bound)}
    assert sq == cb


def test_tuple_printing():
    t = SquierTuple((None, mono("B(B(x))")))
    assert str(t) == "eps | B(B(x))" and t.size() == 3 and t.dimension == 1
