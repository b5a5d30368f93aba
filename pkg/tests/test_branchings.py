from collections import Counter

import pytest

from orw.branchings import (BranchingError, classify, classify_family, compile_families,
                            complete, critical_n_branchings, critical_pairs, gs_trivial,
                            have_common_reduct, joinable, match_completion_targets)
from orw.presets import load_preset
from orw.systemfile import load_system
from orw.terms import Polynomial

from conftest import mono, poly, preset


def small(text):
    return load_system(text, name="test")


def test_classify_kinds():
    xd = preset("XD", ("x", "y"))
    a, = xd.steps(mono("D(x y)"))
    assert classify(a, a) == "aspherical"
    b, = xd.steps(mono("D(y x)"))
    assert classify(a, b, poly("D(x y) + D(y x)")) == "additive"
    with pytest.raises(BranchingError):
        classify(a, b)
    with pytest.raises(BranchingError):
        classify(a, b, poly("D(x y)"))
    xp = preset("XP", ("x", "y"))
    steps = xp.steps(mono("P(x) P(y) P(x) P(y)"))
    kinds = Counter(classify(s, t) for i, s in enumerate(steps) for t in steps[i + 1:])
    assert kinds == Counter({"Peiffer": 1, "overlapping": 2})


def test_inclusion_through_bracket():
    s = small("gens x y z\nops B\nrule k: B(x y) -> y x\nrule h: x y -> z\n")
    cps = critical_pairs(s, 6)
    assert len(cps) == 1
    cb = cps[0]
    assert cb.kind == "inclusion" and str(cb.source) == "B(x*y)"
    assert (cb.left_rule, cb.right_rule) == ("k", "h")


def test_no_self_overlap():
    assert critical_pairs(small("gens x y z\nrule h: x y -> z\n"), 8) == []


def test_xp_families_small_bound():
    xp = preset("XP")
    temps = compile_families(xp)
    cps = critical_pairs(xp, 6)
    fam = Counter(classify_family(cb, temps).split(":")[0] for cb in cps)
    assert fam == Counter({"i": 183, "ii": 97, "iii": 97})
    assert all(joinable(xp, cb).joinable for cb in cps)


def test_reduced_has_intersections_only():
    cps = critical_pairs(preset("XP_reduced"), 7)
    assert cps and {cb.kind for cb in cps} == {"intersection"}


def test_involutive_joinable_and_three_branchings():
    xi = preset("XI")
    cps = critical_pairs(xi, 5)
    assert cps
    for cb in cps:
        res = joinable(xi, cb)
        assert res.joinable
    cb = [c for c in cps if str(c.source) == "B(B(B(x)))"][0]
    assert cb.left.target == cb.right.target == poly("B(x)")
    threes = critical_n_branchings(xi, 3, 5)
    paper = [c for c in threes if [str(s.context) for s in c] == ["_", "B(_)", "B(B(_))"]]
    assert [str(c[0].source) for c in paper][:2] == ["B(B(B(B(1))))", "B(B(B(B(x))))"]
    # ground enumeration also sees overlaps inside the metavariable
    assert all(str(c[0].source).startswith("B(B(B(B(") for c in threes)
    assert critical_n_branchings(small("gens x y z\nrule h: x y -> z\n"), 3, 6) == []


def test_reduced_rb_two_branchings():
    tri = critical_n_branchings(preset("XP_reduced"), 2, 5)
    assert tri
    for combo in tri:
        src = combo[0].source
        assert len(src) == 3 and all(not isinstance(a, str) for a in src)


def test_obstruction_not_joinable():
    pre = preset("X_DRB_pre", ("x", "y"))
    cbs = [cb for cb in critical_pairs(pre, 5) if str(cb.source) == "D(P(x))*D(y)"]
    assert cbs
    for cb in cbs:
        res = joinable(pre, cb)
        assert not res.joinable and res.exhaustive
        assert not gs_trivial(pre, cb).trivial
    xpd = preset("XPD", ("x", "y"))
    for cb in critical_pairs(xpd, 5):
        if str(cb.source) == "D(P(x))*D(y)":
            assert joinable(xpd, cb).joinable


def test_gs_examples():
    xp = preset("XP", ("x", "y", "z"))
    cbs = [cb for cb in critical_pairs(xp, 6) if str(cb.source) == "P(x)*P(y)*P(z)"]
    assert cbs and all(gs_trivial(xp, cb).trivial for cb in cbs)


def test_have_common_reduct_branches():
    pre = preset("X_DRB_pre")
    m = Polynomial.from_monomial(mono("D(P(x)) D(x)"))
    nfs = pre.normal_forms(mono("D(P(x)) D(x)"))
    a, b = sorted(nfs, key=str)
    ok, common = have_common_reduct(pre, m, a)
    assert ok and common == a
    ok, _ = have_common_reduct(pre, a, b)
    assert ok is False


def test_complete_leaves_convergent_system_alone():
    out, rep = complete(preset("XP"), 6)
    assert rep.added == [] and rep.converged
    out, rep = complete(small("gens x y z\nrule h: x y -> z\n"), 6)
    assert rep.added == [] and rep.converged


def test_complete_small_bound():
    pre = load_preset("X_DRB_pre")
    out, rep = complete(pre, 6)
    assert rep.converged and rep.sound and rep.rounds <= 3
    names = Counter(n for _, n in match_completion_targets(out, rep))
    assert None not in names and set(names) == {"delta1", "delta2"}
    assert sum(names.values()) == len(rep.added) == 178
