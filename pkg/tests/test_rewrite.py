import random

import pytest

from orw.enumerate import MonomialSpace
from orw.resolution import check_reduced
from orw.rewrite import NonTermination
from orw.systemfile import SystemFileError, load_system
from orw.terms import Context, Polynomial, plug

from conftest import mono, poly, preset


def small(text):
    return load_system(text, name="test")


def test_match_ground_rule_positions():
    s = small("gens x y z\nops B\nrule h: x y -> z\n")
    found = s.match_rule(s.schemas[0], mono("B(x y) x y"))
    assert [str(q) for q, _ in found] == ["B(_)*x*y", "B(x*y)*_"]


def test_match_schema_splits():
    s = preset("XD", ("x", "y", "z"))
    found = s.match_rule(s.schemas[0], mono("D(x y z)"))
    assert [(str(b["u"]), str(b["v"])) for _, b in found] == [("x", "y*z"), ("x*y", "z")]
    assert s.match_rule(preset("XP", ("x", "y", "z")).schemas[0], mono("D(z)")) == []


def test_rewrite_once_examples():
    xd = preset("XD", ("x", "y"))
    c, step, new = xd.rewrite_once(poly("D(x y)"))
    assert step.rule_name == "alpha"
    assert new == poly("D(x) y + x D(y) + D(x) D(y)")
    xp = preset("XP", ("x", "y"))
    _, _, new = xp.rewrite_once(poly("P(x) P(y)"))
    assert new == poly("P(P(x) y) + P(x P(y)) + P(x y)")
    assert xp.rewrite_once(poly("P(x P(y)) + y")) is None


def test_lambda_enters_targets():
    xp = load_preset_lam("XP", 3)
    _, _, new = xp.rewrite_once(poly("P(x) P(y)"))
    assert new == poly("P(P(x) y) + P(x P(y)) + 3 P(x y)")


def load_preset_lam(name, lam):
    from orw.presets import load_preset
    return load_preset(name, ("x", "y"), lam)


def test_normalize_examples():
    assert preset("XPD").normalize(poly("D(P(x))"))[0] == poly("x")
    assert preset("XI").normalize(poly("B(B(B(x)))"))[0] == poly("B(x)")
    nf, path = preset("XD", ("x", "y")).normalize(poly("D(x) D(y)"))
    assert nf == poly("D(x) D(y)") and len(path) == 0


def test_path_steps_are_sound():
    xd = preset("XD", ("x", "y"))
    nf, path = xd.normalize(poly("D(x y D(x y))"))
    cur = path.start
    for c, st in path.steps:
        assert st.source == plug(st.context, st.lhs)
        diff = Polynomial.from_monomial(st.source) - st.target
        assert diff == plug(st.context, Polynomial.from_monomial(st.lhs) - st.rhs)
        cur = cur - diff.scale(c)
    assert cur == nf == path.end


def test_idempotence_and_strategies():
    rng = random.Random(5)
    for name, gens in (("XD", ("x", "y")), ("XP", ("x",)), ("XPD", ("x",)), ("XI", ("x",)),
                       ("YD", ("x",)), ("XP_reduced", ("x",))):
        s = preset(name, gens)
        space = MonomialSpace(s.gens, s.ops)
        for _ in range(40):
            m = space.random(rng.randint(1, 7), rng)
            nf = s.normal_form(m)
            assert s.normal_form(nf) == nf
            assert s.normalize(m, strategy="random", seed=rng.randint(0, 99))[0] == nf
            assert s.normalize(m)[0] == nf


def test_fuel_exhaustion_names_the_term():
    s = small("gens x y\nops B\nrule grow: x -> x x + y\n")
    with pytest.raises(NonTermination) as e:
        s.normalize(poly("x"), fuel=50)
    assert "x" in str(e.value)


def test_reducedness_reports():
    xd = preset("XD", ("x",))
    r = check_reduced(xd, 5)
    assert not r.left and r.left_witness is not None
    assert check_reduced(preset("XP_reduced"), 6).left
    assert check_reduced(preset("XP_reduced"), 6).right
    r = check_reduced(small("gens x y z\nrule h: x y -> z\n"), 4)
    assert r.left and r.right


def test_nf_markers_use_the_companion():
    red = preset("XP_reduced")
    nf = red.normal_form(mono("P(x) P(P(x) P(x))"))
    assert nf == preset("XP").normal_form(mono("P(x) P(P(x) P(x))"))


def test_non_confluent_system_has_several_normal_forms():
    pre = preset("X_DRB_pre")
    nfs = pre.normal_forms(mono("D(P(x)) D(x)"))
    assert nfs is not None and len(nfs) == 2


def test_system_file_errors():
    with pytest.raises(SystemFileError) as e:
        small("gens x\nops P\nrule a(u: ne): P(u -> u\n")
    assert e.value.line == 3
    with pytest.raises(SystemFileError) as e:
        small("gens x\nops P\nrule a(u: weird): P(u) -> u\n")
    assert "weird" in str(e.value)
    with pytest.raises(SystemFileError):
        small("gens x\nops P\nfrobnicate\n")
    with pytest.raises(SystemFileError):
        small("ops P\nrule a: P(1) -> 0\n")


def test_unknown_operator_in_rule():
    with pytest.raises(SystemFileError) as e:
        small("gens x\nops P\nrule bad: Q(x) -> x\n")
    assert e.value.line == 3
