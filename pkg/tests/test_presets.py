import pytest

from orw.presets import NAMES, export_preset, load_preset
from orw.systemfile import load_system

from conftest import mono


def test_all_presets_load():
    assert len(NAMES) == 12
    for name in NAMES:
        s = load_preset(name)
        assert s.schemas and s.name == name


def test_xp_shape():
    s = load_preset("XP", ("x", "y"), 1)
    assert [r.name for r in s.schemas] == ["alpha"]
    assert s.measure_name == "rb-weight" and s.phi_name == "Phi_P"
    assert s.pda_name == "A_P"


def test_xpd_rules():
    s = load_preset("XPD")
    assert [r.name for r in s.schemas] == ["alpha", "beta", "gamma", "delta1", "delta2", "phi"]


def test_xi_any_lambda():
    for lam in (0, 1, 5):
        s = load_preset("XI", ("x",), lam)
        assert s.measure_name == "count:B(B(u))"


@pytest.mark.parametrize("name", ["YD", "X_DRB_pre", "XPD", "XPD_reduced", "YD_reduced"])
def test_lambda_zero_rejected(name):
    with pytest.raises(ValueError):
        load_preset(name, ("x",), 0)


def test_unknown_preset():
    with pytest.raises(ValueError):
        load_preset("XQ")
    with pytest.raises(ValueError):
        export_preset("XQ")


@pytest.mark.parametrize("name", NAMES)
def test_export_roundtrip(name):
    text = export_preset(name, None, 2)
    s = load_preset(name, None, 2)
    t = load_system(text, name=name, resolver=lambda n, g, l: load_preset(n, g, l))
    assert [r.name for r in t.schemas] == [r.name for r in s.schemas]
    for m in ("P(x) P(x) P(x)", "D(x x) D(x)", "B(B(B(x)))", "D(P(x)) D(x)"):
        try:
            probe = mono(m)
        except Exception:
            continue
        if set(_ops(probe)) <= set(s.ops):
            assert t.normal_form(probe) == s.normal_form(probe)


def _ops(m):
    for a in m:
        if not isinstance(a, str):
            yield a[0]
            yield from _ops(a[1])


def test_lambda_scales_rules():
    s = load_preset("XD", ("x", "y"), 3)
    nf = s.normal_form(mono("D(x y)"))
    assert nf.coefficient(mono("D(x) D(y)")) == 3
