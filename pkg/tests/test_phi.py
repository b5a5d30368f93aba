import pytest

from orw.enumerate import MonomialSpace
from orw.phi import PHI, grammar_member, phi_member
from orw.terms import Bracket

from conftest import mono, preset

# Frozen member counts by size over one generator x, checked below against
# naive pattern-avoidance oracles written independently of orw.phi.
COUNTS = {
    "Phi_P": [1, 2, 5, 14, 42, 132, 429, 1430],
    "D_theta_star": [1, 1, 2, 4, 8, 16, 32, 64],
    "Phi_D": [1, 1, 2, 5, 13, 35, 97, 275],
    "Phi_I": [1, 2, 5, 16, 57, 219, 883, 3687],
    "Phi_PD": [1, 2, 6, 21, 79, 311, 1265, 5275],
}
OPS = {"Phi_P": ("P",), "D_theta_star": ("D",), "Phi_D": ("D",), "Phi_I": ("B",),
       "Phi_PD": ("P", "D")}


def _br(a, op=None):
    return a.__class__ is Bracket and (op is None or a[0] == op)


def _all_nodes(m):
    yield m
    for a in m:
        if _br(a):
            yield from _all_nodes(a[1])


def naive_p(m):
    return not any(_br(a, "P") and _br(b, "P") for n in _all_nodes(m) for a, b in zip(n, n[1:]))


def naive_d(m):
    for n in _all_nodes(m):
        for a in n:
            if _br(a, "D") and len(a[1]) == 0:
                return False
        for a, b in zip(n, n[1:]):
            if _br(a, "D") and _br(b, "D"):
                return False
    return True


def naive_i(m):
    return not any(_br(a, "B") and len(a[1]) == 1 and _br(a[1][0], "B")
                   for n in _all_nodes(m) for a in n)


def naive_dtheta(m):
    # normal forms of the unreduced Leibniz system
    return preset("XD").is_normal_form(m)


NAIVE = {"Phi_P": naive_p, "Phi_D": naive_d, "Phi_I": naive_i, "D_theta_star": naive_dtheta}


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_frozen_counts(name):
    space = MonomialSpace(("x",), OPS[name])
    got = [sum(phi_member(name, m) for m in space.of_size(s)) for s in range(8)]
    assert got == COUNTS[name]


@pytest.mark.parametrize("name", sorted(NAIVE))
def test_against_naive_oracle(name):
    space = MonomialSpace(("x",), OPS[name])
    for m in space.up_to(7):
        assert phi_member(name, m) == NAIVE[name](m), str(m)


def test_catalan_and_powers():
    cat = [1]
    for n in range(8):
        cat.append(cat[-1] * 2 * (2 * n + 1) // (n + 2))
    assert COUNTS["Phi_P"] == cat[1:9]
    assert COUNTS["D_theta_star"][1:] == [2 ** (n - 1) for n in range(1, 8)]


def test_examples():
    assert phi_member("Phi_P", mono("P(x) x P(x)"))
    assert not phi_member("Phi_P", mono("x P(x) P(1)"))
    assert phi_member("D_theta_star", mono("x D(D(x))"))
    assert not phi_member("D_theta_star", mono("D(x x)"))
    assert not phi_member("Phi_D", mono("D(1)"))
    assert phi_member("Phi_I", mono("B(B(x) x)"))
    assert not phi_member("Phi_I", mono("B(B(x))"))
    assert not phi_member("Phi_PD", mono("D(P(x))"))
    assert phi_member("Phi_PD", mono("P(D(x))"))


def test_grammars_agree_with_predicates():
    for name in ("Phi_P", "Phi_D", "Phi_I", "Phi_PD", "D_theta_star"):
        space = MonomialSpace(("x",), OPS[name])
        for m in space.up_to(6 if name == "Phi_PD" else 7):
            assert grammar_member(name, m) == phi_member(name, m), (name, str(m))


def test_literal_grammars_are_subsets():
    for name in ("Phi_P", "Phi_D", "Phi_I"):
        space = MonomialSpace(("x",), OPS[name])
        for m in space.up_to(6):
            if grammar_member(name, m, literal=True):
                assert phi_member(name, m)


def test_unknown_predicate():
    with pytest.raises(ValueError):
        phi_member("Phi_Q", mono("x"))
    assert set(PHI) == set(COUNTS)
