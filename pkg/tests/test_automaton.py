import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orw.automaton import (MalformedWord, PdaError, accepts, anbn_pda, build_bracket_pda, flatten,
                           parse_pda, parse_word, pda_run, preset_pda, unflatten)
from orw.enumerate import MonomialSpace
from orw.phi import d_theta_star, phi_p, phi_pd
from orw.terms import Monomial

from conftest import mono

GENS, OPS = ("x", "y"), ("D", "P")
A_OMEGA = build_bracket_pda(OPS, GENS)


def test_anbn_trace_for_aabb():
    res = pda_run(anbn_pda(), parse_word("a a b b"))
    assert res.accepted
    stacks = res.stacks()
    # the first configuration precedes the push of the bottom marker
    assert stacks[0] == "eps"
    assert stacks[1:] == ["$", "$0", "$00", "$0", "$", "eps"]


def test_anbn_language():
    a = anbn_pda()
    assert accepts(a, ())
    assert not accepts(a, tuple("aab"))
    for n in range(0, 11):
        for w in itertools.product("ab", repeat=n):
            k = n // 2
            expected = n % 2 == 0 and w == ("a",) * k + ("b",) * k
            assert accepts(a, w) == expected, w


def test_unknown_symbol_is_a_diagnostic():
    res = pda_run(anbn_pda(), ("a", "c"))
    assert not res.accepted and "'c'" in res.diagnostic


def test_bracket_machine_examples():
    assert accepts(build_bracket_pda((), GENS), ("x", "y", "x"))
    one = build_bracket_pda(("T",), GENS)
    assert accepts(one, ("l:T", "x", "r:T"))
    two = build_bracket_pda(("T1", "T2"), GENS)
    assert not accepts(two, ("l:T1", "x", "r:T2"))


def test_flatten_examples():
    m = mono("D(x) P(y)")
    assert flatten(m) == ("l:D", "x", "r:D", "l:P", "y", "r:P")
    assert unflatten(()) == Monomial()
    assert flatten(mono("P(1)")) == ("l:P", "r:P")


def test_unflatten_names_the_position():
    with pytest.raises(MalformedWord) as e:
        unflatten(("l:D", "x", "r:P"))
    assert e.value.position == 2
    with pytest.raises(MalformedWord):
        unflatten(("l:D", "x"))
    with pytest.raises(MalformedWord):
        unflatten(("r:D",))


def test_roundtrip_exhaustive_small():
    space = MonomialSpace(GENS, OPS)
    for m in space.up_to(5):
        w = flatten(m)
        assert unflatten(w, GENS) == m
        assert accepts(A_OMEGA, w)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 14), st.integers(0, 10**9))
def test_roundtrip_random(n, seed):
    m = MonomialSpace(GENS, OPS).random(n, random.Random(seed))
    assert unflatten(flatten(m)) == m
    assert accepts(A_OMEGA, flatten(m))


def test_mutations_that_unbalance_are_rejected():
    space = MonomialSpace(GENS, OPS)
    symbols = ("x", "y", "l:D", "r:D", "l:P", "r:P")
    for m in space.up_to(4):
        w = flatten(m)
        for i in range(len(w)):
            for s in symbols:
                v = w[:i] + (s,) + w[i + 1:]
                try:
                    unflatten(v)
                    ok = True
                except MalformedWord:
                    ok = False
                assert accepts(A_OMEGA, v) == ok


def test_intersection_shapes_and_concatenation():
    space = MonomialSpace(("x",), ("P",))
    a_omega = build_bracket_pda(("P",), ("x",))
    words = [flatten(m) for m in space.up_to(4)]
    acc = set(words)
    for a in words[:40]:
        for b in words[:40]:
            assert accepts(a_omega, a + b)
    for w in words:
        n = len(w)
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                for k in range(j, n + 1):
                    u, v, z = w[:i], w[i:j], w[j:k]
                    if u + v in acc and v + z in acc and k == n:
                        assert u in acc and v in acc and z in acc


def test_preset_machines_match_the_predicates():
    space = MonomialSpace(("x",), ("P",))
    a_p = preset_pda("A_P", ("x",))
    for m in space.up_to(7):
        assert accepts(a_p, flatten(m)) == phi_p(m)
    # the drawn differential Rota-Baxter machine accepts every member but
    # also words opening with l:D l:P whose argument is not a bare P(u)
    space = MonomialSpace(("x",), ("P", "D"))
    a_pd = preset_pda("A_PD", ("x",))
    extra = []
    for m in space.up_to(6):
        if phi_pd(m):
            assert accepts(a_pd, flatten(m))
        elif accepts(a_pd, flatten(m)):
            extra.append(m)
    assert mono("D(P(D(x)))") in extra
    assert all(
        any(w[i:i + 2] == ("l:D", "l:P") for i in range(len(w))) for w in map(flatten, extra))


def test_preset_machine_examples():
    assert accepts(preset_pda("A_D", ("x", "y")), flatten(mono("D(x) D(x) y")))
    assert not accepts(preset_pda("A_P", ("x", "y")), flatten(mono("P(x) P(y)")))
    assert not accepts(preset_pda("A_PD", ("x",)), flatten(mono("D(P(x))")))


def test_a_d_as_drawn_overaccepts():
    # The drawn machine returns to its generator state after closing a
    # bracket, so a product of derivatives inside a derivative slips through.
    a_d = preset_pda("A_D", ("x",))
    m = mono("D(D(x) D(x))")
    assert accepts(a_d, flatten(m)) and not d_theta_star(m)
    space = MonomialSpace(("x",), ("D",))
    for m in space.up_to(6):
        if d_theta_star(m):
            assert accepts(a_d, flatten(m))


def test_pda_text_roundtrip():
    a = preset_pda("A_PD", ("x",))
    b = parse_pda(a.to_text())
    for m in MonomialSpace(("x",), ("P", "D")).up_to(4):
        assert accepts(a, flatten(m)) == accepts(b, flatten(m))


def test_unknown_machine():
    with pytest.raises(PdaError):
        preset_pda("A_Q")


MACHINES = [anbn_pda(), A_OMEGA] + [preset_pda(n, ("x",)) for n in ("A_D", "A_P", "A_PD")]


@settings(max_examples=300, deadline=None)
@given(st.integers(0, len(MACHINES) - 1), st.lists(st.integers(0, 20), max_size=14))
def test_fast_acceptance_matches_search(k, picks):
    a = MACHINES[k]
    symbols = sorted(a.input_alphabet)
    w = tuple(symbols[i % len(symbols)] for i in picks)
    assert accepts(a, w) == pda_run(a, w).accepted
