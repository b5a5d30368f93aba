"""Normal-form languages as membership predicates.

Each predicate is decided by forbidden plugged factors.  The grammar
recognizers (``grammar_member``) follow the inductive alternating-product
definitions and serve as an independent cross-check; ``literal=True``
reproduces the level-by-level definitions exactly, which miss monomials
mixing nesting depths (see the tests).
"""

from __future__ import annotations

from typing import Callable, Iterable

from .terms import Bracket, Monomial


def _nodes(m):
    yield m
    for a in m:
        if a.__class__ is Bracket:
            yield from _nodes(a[1])


def _is_br(a, op=None) -> bool:
    return a.__class__ is Bracket and (op is None or a[0] == op)


def phi_p(m, gens=None, op: str = "P") -> bool:
    """No factor ``P(u)P(v)``."""
    for node in _nodes(m):
        prev = False
        for a in node:
            cur = _is_br(a, op)
            if cur and prev:
                return False
            prev = cur
    return True


def phi_d(m, gens=None, op: str = "D") -> bool:
    """No factor ``D(u)D(v)`` and no ``D(1)``."""
    for node in _nodes(m):
        prev = False
        for a in node:
            cur = _is_br(a, op)
            if cur:
                if prev or not a[1]:
                    return False
            prev = cur
    return True


def _chain(a) -> bool:
    while a.__class__ is Bracket:
        if len(a[1]) != 1:
            return False
        a = a[1][0]
    return True


def d_theta_star(m, gens=None, op: str = "D") -> bool:
    """Every atom is ``D^i(x)`` for a generator ``x``."""
    return all(_chain(a) for a in m)


def phi_i(m, gens=None) -> bool:
    """No factor ``B(B(u))`` (a bracket whose argument is a single bracket of
    the same operator)."""
    for node in _nodes(m):
        for a in node:
            if a.__class__ is Bracket and len(a[1]) == 1:
                b = a[1][0]
                if b.__class__ is Bracket and b[0] == a[0]:
                    return False
    return True


def phi_pd(m, gens=None) -> bool:
    """No two adjacent bracket atoms, no ``D(1)``, no ``D(P(u))``."""
    for node in _nodes(m):
        prev = False
        for a in node:
            cur = a.__class__ is Bracket
            if cur:
                if prev:
                    return False
                if a[0] == "D":
                    arg = a[1]
                    if not arg:
                        return False
                    if len(arg) == 1 and _is_br(arg[0], "P"):
                        return False
            prev = cur
    return True


PHI: dict[str, Callable] = {
    "Phi_P": phi_p,
    "Phi_D": phi_d,
    "D_theta_star": d_theta_star,
    "Phi_I": phi_i,
    "Phi_PD": phi_pd,
}


def phi_member(name: str, m, gens=None) -> bool:
    try:
        pred = PHI[name]
    except KeyError:
        raise ValueError(f"unknown predicate {name!r}; expected one of {', '.join(PHI)}")
    return pred(m, gens)


# ---------------------------------------------------------------------------
# grammar recognizers

def _alternating(m, op) -> bool:
    """No two adjacent ``op`` brackets and no two adjacent generator runs
    (the latter is automatic for maximal runs)."""
    prev = False
    for a in m:
        cur = _is_br(a, op)
        if cur and prev:
            return False
        prev = cur
    return True


def _levels_p(m, cap) -> set[int]:
    """Levels ``n`` with ``m`` in the literal ``Phi_n`` of the Rota-Baxter grammar."""
    out = set()
    has_br = any(a.__class__ is Bracket for a in m)
    if m and not has_br:
        out.add(0)
    if not m or not _alternating(m, "P") or any(a.__class__ is Bracket and a[0] != "P" for a in m):
        return out
    args = [a[1] for a in m if a.__class__ is Bracket]
    for n in range(1, cap + 1):
        if n == 1:
            ok = all(not any(b.__class__ is Bracket for b in v) for v in args)
        else:
            ok = all(n - 1 in _levels_p(v, n - 1) for v in args)
        if ok:
            out.add(n)
    return out


def _levels_d(m, cap) -> set[int]:
    out = set()
    has_br = any(a.__class__ is Bracket for a in m)
    if m and not has_br:
        out.add(0)
    if not m or not _alternating(m, "D") or any(a.__class__ is Bracket and a[0] != "D" for a in m):
        return out
    args = [a[1] for a in m if a.__class__ is Bracket]
    for n in range(1, cap + 1):
        if n == 1:
            ok = all(v and not any(b.__class__ is Bracket for b in v) for v in args)
        else:
            ok = all(n - 1 in _levels_d(v, n - 1) for v in args)
        if ok:
            out.add(n)
    return out


def _levels_i(m, cap) -> set[int]:
    out = set()
    atoms_ok0 = all(a.__class__ is not Bracket or
                    not any(b.__class__ is Bracket for b in a[1]) for a in m)
    if atoms_ok0:
        out.add(0)
    args = [a[1] for a in m if a.__class__ is Bracket]
    for n in range(1, cap + 1):
        if all(len(v) >= 2 and n - 1 in _levels_i(v, n - 1) for v in args):
            out.add(n)
    return out


def _pk1(a) -> bool:
    """``a`` is ``P^k(1)`` with ``k >= 1``."""
    while a.__class__ is Bracket and a[0] == "P":
        if not a[1]:
            return True
        if len(a[1]) != 1:
            return False
        a = a[1][0]
    return False


def _pd_phi(m) -> bool:
    """Cumulative inner language of the differential Rota-Baxter grammar."""
    if not any(a.__class__ is not Bracket for a in m):
        return False
    prev = False
    for a in m:
        cur = a.__class__ is Bracket
        if cur:
            if prev:
                return False
            if not (_pk1(a) or _pd_atom(a)):
                return False
        prev = cur
    return True


def _pd_atom(a) -> bool:
    """``a = P^i(D^j(v))`` with ``i + j >= 1`` and ``v`` in the inner language."""
    i = 0
    while a.__class__ is Bracket and a[0] == "P":
        arg = a[1]
        i += 1
        if len(arg) == 1 and arg[0].__class__ is Bracket:
            a = arg[0]
            continue
        return _pd_phi(arg)
    while a.__class__ is Bracket and a[0] == "D":
        arg = a[1]
        if len(arg) == 1 and arg[0].__class__ is Bracket and arg[0][0] == "D":
            a = arg[0]
            continue
        return _pd_phi(arg)
    return False


def _grammar_pd(m) -> bool:
    if not m:
        return True
    if len(m) == 1 and m[0].__class__ is Bracket:
        return _pk1(m[0]) or _pd_atom(m[0])
    return _pd_phi(m)


def _grammar_p(m) -> bool:
    if not _alternating(m, "P"):
        return False
    return all(_grammar_p(a[1]) for a in m if a.__class__ is Bracket)


def _grammar_d(m, top=True) -> bool:
    if not m:
        return top
    if not _alternating(m, "D"):
        return False
    return all(a[1] and _grammar_d(a[1], False) for a in m if a.__class__ is Bracket)


def _grammar_i(m) -> bool:
    for a in m:
        if a.__class__ is Bracket:
            v = a[1]
            if len(v) == 1 and v[0].__class__ is Bracket:
                return False
            if not _grammar_i(v):
                return False
    return True


def _depth(m) -> int:
    d = 0
    for a in m:
        if a.__class__ is Bracket:
            d = max(d, 1 + _depth(a[1]))
    return d


def grammar_member(name: str, m: Monomial, literal: bool = False) -> bool:
    """Membership by the inductive grammars.

    ``literal`` evaluates the level-indexed unions exactly as defined (only
    available for ``Phi_P``, ``Phi_D`` and ``Phi_I``).
    """
    if name == "D_theta_star":
        return d_theta_star(m)
    if literal:
        cap = _depth(m) + 1
        if name == "Phi_P":
            return not m or bool(_levels_p(m, cap))
        if name == "Phi_D":
            return not m or bool(_levels_d(m, cap))
        if name == "Phi_I":
            return bool(_levels_i(m, cap))
        raise ValueError(f"no literal grammar for {name}")
    if name == "Phi_P":
        return _grammar_p(m)
    if name == "Phi_D":
        return _grammar_d(m)
    if name == "Phi_I":
        return _grammar_i(m)
    if name == "Phi_PD":
        return _grammar_pd(m)
    raise ValueError(f"unknown predicate {name!r}")
