"""Squier generators of a reduced convergent system and their boundaries.

The canonical contraction ``sigma`` reduces a monomial by peeling its first
atom: the rest is normalized first, a non-reduced bracket argument is
normalized inside its bracket, and an essential monomial is rewritten by the
unique rule whose source is a top-level prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .enumerate import MonomialSpace
from .phi import PHI, phi_member  # noqa: F401  (re-exported)
from .rewrite import RewritePath, RewriteStep, System
from .terms import (Bracket, Monomial, Polynomial, bracket_context, compose_contexts,
                    left_mult_context, size)

REDUCED = "reduced"
ESSENTIAL_GEN = "essential-gen"
ESSENTIAL_BRACKET = "essential-bracket"
NON_ESSENTIAL = "non-essential"


class ResolutionError(ValueError):
    pass


class UnsupportedDimension(ResolutionError):
    code = "unsupported-dimension"


# ---------------------------------------------------------------------------
# tuples

@dataclass(frozen=True)
class SquierTuple:
    """``u1 | u2 | ... | u(n+1)``; ``u1`` is ``None`` for the empty marker."""
    components: tuple

    @property
    def dimension(self) -> int:
        return len(self.components) - 1

    @property
    def eps(self) -> bool:
        return self.components[0] is None

    @property
    def source(self) -> Monomial:
        atoms: tuple = ()
        for c in self.components:
            if c is not None:
                atoms += tuple(c)
        return Monomial(atoms)

    def size(self) -> int:
        return size(self.source)

    def __str__(self) -> str:
        return " | ".join("eps" if c is None else str(c) for c in self.components)


def essential_kind(system: System, m: Monomial) -> str:
    if system.is_normal_form(m):
        return REDUCED
    if not m:
        return NON_ESSENTIAL
    y, v = m[0], Monomial(m[1:])
    if not system.is_normal_form(v):
        return NON_ESSENTIAL
    if y.__class__ is Bracket:
        return ESSENTIAL_BRACKET if system.is_normal_form(y[1]) else NON_ESSENTIAL
    return ESSENTIAL_GEN


def _nf_atoms(system: System, space: MonomialSpace, bound: int) -> dict[int, list]:
    out = {}
    for s in range(1, bound + 1):
        out[s] = [a for a in space.atoms(s) if system.is_normal_form(Monomial((a,)))]
    return out


def _extensions(system: System, prev: tuple, budget: int, atoms: dict) -> Iterator[Monomial]:
    """Normal forms ``v`` with ``prev v`` reducible and every proper top-level
    prefix of ``prev v`` a normal form (``prev`` itself is one)."""

    def rec(cur: tuple, left: int):
        for s in range(1, left + 1):
            for a in atoms[s]:
                cand = cur + (a,)
                if not system.is_normal_form(Monomial(cand)):
                    continue
                if system.is_reducible(Monomial(prev + cand)):
                    yield Monomial(cand)
                else:
                    yield from rec(cand, left - s)

    yield from rec((), budget)


def squier_generators(system: System, n: int, bound: int) -> list[SquierTuple]:
    """All ``n``-generators whose source has size at most ``bound``."""
    if n < 1:
        raise ResolutionError("dimension must be at least 1")
    space = MonomialSpace(system.gens, system.ops)
    atoms = _nf_atoms(system, space, bound)
    out: list[SquierTuple] = []

    def grow(comps: tuple, used: int):
        if len(comps) == n + 1:
            out.append(SquierTuple(comps))
            return
        for v in _extensions(system, tuple(comps[-1]), bound - used, atoms):
            grow(comps + (v,), used + size(v))

    for s in range(1, bound + 1):
        for a in atoms[s]:
            grow((Monomial((a,)),), s)
    if n == 1:
        for s in range(1, bound + 1):
            for u0 in space.of_size(s - 1):
                if not system.is_normal_form(u0):
                    continue
                for op in system.ops:
                    b = Monomial((Bracket(op, u0),))
                    if system.is_reducible(b):
                        out.append(SquierTuple((None, b)))
    key = system.key
    out.sort(key=lambda t: (t.size(), key(t.source),
                            tuple(len(c) if c is not None else -1 for c in t.components)))
    return out


# ---------------------------------------------------------------------------
# the contraction

def _embed(ctx, steps):
    return [(c, RewriteStep(s.rule_name, s.rule_index, s.binding,
                            compose_contexts(ctx, s.context), s.lhs, s.rhs))
            for c, s in steps]


def _scaled(c, steps):
    return [(c * d, s) for d, s in steps]


def _prefix_step(system: System, m: Monomial, k: int) -> RewriteStep:
    """The step of the rule whose source is the top-level prefix of ``m``
    ending at atom ``k``."""
    rs = [r for r in system.redexes(Monomial(m[:k])) if not r.path and r.end == k]
    if not rs:
        raise ResolutionError(f"no rule ends the prefix {Monomial(m[:k])}")
    if len(rs) > 1:
        rs = [system.choose_redex(Monomial(m[:k]), rs)]
    return system.step_of(m, rs[0])


class Contraction:
    """Memoized ``sigma`` for one system."""

    def __init__(self, system: System):
        self.system = system
        self._memo: dict = {}

    def steps(self, m: Monomial) -> list:
        hit = self._memo.get(m)
        if hit is None:
            hit = self._memo[m] = self._compute(m)
        return hit

    def _then(self, target: Polynomial) -> list:
        out = []
        for t, c in target.items():
            out += _scaled(c, self.steps(t))
        return out

    def _compute(self, m: Monomial) -> list:
        X = self.system
        if X.is_normal_form(m):
            return []
        y, v = m[0], Monomial(m[1:])
        if y.__class__ is Bracket and not X.is_normal_form(y[1]):
            w = y[1]
            out = _embed(bracket_context(y[0], None, v), self.steps(w))
            for wi, c in X.normal_form(w).items():
                out += _scaled(c, self.steps(Monomial((Bracket(y[0], wi),) + tuple(v))))
            return out
        if not X.is_normal_form(v):
            out = _embed(left_mult_context(Monomial((y,))), self.steps(v))
            for vi, c in X.normal_form(v).items():
                out += _scaled(c, self.steps(Monomial((y,) + tuple(vi))))
            return out
        # essential
        k = 1
        while not X.is_reducible(Monomial(m[:k])):
            k += 1
        step = _prefix_step(X, m, k)
        return [(1, step)] + self._then(step.target)

    def path(self, p) -> RewritePath:
        if isinstance(p, Monomial):
            p = Polynomial.from_monomial(p)
        steps = []
        for m, c in p.items():
            steps += _scaled(c, self.steps(m))
        return RewritePath(p, steps, replay(p, steps))


def replay(start: Polynomial, steps) -> Polynomial:
    cur = start
    for c, s in steps:
        cur = cur + (s.target - Polynomial.from_monomial(s.source)).scale(c)
    return cur


def sigma_path(system: System, m, contraction: Contraction | None = None) -> RewritePath:
    """The canonical path from ``m`` to its normal form."""
    sig = contraction or Contraction(system)
    path = sig.path(m)
    if path.end != system.normal_form(path.start):
        raise ResolutionError(f"contraction of {m} does not reach its normal form; "
                              "is the system reduced and convergent?")
    return path


# ---------------------------------------------------------------------------
# boundaries

@dataclass
class Boundary:
    dimension: int
    source: Monomial
    target: Polynomial | None = None
    left: RewritePath | None = None
    right: RewritePath | None = None

    @property
    def closed(self) -> bool:
        if self.dimension == 1:
            return True
        return self.left.end == self.right.end

    def to_dict(self, system: System | None = None) -> dict:
        fmt = system.fmt if system is not None else str
        d = {"dimension": self.dimension, "source": str(self.source)}
        if self.dimension == 1:
            d["target"] = fmt(self.target)
        else:
            d["left"] = self.left.to_dict()
            d["right"] = self.right.to_dict()
            d["closed"] = self.closed
        return d


def boundary(system: System, t: SquierTuple, contraction: Contraction | None = None) -> Boundary:
    if t.dimension == 1:
        src = t.source
        return Boundary(1, src, target=system.normal_form(src))
    if t.dimension != 2:
        raise UnsupportedDimension(f"boundaries are computed for dimensions 1 and 2, not {t.dimension}")
    sig = contraction or Contraction(system)
    u1, u2, _ = t.components
    src = t.source
    first = _prefix_step(system, src, len(u1) + len(u2))
    rest = sig._then(first.target)
    left_steps = [(1, first)] + rest
    start = Polynomial.from_monomial(src)
    left = RewritePath(start, left_steps, replay(start, left_steps))
    right = sig.path(src)
    return Boundary(2, src, left=left, right=right)


# ---------------------------------------------------------------------------
# reducedness

@dataclass
class Reducedness:
    left: bool
    right: bool
    left_witness: object = None
    right_witness: object = None


def check_reduced(system: System, bound: int) -> Reducedness:
    """Left: no rule source contains a redex other than its own root.
    Right: every rule target is a normal form.  Checked on ground instances
    of size at most ``bound``."""
    res = Reducedness(True, True)
    for g in system.instances(bound):
        if res.left:
            for r in system.redexes(g.lhs):
                if r.path or r.start != 0 or r.end != len(g.lhs):
                    res.left, res.left_witness = False, g
                    break
        if res.right and not system.is_normal_form(g.rhs):
            res.right, res.right_witness = False, g
        if not (res.left or res.right):
            break
    return res


__all__ = ["REDUCED", "ESSENTIAL_GEN", "ESSENTIAL_BRACKET", "NON_ESSENTIAL", "ResolutionError",
           "UnsupportedDimension", "SquierTuple", "essential_kind", "squier_generators",
           "Contraction", "sigma_path", "replay", "Boundary", "boundary", "Reducedness",
           "check_reduced", "phi_member", "PHI"]
