"""Termination certificates: derivations into ordered weight modules and
occurrence-count measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .patterns import Pattern, compile_pattern, match_from
from .rewrite import GroundRule, System, iter_nodes
from .syntax import parse_ast
from .terms import Bracket, Context, Monomial, op_degree, plug

Weight = tuple


def _add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class DerivationSpec:
    """A derivation ``d`` with values in integer tuples compared lexicographically.

    ``d(ab) = d(a)·b + a·d(b)``, ``d(1) = 0`` and ``d(op(a)) = op·d(a)``.
    """

    name: str
    arity: int
    gen_weight: Callable[[str], Weight]
    left: Callable[[Monomial, Weight], Weight]
    right: Callable[[Weight, Monomial], Weight]
    op_action: Callable[[str, Weight], Weight]
    description: str = ""

    @property
    def zero(self) -> Weight:
        return (0,) * self.arity

    def value(self, m: Monomial) -> Weight:
        if not m:
            return self.zero
        total = self.zero
        atoms = tuple(m)
        for i, a in enumerate(atoms):
            if a.__class__ is Bracket:
                w = self.op_action(a[0], self.value(a[1]))
            else:
                w = self.gen_weight(a)
            if i:
                w = self.left(Monomial(atoms[:i]), w)
            if i + 1 < len(atoms):
                w = self.right(w, Monomial(atoms[i + 1:]))
            total = _add(total, w)
        return total

    def greater(self, a: Weight, b: Weight) -> bool:
        return a > b

    def key(self, m: Monomial):
        return self.value(m)


def _trivial_left(u, n):
    return n


def _trivial_right(n, u):
    return n


def diff_weight() -> DerivationSpec:
    """Weights in Z^3 certifying the differential system."""
    def op(o, m):
        return (max(m[0] + m[1] + m[2] - 1, 0), m[1] + 1, m[2])
    return DerivationSpec("diff-weight", 3, lambda x: (0, 0, 1), _trivial_left,
                          _trivial_right, op,
                          "d(x)=(0,0,1); D(m)=(max(m1+m2+m3-1,0), m2+1, m3); trivial actions")


def _rb_action(u, n):
    return (n[0], n[1] + op_degree(u) * n[0])


def rb_weight(ops: Iterable[str] = ("P",)) -> DerivationSpec:
    """Weights in Z^2 for Rota-Baxter type operators (every listed op acts alike)."""
    ops = tuple(ops)

    def op(o, m):
        return (m[0] + 1, m[1] + m[0] + 1)
    name = "rb-weight" if ops == ("P",) else "pd-weight"
    return DerivationSpec(name, 2, lambda x: (0, 0), _rb_action,
                          lambda n, u: _rb_action(u, n), op,
                          "d(x)=(0,0); v.(m1,m2)=(m1, m2+deg(v) m1); op(m)=(m1+1, m2+m1+1)")


def op_count() -> DerivationSpec:
    return DerivationSpec("op-count", 1, lambda x: (0,), _trivial_left, _trivial_right,
                          lambda o, m: (m[0] + 1,), "number of operators")


@dataclass
class CountMeasureSpec:
    """Number of occurrences of a pattern as a plugged factor."""

    name: str
    pattern: Pattern
    text: str = ""

    def value(self, m: Monomial) -> tuple:
        n = 0
        for _, node in iter_nodes(m):
            for i in range(len(node)):
                ends = {e for e, _ in match_from(self.pattern, node, i, {}) if e > i}
                n += len(ends)
        return (n,)

    def key(self, m: Monomial):
        return self.value(m)

    def greater(self, a, b) -> bool:
        return a > b


def count_measure(text: str, gens, ops, variables=None) -> CountMeasureSpec:
    """``text`` is a monomial pattern; single lowercase letters not in the
    generators act as metavariables unless ``variables`` is given."""
    ast = parse_ast(text, ops)
    if variables is None:
        variables = [c for c in "uvwst" if c not in gens]
    pat = compile_pattern(ast, gens, {v: 0 for v in variables})
    return CountMeasureSpec(f"count:{text}", pat, text)


NAMED = ("diff-weight", "rb-weight", "pd-weight", "op-count")


def named_measure(name: str, system: System | None = None):
    if name == "diff-weight":
        return diff_weight()
    if name == "rb-weight":
        return rb_weight(("P",))
    if name == "pd-weight":
        return rb_weight(("P", "D"))
    if name == "op-count":
        return op_count()
    if name.startswith("count:"):
        if system is None:
            raise ValueError("count measures need a system for parsing")
        return count_measure(name[6:], system.gens, system.ops)
    raise ValueError(f"unknown measure {name!r}; expected one of {', '.join(NAMED)} or count:PATTERN")


# ---------------------------------------------------------------------------
# checks

@dataclass
class TerminationReport:
    passed: bool
    bound: int
    measure: str
    checked: int = 0
    counterexample: dict | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {"passed": self.passed, "bound": self.bound, "measure": self.measure,
                "instances_checked": self.checked, "counterexample": self.counterexample,
                "note": self.note}


def check_termination(system: System, spec, bound: int) -> TerminationReport:
    """Check ``measure(lhs) > measure(v)`` for every ``v`` in the support of the
    target, over all ground instances with source size at most ``bound``."""
    n = 0
    for g in system.instances(bound):
        n += 1
        dl = spec.value(g.lhs)
        for v in g.rhs:
            dv = spec.value(v)
            if not spec.greater(dl, dv):
                return TerminationReport(False, bound, spec.name, n, {
                    "rule": g.label(), "source": str(g.lhs), "source_value": list(dl),
                    "term": str(v), "term_value": list(dv)})
    return TerminationReport(True, bound, spec.name, n,
                             note=f"bounded evidence: instances with source size <= {bound}")


def check_monotone(spec: DerivationSpec, gens, ops, bound: int = 3) -> list[dict]:
    """Sample monotonicity of the actions: ``n > n'`` implies
    ``u·n·v > u·n'·v`` and ``op(n) > op(n')``."""
    from .enumerate import MonomialSpace
    space = MonomialSpace(gens, ops)
    monos = list(space.up_to(bound))
    values = sorted({spec.value(m) for m in monos})
    bad = []
    for i, a in enumerate(values):
        for b in values[:i]:
            for u in monos[:40]:
                for v in monos[:40]:
                    x = spec.right(spec.left(u, a), v)
                    y = spec.right(spec.left(u, b), v)
                    if not x > y:
                        bad.append({"n": a, "n'": b, "u": str(u), "v": str(v)})
                        return bad
            for o in ops:
                if not spec.op_action(o, a) > spec.op_action(o, b):
                    bad.append({"n": a, "n'": b, "op": o})
                    return bad
    return bad


def check_context_compatible(system: System, spec, bound: int, ctx_bound: int = 4,
                             limit: int | None = None) -> dict | None:
    """Search for ``d(q|v) <= d(q|v')`` where ``v -> ... + v' + ...`` is a rule
    instance and ``q`` a context; returns the first counterexample."""
    from .enumerate import contexts_up_to
    ctxs = list(contexts_up_to(system.gens, system.ops, ctx_bound))
    for k, g in enumerate(system.instances(bound)):
        if limit is not None and k >= limit:
            break
        for v in g.rhs:
            for q in ctxs:
                a = spec.value(plug(q, g.lhs))
                b = spec.value(plug(q, v))
                if not spec.greater(a, b):
                    return {"rule": g.label(), "context": str(q), "source": str(plug(q, g.lhs)),
                            "source_value": list(a), "term": str(plug(q, v)),
                            "term_value": list(b)}
    return None
