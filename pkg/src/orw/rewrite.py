"""Rule schemas, the rewriting engine and normal forms."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .automaton import Alphabet, flatten
from .patterns import Pattern, PBracket, PVar, Template, match_from
from .terms import (HOLE, Bracket, Context, Monomial, Polynomial, TermError, _replace,
                    scalar, size)

DEFAULT_FUEL = 10 ** 6

CONSTRAINTS = ("ne", "nf", "phi", "dtheta", "notbracket", "not-OP")


class RewriteError(ValueError):
    pass


class _TooMany(Exception):
    pass


class NonTermination(RewriteError):
    """Fuel ran out or a rewriting cycle was detected."""

    def __init__(self, message: str, term=None):
        super().__init__(message)
        self.term = term


# ---------------------------------------------------------------------------
# rules

def is_chain_atom(m: Monomial, gens=None) -> bool:
    """``m`` is a single atom ``op^k(x)`` with ``x`` a generator."""
    if len(m) != 1:
        return False
    a = m[0]
    while a.__class__ is Bracket:
        if len(a[1]) != 1:
            return False
        a = a[1][0]
    return a is not HOLE and (gens is None or a in gens)


class Schema:
    """A parametrized rule ``lhs -> rhs`` with constrained metavariables."""

    variadic = False

    def __init__(self, name: str, lhs: Pattern, rhs: Template,
                 constraints: dict[str, frozenset] | None = None, source: str = ""):
        self.name = name
        self.lhs = lhs
        self.rhs_template = rhs
        self.constraints = {v: frozenset(constraints.get(v, ())) if constraints else frozenset()
                            for v in lhs.vars}
        self.source = source
        self.index = -1
        self.head = lhs.head
        missing = rhs.variables() - set(lhs.vars)
        if missing:
            raise RewriteError(f"rule {name}: variables {sorted(missing)} do not occur in the source")
        if not lhs.atoms:
            raise RewriteError(f"rule {name}: the source must not be 1")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.lhs.vars

    def match_at(self, atoms: tuple, i: int, check) -> Iterator[tuple[int, dict]]:
        return match_from(self.lhs, atoms, i, {}, check)

    def lhs_of(self, binding: dict) -> Monomial:
        from .patterns import _inst_mono
        return _inst_mono(self.lhs.atoms, binding)

    def rhs_of(self, binding: dict, system: "System") -> Polynomial:
        return self.rhs_template.instantiate(binding, system.nf_marker)

    def binding_key(self, binding: dict) -> tuple:
        return tuple(flatten(binding[v]) for v in self.vars)

    def __repr__(self) -> str:
        return f"Schema({self.name})"


class LeibnizSchema(Schema):
    """``op(u1 ... un) -> sum over nonempty S of lambda^(|S|-1) * D_S``, where
    every ``ui`` is a chain atom and ``n >= 2``."""

    variadic = True

    def __init__(self, name: str, op: str, var: str = "u", source: str = ""):
        self.name = name
        self.op = op
        self.var = var
        self.constraints = {var: frozenset({"ne", "dtheta"})}
        self.source = source
        self.index = -1
        self.head = ("op", op)
        self.lhs = Pattern([PBracket(op, Pattern([PVar(var, 2)]))])
        self.rhs_template = None

    @property
    def vars(self):
        return (self.var,)

    def match_at(self, atoms, i, check):
        a = atoms[i]
        if a.__class__ is Bracket and a[0] == self.op and len(a[1]) >= 2:
            arg = a[1]
            if all(is_chain_atom(Monomial((b,))) for b in arg):
                yield i + 1, {self.var: arg}

    def lhs_of(self, binding):
        return Monomial((Bracket(self.op, binding[self.var]),))

    def rhs_of(self, binding, system):
        atoms = binding[self.var]
        n = len(atoms)
        lam = system.lam
        out: dict = {}
        for mask in range(1, 1 << n):
            k = bin(mask).count("1")
            coef = scalar(lam ** (k - 1))
            if not coef:
                continue
            m = Monomial(Bracket(self.op, Monomial((a,))) if mask >> j & 1 else a
                         for j, a in enumerate(atoms))
            out[m] = out.get(m, 0) + coef
        return Polynomial({m: c for m, c in out.items() if c})


class GroundRule:
    """A rule between a fixed monomial and a polynomial."""

    __slots__ = ("lhs", "_rhs", "name", "binding", "schema", "index", "head", "_system")

    def __init__(self, lhs: Monomial, rhs: Polynomial | None, name: str = "",
                 binding: tuple = (), schema: Schema | None = None, system=None):
        self.lhs = Monomial(lhs)
        self._rhs = rhs
        self.name = name
        self.binding = binding
        self.schema = schema
        self.index = schema.index if schema is not None else -1
        self.head = None
        self._system = system
        if not self.lhs:
            raise RewriteError("a rule source must not be 1")

    @property
    def rhs(self) -> Polynomial:
        if self._rhs is None:
            self._rhs = self.schema.rhs_of(dict(self.binding), self._system)
        return self._rhs

    def label(self) -> str:
        if not self.binding:
            return self.name
        return f"{self.name}[{', '.join(str(v) for _, v in self.binding)}]"

    def __repr__(self) -> str:
        return f"GroundRule({self.label()}: {self.lhs} -> {self.rhs})"


# ---------------------------------------------------------------------------
# redexes, steps and paths

@dataclass(frozen=True)
class Redex:
    rule: object            # Schema or GroundRule
    path: tuple             # bracket indices from the root to the node
    start: int
    end: int
    binding: tuple          # ((var, Monomial), ...)

    @property
    def rule_name(self) -> str:
        return self.rule.name

    @property
    def rule_index(self) -> int:
        return self.rule.index


@dataclass(frozen=True)
class RewriteStep:
    rule_name: str
    rule_index: int
    binding: tuple
    context: Context
    lhs: Monomial
    rhs: Polynomial

    @property
    def source(self) -> Monomial:
        return self.context.plug(self.lhs)

    @property
    def target(self) -> Polynomial:
        return self.context.plug(self.rhs)

    def label(self) -> str:
        if self.binding:
            args = ", ".join(str(v) for _, v in self.binding)
            name = f"{self.rule_name}[{args}]"
        else:
            name = self.rule_name
        if self.context.is_trivial():
            return name
        return str(self.context).replace("_", "{" + name + "}", 1)

    def to_dict(self) -> dict:
        return {"rule": self.rule_name,
                "binding": {k: str(v) for k, v in self.binding},
                "context": str(self.context),
                "source": str(self.source),
                "target": str(self.target)}


@dataclass
class RewritePath:
    start: Polynomial
    steps: list = field(default_factory=list)   # of (coefficient, RewriteStep)
    end: Polynomial | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        return {"start": str(self.start), "end": str(self.end),
                "steps": [dict(s.to_dict(), coefficient=str(c)) for c, s in self.steps]}


# ---------------------------------------------------------------------------
# node traversal helpers

def iter_nodes(m: Monomial, path: tuple = ()):
    """Yield ``(path, atoms)`` for the root and every bracket argument, outer
    nodes first."""
    yield path, m
    for i, a in enumerate(m):
        if a.__class__ is Bracket:
            yield from iter_nodes(a[1], path + (i,))


def node_at(m: Monomial, path: tuple) -> Monomial:
    for i in path:
        m = m[i][1]
    return m


def flat_offsets(m: Monomial) -> dict:
    """Map each node path to the flat positions of its atoms (plus the end)."""
    out: dict = {}

    def walk(node, path, pos):
        offs = []
        for i, a in enumerate(node):
            offs.append(pos)
            if a.__class__ is Bracket:
                pos = walk(a[1], path + (i,), pos + 1) + 1
            else:
                pos += 1
        offs.append(pos)
        out[path] = offs
        return pos

    walk(m, (), 0)
    return out


def replace_factor(m: Monomial, path: tuple, start: int, end: int, p: Polynomial) -> Polynomial:
    t: dict = {}
    for r, c in p.terms.items():
        nm = _replace(m, path, start, end, tuple(r))
        v = t.get(nm, 0) + c
        if v:
            t[nm] = v
        else:
            t.pop(nm, None)
    return Polynomial._raw(t)


# ---------------------------------------------------------------------------
# systems

class System:
    """An operated rewriting system: generators, operators, lambda, rules."""

    def __init__(self, gens: Sequence[str], ops: Sequence[str], lam=1,
                 schemas: Iterable[Schema] = (), ground: Iterable[GroundRule] = (),
                 name: str = "system", phi: Callable | None = None,
                 phi_name: str | None = None, companion: "System | None" = None,
                 fuel: int = DEFAULT_FUEL):
        self.gens = tuple(gens)
        self.ops = tuple(ops)
        if len(set(self.ops)) != len(self.ops):
            raise RewriteError("duplicate operator names")
        if set(self.gens) & set(self.ops):
            raise RewriteError("generators and operators must have distinct names")
        self.lam = Fraction(lam)
        self.name = name
        self.phi = phi
        self.phi_name = phi_name
        self.companion = companion
        self.fuel = fuel
        self.alphabet = Alphabet(self.gens, self.ops)
        self.schemas: list[Schema] = []
        self.ground: list[GroundRule] = []
        self._by_head: dict = {}
        self._free: list = []
        self._ground_index: dict = {}
        self._ground_breadths: list[int] = []
        self.measure = None
        self.pda_name = None
        self.families: list = []
        self.directives: dict = {}
        for s in schemas:
            self.add_schema(s)
        for g in ground:
            self.add_ground(g)
        self.clear_cache()

    # -- construction
    @property
    def rules(self) -> list:
        return list(self.schemas) + list(self.ground)

    def add_schema(self, s: Schema) -> None:
        s.index = len(self.schemas) + len(self.ground)
        self.schemas.append(s)
        if s.head is None:
            self._free.append(s)
        else:
            self._by_head.setdefault(s.head, []).append(s)
        self.clear_cache()

    def add_ground(self, g: GroundRule) -> None:
        if g.lhs in g.rhs:
            raise RewriteError(f"rule {g.label()}: the source occurs in the target")
        g.index = len(self.schemas) + len(self.ground)
        g._system = self
        self.ground.append(g)
        key = tuple(g.lhs)
        self._ground_index.setdefault(key, []).append(g)
        if len(key) not in self._ground_breadths:
            self._ground_breadths.append(len(key))
            self._ground_breadths.sort()
        self.clear_cache()

    def clear_cache(self) -> None:
        self._nf_memo: dict = {}
        self._red_memo: dict = {}
        self._check_cache: dict = {}
        self._redex_memo: dict = {}
        self._rhs_memo: dict = {}
        self._nfs_memo: dict = {}

    def key(self, m: Monomial) -> tuple:
        """Presentation order: size, then the flat word in alphabet order."""
        return self.alphabet.key(m)

    def fmt(self, p) -> str:
        if isinstance(p, Polynomial):
            return p.to_str(self.key)
        return str(p)

    # -- constraints
    def satisfies(self, codes: frozenset, v: Monomial) -> bool:
        for c in codes:
            if c == "ne":
                if not v:
                    return False
            elif c == "nf":
                if self.phi is not None:
                    if not self.phi(v):
                        return False
                elif not self.is_normal_form(v):
                    return False
            elif c == "phi":
                if self.phi is not None:
                    if not self.phi(v):
                        return False
                elif not self.is_normal_form(v):
                    return False
            elif c == "dtheta":
                if not is_chain_atom(v):
                    return False
            elif c == "notbracket":
                if len(v) == 1 and v[0].__class__ is Bracket:
                    return False
            elif c.startswith("not-"):
                if len(v) == 1 and v[0].__class__ is Bracket and v[0][0] == c[4:]:
                    return False
            else:
                raise RewriteError(f"unknown constraint {c!r}")
        return True

    def _checker(self, rule: Schema):
        cached = self._check_cache.get(rule.index)
        if cached is not None:
            return cached
        cons = rule.constraints
        if not any(cons.values()):
            chk = None
        else:
            sat = self.satisfies

            def chk(name, v, cons=cons):
                codes = cons.get(name)
                return not codes or sat(codes, v)
        self._check_cache[rule.index] = chk or False
        return chk

    def nf_marker(self, p: Polynomial) -> Polynomial:
        target = self.companion if self.companion is not None else self
        return target.normal_form(p)

    # -- matching
    def redexes_in_node(self, atoms: tuple, path: tuple = (), first: bool = False) -> list[Redex]:
        out: list[Redex] = []
        n = len(atoms)
        by_head = self._by_head
        free = self._free
        gidx = self._ground_index
        for i in range(n):
            a = atoms[i]
            head = ("op", a[0]) if a.__class__ is Bracket else a
            cands = by_head.get(head)
            if cands or free:
                for s in (cands or ()) if not free else list(cands or ()) + free:
                    chk = self._check_cache.get(s.index)
                    if chk is None:
                        chk = self._checker(s)
                    for end, b in s.match_at(atoms, i, chk or None):
                        if end == i:
                            continue
                        out.append(Redex(s, path, i, end,
                                         tuple((v, b[v]) for v in s.vars)))
                        if first:
                            return out
            if gidx:
                for w in self._ground_breadths:
                    if i + w > n:
                        break
                    rs = gidx.get(atoms[i:i + w])
                    if rs:
                        for g in rs:
                            out.append(Redex(g, path, i, i + w, ()))
                            if first:
                                return out
        return out

    def redexes(self, m: Monomial) -> list[Redex]:
        """Every redex occurrence in ``m`` (all nodes, all rules, all
        bindings), outer nodes first."""
        memo = self._redex_memo
        hit = memo.get(m)
        if hit is not None:
            return hit
        out = self.redexes_in_node(m, ())
        for i, a in enumerate(m):
            if a.__class__ is Bracket and a[1]:
                for r in self.redexes(a[1]):
                    out.append(Redex(r.rule, (i,) + r.path, r.start, r.end, r.binding))
        if len(memo) > 2_000_000:
            memo.clear()
        memo[m] = out
        return out

    def first_redex(self, m: Monomial) -> Redex | None:
        """Some redex of ``m``, innermost nodes first; ``None`` if irreducible."""
        return _first_redex(self, m, ())

    def is_reducible(self, m: Monomial) -> bool:
        r = self._red_memo.get(m)
        if r is None:
            r = _first_redex(self, m, ()) is not None
            self._red_memo[m] = r
        return r

    def is_normal_form(self, m) -> bool:
        if isinstance(m, Polynomial):
            return not any(self.is_reducible(u) for u in m)
        return not self.is_reducible(m)

    def rule_of(self, r: Redex):
        return r.rule

    def redex_lhs(self, m: Monomial, r: Redex) -> Monomial:
        return Monomial(node_at(m, r.path)[r.start:r.end])

    def redex_rhs(self, r: Redex) -> Polynomial:
        rule = r.rule
        if rule.__class__ is GroundRule:
            return rule.rhs
        key = (rule.index, r.binding)
        memo = self._rhs_memo
        hit = memo.get(key)
        if hit is None:
            if len(memo) > 1_000_000:
                memo.clear()
            hit = memo[key] = rule.rhs_of(dict(r.binding), self)
        return hit

    def apply_redex(self, m: Monomial, r: Redex) -> Polynomial:
        return replace_factor(m, r.path, r.start, r.end, self.redex_rhs(r))

    def step_of(self, m: Monomial, r: Redex) -> RewriteStep:
        rule = r.rule
        ctx = Context.at(m, r.path, r.start, r.end)
        binding = r.binding if not isinstance(rule, GroundRule) else rule.binding
        return RewriteStep(rule.name, rule.index, binding, ctx,
                           self.redex_lhs(m, r), self.redex_rhs(r))

    def steps(self, m: Monomial) -> list[RewriteStep]:
        return [self.step_of(m, r) for r in self.redexes(m)]

    def match_rule(self, rule, m: Monomial) -> list[tuple[Context, dict]]:
        """All occurrences of ``rule`` in ``m`` as ``(context, binding)``,
        ordered leftmost-innermost by flat position."""
        found = []
        offs = flat_offsets(m)
        for path, node in iter_nodes(m):
            for i in range(len(node)):
                if isinstance(rule, GroundRule):
                    k = len(rule.lhs)
                    if tuple(node[i:i + k]) == tuple(rule.lhs):
                        found.append((path, i, i + k, {}))
                    continue
                chk = self._checker(rule) if rule in self.schemas else _standalone_checker(self, rule)
                for end, b in rule.match_at(node, i, chk or None):
                    if end > i:
                        found.append((path, i, end, b))
        spans = [(offs[p][s], offs[p][e]) for p, s, e, _ in found]

        def order(k):
            p, s, e, b = found[k]
            lo, hi = spans[k]
            inner = -len(p)
            bkey = tuple(flatten(b[v]) for v in sorted(b))
            return (lo, inner, hi, bkey)

        idx = sorted(range(len(found)), key=order)
        return [(Context.at(m, found[k][0], found[k][1], found[k][2]), found[k][3]) for k in idx]

    # -- normal forms
    def normal_form(self, p, fuel: int | None = None) -> Polynomial:
        """Normal form by memoized reduction (any strategy; unique when convergent)."""
        if isinstance(p, Monomial):
            return self._nf_mono(p, fuel)
        if not isinstance(p, Polynomial):
            p = Polynomial.from_monomial(Monomial(p))
        acc: dict = {}
        for m, c in p.terms.items():
            for u, v in self._nf_mono(m, fuel).terms.items():
                w = acc.get(u, 0) + c * v
                if w:
                    acc[u] = w
                else:
                    acc.pop(u, None)
        return Polynomial._raw(acc)

    def _nf_mono(self, m: Monomial, fuel: int | None = None) -> Polynomial:
        memo = self._nf_memo
        hit = memo.get(m)
        if hit is not None:
            return hit
        budget = self.fuel if fuel is None else fuel
        expansion: dict = {}
        active: set = set()
        stack = [m]
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            exp = expansion.get(u)
            if exp is None:
                r = _first_redex(self, u, ())
                if r is None:
                    memo[u] = Polynomial._raw({u: 1})
                    self._red_memo[u] = False
                    stack.pop()
                    continue
                self._red_memo[u] = True
                budget -= 1
                if budget < 0:
                    raise NonTermination(f"fuel exhausted while normalizing {u}", u)
                exp = self.apply_redex(u, r)
                expansion[u] = exp
                active.add(u)
            pending = [v for v in exp.terms if v not in memo]
            if pending:
                for v in pending:
                    if v in active:
                        raise NonTermination(f"rewriting cycle through {v}", v)
                    stack.append(v)
                continue
            acc: dict = {}
            for v, c in exp.terms.items():
                for w, d in memo[v].terms.items():
                    x = acc.get(w, 0) + c * d
                    if x:
                        acc[w] = x
                    else:
                        acc.pop(w, None)
            memo[u] = Polynomial._raw(acc)
            active.discard(u)
            del expansion[u]
            stack.pop()
        return memo[m]

    def normal_forms(self, p, cap: int = 256) -> set[Polynomial] | None:
        """Every normal form reachable from ``p`` when each support monomial
        is reduced independently along every possible path; ``None`` when
        more than ``cap`` alternatives arise.  For convergent systems this is
        the singleton of :meth:`normal_form`."""
        memo = self._nfs_memo
        active: set = set()

        def mono(m):
            hit = memo.get(m)
            if hit is not None:
                return hit
            if m in active:
                raise NonTermination(f"rewriting cycle through {m}", m)
            rs = self.redexes(m)
            if not rs:
                res = frozenset((Polynomial._raw({m: 1}),))
            else:
                active.add(m)
                acc: set = set()
                for r in rs:
                    acc |= poly(self.apply_redex(m, r))
                    if len(acc) > cap:
                        raise _TooMany
                active.discard(m)
                res = frozenset(acc)
            memo[m] = res
            return res

        def poly(q):
            acc = {Polynomial.zero()}
            for m, c in q.terms.items():
                ns = mono(m)
                acc = {a + n.scale(c) for a in acc for n in ns}
                if len(acc) > cap:
                    raise _TooMany
            return acc

        try:
            return poly(_poly(p))
        except _TooMany:
            return None

    def select(self, p: Polynomial, strategy: str = "deterministic",
               rng: random.Random | None = None):
        """Pick ``(monomial, redex)`` in ``p`` or ``None``."""
        if strategy == "random":
            reducible = [m for m in p if self.is_reducible(m)]
            if not reducible:
                return None
            m = rng.choice(sorted(reducible, key=self.key))
            return m, rng.choice(self.redexes(m))
        best = None
        for m in p:
            if self.is_reducible(m):
                k = self.key(m)
                if best is None or k > best[0]:
                    best = (k, m)
        if best is None:
            return None
        m = best[1]
        return m, self.choose_redex(m, self.redexes(m))

    def choose_redex(self, m: Monomial, rs: list[Redex]) -> Redex:
        offs = flat_offsets(m)
        spans = [(offs[r.path][r.start], offs[r.path][r.end]) for r in rs]
        inner = []
        for k, (lo, hi) in enumerate(spans):
            if not any(j != k and lo <= lo2 and hi2 <= hi and (lo2, hi2) != (lo, hi)
                       for j, (lo2, hi2) in enumerate(spans)):
                inner.append(k)

        def order(k):
            r = rs[k]
            bkey = tuple(self.alphabet.word_key(flatten(v)) for _, v in r.binding)
            return (spans[k][0], spans[k][1], r.rule.index, bkey)

        return rs[min(inner, key=order)]

    def rewrite_once(self, p, strategy: str = "deterministic", rng=None):
        """The selected step as ``(coefficient, step, new polynomial)``, or ``None``."""
        p = _poly(p)
        sel = self.select(p, strategy, rng)
        if sel is None:
            return None
        m, r = sel
        c = p.coefficient(m)
        step = self.step_of(m, r)
        new = p + (self.apply_redex(m, r) - Polynomial.from_monomial(m)).scale(c)
        return c, step, new

    def normalize(self, p, strategy: str = "deterministic", seed: int | None = None,
                  fuel: int | None = None, record: bool = True) -> tuple[Polynomial, RewritePath]:
        """Normal form and the rewriting path that reaches it."""
        p = _poly(p)
        path = RewritePath(p)
        rng = random.Random(seed)
        budget = self.fuel if fuel is None else fuel
        cur = p
        while True:
            sel = self.select(cur, strategy, rng)
            if sel is None:
                break
            budget -= 1
            if budget < 0:
                raise NonTermination(f"fuel exhausted while normalizing {self.fmt(p)}", p)
            m, r = sel
            c = cur.coefficient(m)
            if record:
                path.steps.append((c, self.step_of(m, r)))
            cur = cur + (self.apply_redex(m, r) - Polynomial.from_monomial(m)).scale(c)
        path.end = cur
        return cur, path

    # -- ground instances
    def instances(self, bound: int, space=None) -> Iterator[GroundRule]:
        """Ground instances of every rule with source size at most ``bound``."""
        from .enumerate import MonomialSpace
        space = space or MonomialSpace(self.gens, self.ops)
        for s in self.schemas:
            yield from schema_instances(self, s, bound, space)
        for g in self.ground:
            if size(g.lhs) <= bound:
                yield g

    def describe(self) -> str:
        lines = [f"ops {' '.join(self.ops)}", f"gens {' '.join(self.gens)}",
                 f"lambda {self.lam}"]
        for s in self.schemas:
            lines.append(s.source or f"rule {s.name}")
        for g in self.ground:
            lines.append(f"rule {g.name}: {g.lhs} -> {self.fmt(g.rhs)}")
        return "\n".join(lines)


def _standalone_checker(system: System, rule: Schema):
    cons = rule.constraints
    if not any(cons.values()):
        return None

    def chk(name, v):
        codes = cons.get(name)
        return not codes or system.satisfies(codes, v)
    return chk


def _poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    return Polynomial.from_monomial(Monomial(p))


def _first_redex(system: System, m: Monomial, path: tuple) -> Redex | None:
    for i, a in enumerate(m):
        if a.__class__ is Bracket and a[1]:
            r = _first_redex(system, a[1], path + (i,))
            if r is not None:
                return r
    rs = system.redexes_in_node(m, path, first=True)
    return rs[0] if rs else None


# ---------------------------------------------------------------------------
# instantiation of schemas

def _fixed_size(pattern: Pattern) -> int:
    n = 0
    for a in pattern.atoms:
        if isinstance(a, PBracket):
            n += 1 + _fixed_size(a.inner)
        elif isinstance(a, str):
            n += 1
    return n


def schema_instances(system: System, s: Schema, bound: int, space) -> Iterator[GroundRule]:
    if isinstance(s, LeibnizSchema):
        yield from _leibniz_instances(system, s, bound, space)
        return
    fixed = _fixed_size(s.lhs)
    vs = list(s.vars)
    budget = bound - fixed
    if budget < 0:
        return
    if not vs:
        yield GroundRule(s.lhs.to_monomial(), None, s.name, (), s, system)
        return
    pools: dict = {}
    occurrences: list = []
    _var_occurrences(s.lhs.atoms, occurrences)
    linear = len(occurrences) == len(vs)

    def pool(v, k):
        key = (v, k)
        if key not in pools:
            codes = s.constraints.get(v, frozenset())
            pools[key] = [m for m in space.of_size(k) if system.satisfies(codes, m)]
        return pools[key]

    def rec(i, left, b):
        if i == len(vs):
            lhs = s.lhs_of(b)
            # for linear sources the size budget already bounds the source
            if linear or size(lhs) <= bound:
                yield GroundRule(lhs, None, s.name, tuple((v, b[v]) for v in vs), s, system)
            return
        for k in range(0, left + 1):
            for m in pool(vs[i], k):
                b2 = dict(b)
                b2[vs[i]] = m
                yield from rec(i + 1, left - k, b2)

    yield from rec(0, budget, {})


def _var_occurrences(atoms, acc: list) -> None:
    for a in atoms:
        if isinstance(a, PVar):
            acc.append(a.name)
        elif isinstance(a, PBracket):
            _var_occurrences(a.inner.atoms, acc)


def _leibniz_instances(system, s: LeibnizSchema, bound, space):
    chains = [m for k in range(1, bound) for m in space.of_size(k) if is_chain_atom(m)]

    def rec(prefix, used):
        if len(prefix) >= 2:
            arg = Monomial(itertools.chain.from_iterable(prefix))
            yield GroundRule(Monomial((Bracket(s.op, arg),)), None, s.name,
                             ((s.var, arg),), s, system)
        for c in chains:
            if used + size(c) + 1 <= bound:
                yield from rec(prefix + [c], used + size(c))

    yield from rec([], 0)
