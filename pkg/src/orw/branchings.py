"""Local branchings, critical branchings, joinability, Gröbner-Shirshov
triviality and completion."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .automaton import flatten
from .enumerate import MonomialSpace
from .patterns import Pattern, compile_pattern, match_from
from .rewrite import (GroundRule, RewritePath, RewriteStep, System, flat_offsets,
                      node_at)
from .syntax import parse_ast
from .terms import Context, Monomial, Polynomial, size

INTERSECTION = "intersection"
INCLUSION = "inclusion"
COINCIDENT = "coincident"


class BranchingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# local branchings

def _span(step: RewriteStep) -> tuple[int, int]:
    path, i = step.context.hole_path()
    src = step.source
    offs = flat_offsets(src)[path]
    return offs[i], offs[i + len(step.lhs)]


def classify(step1: RewriteStep, step2: RewriteStep, ambient: Polynomial | None = None) -> str:
    """``aspherical``, ``additive``, ``Peiffer`` or ``overlapping``."""
    s1, s2 = step1.source, step2.source
    if ambient is not None:
        for s in (s1, s2):
            if s not in ambient:
                raise BranchingError(f"step source {s} is not in the support of the ambient polynomial")
    elif s1 != s2:
        raise BranchingError("steps on different monomials need an ambient polynomial")
    if step1 == step2:
        return "aspherical"
    if s1 != s2:
        return "additive"
    a, b = _span(step1), _span(step2)
    if a[1] <= b[0] or b[1] <= a[0]:
        return "Peiffer"
    return "overlapping"


# ---------------------------------------------------------------------------
# critical branchings

@dataclass
class CriticalBranching:
    kind: str
    source: Monomial
    left: RewriteStep
    right: RewriteStep
    overlap: tuple   # (u, v, w) for intersections, (context,) otherwise

    @property
    def left_rule(self) -> str:
        return self.left.rule_name

    @property
    def right_rule(self) -> str:
        return self.right.rule_name

    def sort_key(self, system: System) -> tuple:
        return (size(self.source), system.alphabet.word_key(flatten(self.source)),
                self.left.rule_index, self.right.rule_index,
                str(self.left.context), str(self.right.context),
                tuple(str(v) for _, v in self.left.binding),
                tuple(str(v) for _, v in self.right.binding))

    def overlap_dict(self) -> dict:
        if self.kind == INTERSECTION:
            u, v, w = self.overlap
            return {"u": str(u), "v": str(v), "w": str(w)}
        return {"context": str(self.overlap[0])}

    def to_dict(self) -> dict:
        return {"kind": self.kind, "source": str(self.source),
                "left_rule": self.left.label(), "right_rule": self.right.label(),
                "overlap": self.overlap_dict()}


def _step(system: System, rule: GroundRule, ctx: Context) -> RewriteStep:
    return RewriteStep(rule.name, rule.index, rule.binding, ctx, rule.lhs, rule.rhs)


def _redex_step(system: System, m: Monomial, r) -> RewriteStep:
    return system.step_of(m, r)


def _is_root(g: GroundRule, r) -> bool:
    if r.path or r.start != 0 or r.end != len(g.lhs):
        return False
    if isinstance(r.rule, GroundRule):
        return r.rule is g or (g.schema is None and r.rule.lhs == g.lhs and r.rule.name == g.name)
    return r.rule is g.schema and r.binding == g.binding


def _prefix_index(instances) -> dict:
    by_prefix: dict = {}
    for g in instances:
        atoms = tuple(g.lhs)
        for k in range(1, len(atoms)):
            rest = atoms[k:]
            by_prefix.setdefault(atoms[:k], []).append((size(rest), g, rest))
    for lst in by_prefix.values():
        lst.sort(key=lambda e: e[0])
    return by_prefix


def iter_critical_pairs(system: System, bound: int, instances: Sequence[GroundRule] | None = None,
                        new_rules: Sequence[GroundRule] | None = None
                        ) -> Iterator[CriticalBranching]:
    """Critical branchings with source size at most ``bound``, in enumeration
    order.  Intersections overlap a proper nonempty suffix of one rule source
    with a prefix of another; inclusions nest one rule source properly inside
    another; coincident pairs are distinct steps on one whole source.

    With ``new_rules`` (ground rules of ``system``), only branchings that
    involve at least one of them are produced."""
    if instances is None:
        instances = list(system.instances(bound))
    full_index = _prefix_index(instances)
    fresh = None
    if new_rules is not None:
        fresh = {id(g) for g in new_rules}
        fresh_index = _prefix_index(new_rules)
    for g in instances:
        g_new = fresh is None or id(g) in fresh
        by_prefix = full_index if g_new else fresh_index
        src = g.lhs
        root_ctx = Context.at(src, (), 0, len(src))
        rs = system.redexes(src)
        root = None
        for r in rs:
            if _is_root(g, r):
                root = r
                break
        for r in rs:
            if r is root:
                continue
            if not g_new and id(r.rule) not in fresh:
                continue
            if not r.path and r.start == 0 and r.end == len(src):
                # another step on the whole source; emit each unordered pair once
                other = system.step_of(src, r)
                r_new = fresh is None or id(r.rule) in fresh
                if g_new and not r_new:
                    continue
                if g_new and r_new and \
                        (r.rule.index, tuple(map(flatten, (v for _, v in r.binding)))) <= \
                        (g.index, tuple(map(flatten, (v for _, v in g.binding)))):
                    continue
                yield CriticalBranching(COINCIDENT, src, _step(system, g, root_ctx), other,
                                        (root_ctx,))
                continue
            inner = system.step_of(src, r)
            yield CriticalBranching(INCLUSION, src, _step(system, g, root_ctx), inner,
                                    (inner.context,))
        atoms = tuple(src)
        n = len(atoms)
        s1 = size(src)
        for i in range(1, n):
            v = atoms[i:]
            for ws, h, w in by_prefix.get(v, ()):
                if s1 + ws > bound:
                    break
                source = Monomial(atoms + w)
                u = Monomial(atoms[:i])
                lctx = Context.at(source, (), 0, n)
                rctx = Context.at(source, (), i, len(source))
                yield CriticalBranching(INTERSECTION, source, _step(system, g, lctx),
                                        _step(system, h, rctx), (u, Monomial(v), Monomial(w)))


def critical_pairs(system: System, bound: int) -> list[CriticalBranching]:
    """All critical branchings up to ``bound``, sorted by (source size,
    source flat word, rule indices)."""
    out = list(iter_critical_pairs(system, bound))
    out.sort(key=lambda cb: cb.sort_key(system))
    return out


def critical_n_branchings(system: System, n: int, bound: int) -> list[tuple]:
    """Tuples of ``n`` co-initial steps on sources of size at most ``bound``
    that pairwise form critical branchings (overlap without a common
    nontrivial context)."""
    if n < 2:
        raise BranchingError("n must be at least 2")
    out = []
    seen = set()
    for g in system.instances(bound):
        for m in _glued_sources(system, g, n, bound):
            if m in seen:
                continue
            seen.add(m)
            steps = system.steps(m)
            for combo in itertools.combinations(steps, n):
                if _pairwise_critical(m, combo) and _covers(m, combo):
                    out.append(combo)
    out.sort(key=lambda c: (size(c[0].source), system.alphabet.word_key(flatten(c[0].source)),
                            tuple(s.rule_index for s in c), tuple(str(s.context) for s in c)))
    return out


def _glued_sources(system, g, n, bound):
    """Candidate sources: ``g``'s source and its right extensions by chains of
    overlapping rule sources (enough for n-fold overlaps)."""
    yield g.lhs
    if n <= 1:
        return
    frontier = [g.lhs]
    for _ in range(n - 1):
        nxt = []
        for m in frontier:
            for h in system.instances(bound):
                hat = tuple(h.lhs)
                atoms = tuple(m)
                for i in range(1, len(atoms)):
                    if atoms[i:] == hat[:len(atoms) - i] and len(hat) > len(atoms) - i:
                        src = Monomial(atoms + hat[len(atoms) - i:])
                        if size(src) <= bound:
                            nxt.append(src)
                            yield src
        frontier = nxt


def _flat_span(m, step) -> tuple[int, int]:
    path, i = step.context.hole_path()
    offs = flat_offsets(m)[path]
    return offs[i], offs[i + len(step.lhs)]


def _pairwise_critical(m, combo) -> bool:
    spans = [_flat_span(m, s) for s in combo]
    for (a, b) in itertools.combinations(range(len(combo)), 2):
        (l1, h1), (l2, h2) = spans[a], spans[b]
        if h1 <= l2 or h2 <= l1:
            return False
        if combo[a] == combo[b]:
            return False
    return True


def _covers(m, combo) -> bool:
    """No common nontrivial context: the union of the redex spans is the whole
    flat word."""
    spans = [_flat_span(m, s) for s in combo]
    return min(l for l, _ in spans) == 0 and max(h for _, h in spans) == len(flatten(m))


# ---------------------------------------------------------------------------
# joinability and Gröbner-Shirshov triviality

@dataclass
class JoinResult:
    joinable: bool
    left_nf: Polynomial
    right_nf: Polynomial
    left_path: RewritePath | None = None
    right_path: RewritePath | None = None
    common: Polynomial | None = None
    exhaustive: bool = False    # decided by comparing all reachable normal forms


def have_common_reduct(system: System, a: Polynomial, b: Polynomial,
                       cap: int = 256) -> tuple[bool | None, Polynomial | None]:
    """Whether ``a`` and ``b`` reach a common normal form when every support
    monomial is reduced along some path (``None`` if one monomial has more
    than ``cap`` normal forms).

    Starting from the difference of the deterministic normal forms, the
    search cancels the largest remaining monomial with the alternative
    normal forms of one occurrence at a time; any solution must cover that
    monomial, so the search is exhaustive.
    """
    na, nb = system.normal_form(a), system.normal_form(b)
    items = []      # (occurrence sign * coefficient, non-default deltas)
    for p, sign in ((a, 1), (b, -1)):
        for m, c in p.items():
            alts = system.normal_forms(m, cap)
            if alts is None:
                return None, None
            if len(alts) == 1:
                continue
            base = system.normal_form(m)
            deltas = [x - base for x in alts if x != base]
            items.append((sign * c, sign, deltas))
    key = system.key

    def search(rem: Polynomial, used: frozenset):
        if not rem:
            return []
        top = max(rem, key=key)
        for i, (c, sign, deltas) in enumerate(items):
            if i in used:
                continue
            for d in deltas:
                if top in d:
                    got = search(rem + d.scale(c), used | {i})
                    if got is not None:
                        return got + [(i, d)]
        return None

    chosen = search(na - nb, frozenset())
    if chosen is None:
        return False, None
    common = na
    for i, d in chosen:
        c, sign, _ = items[i]
        if sign > 0:
            common = common + d.scale(c)
    return True, common


def joinable(system: System, cb: CriticalBranching, paths: bool = False,
             cap: int = 65536) -> JoinResult:
    """Normalize both targets.  When the normal forms differ (possible only
    in a non-confluent system), all reachable normal forms are compared."""
    lt, rt = cb.left.target, cb.right.target
    if paths:
        ln, lp = system.normalize(lt)
        rn, rp = system.normalize(rt)
        res = JoinResult(ln == rn, ln, rn, lp, rp)
    else:
        res = JoinResult(False, system.normal_form(lt), system.normal_form(rt))
        res.joinable = res.left_nf == res.right_nf
    if res.joinable:
        res.common = res.left_nf
        return res
    for c in [c for c in (256, 4096) if c < cap] + [cap]:
        ok, common = have_common_reduct(system, lt, rt, c)
        if ok is not None:
            break
    res.exhaustive = ok is not None
    if ok:
        res.joinable = True
        res.common = common
    return res


def order_key(system: System, measure=None) -> Callable:
    """Monomial comparison: the measure's value, then (size, flat word)."""
    if measure is None:
        if system.measure_name:
            from .measures import named_measure
            measure = named_measure(system.measure_name, system)
    if measure is None:
        return system.key
    return lambda m: (measure.key(m), system.key(m))


class _MaxRewritten:
    """Largest monomial rewritten while reducing a monomial to normal form
    (following the same memoized strategy as ``System.normal_form``)."""

    def __init__(self, system: System, key: Callable):
        self.system = system
        self.key = key
        self.memo: dict = {}

    def __call__(self, m: Monomial):
        memo = self.memo
        if m in memo:
            return memo[m]
        from .rewrite import _first_redex
        system = self.system
        stack = [m]
        exps: dict = {}
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            exp = exps.get(u)
            if exp is None:
                r = _first_redex(system, u, ())
                if r is None:
                    memo[u] = None
                    stack.pop()
                    continue
                exp = list(system.apply_redex(u, r).terms)
                exps[u] = exp
            pending = [v for v in exp if v not in memo]
            if pending:
                stack.extend(pending)
                continue
            best = self.key(u)
            for v in exp:
                k = memo[v]
                if k is not None and k > best:
                    best = k
            memo[u] = best
            del exps[u]
            stack.pop()
        return memo[m]


@dataclass
class GsResult:
    trivial: bool
    composition: Polynomial
    remainder: Polynomial
    witness: str = ""


def gs_trivial(system: System, cb: CriticalBranching, key: Callable | None = None,
               _cache: dict | None = None) -> GsResult:
    """Reduce the composition ``right target - left target``; trivial iff it
    reduces to 0 and every rewritten monomial is below the source."""
    key = key or order_key(system)
    comp = cb.right.target - cb.left.target
    rem = system.normal_form(comp)
    if rem:
        return GsResult(False, comp, rem, "composition does not reduce to 0")
    if _cache is not None:
        mx = _cache.get(id(key))
        if mx is None:
            mx = _cache[id(key)] = _MaxRewritten(system, key)
    else:
        mx = _MaxRewritten(system, key)
    r = key(cb.source)
    for m in comp:
        k = mx(m)
        if k is not None and not k < r:
            return GsResult(False, comp, rem, f"rewrites {m}, which is not below the source")
    return GsResult(True, comp, rem)


# ---------------------------------------------------------------------------
# family templates

@dataclass
class FamilyTemplate:
    group: str
    kind: str
    left: str
    right: str
    text: str
    pattern: Pattern

    def matches(self, cb: CriticalBranching) -> bool:
        kind = INCLUSION if cb.kind == COINCIDENT else cb.kind
        if kind != self.kind or cb.left_rule != self.left or cb.right_rule != self.right:
            return False
        if cb.kind == INTERSECTION:
            return any(True for _ in match_from(self.pattern, tuple(cb.source), 0, {}, None, True))
        holed = cb.right.context.mono
        return any(True for _ in match_from(self.pattern, tuple(holed), 0, {}, None, True,
                                             inner_source=tuple(cb.right.lhs)))


def compile_families(system: System, families=None) -> list[FamilyTemplate]:
    from .presets import TEMPLATE_VARS
    families = system.families if families is None else families
    out = []
    for group, kind, left, right, text in families:
        pat = compile_pattern(parse_ast(text, system.ops), system.gens, TEMPLATE_VARS)
        out.append(FamilyTemplate(group, kind, left, right, text, pat))
    return out


def classify_family(cb: CriticalBranching, templates: Sequence[FamilyTemplate]) -> str | None:
    """The first matching template as ``"group: pattern"``, or ``None``."""
    index = _template_index(templates)
    kind = INCLUSION if cb.kind == COINCIDENT else cb.kind
    for t in index.get((kind, cb.left_rule, cb.right_rule), ()):
        if t.matches(cb):
            return f"{t.group}: {t.text}"
    return None


_INDEX_CACHE: dict = {}


def _template_index(templates) -> dict:
    key = id(templates)
    hit = _INDEX_CACHE.get(key)
    if hit is not None and hit[0] is templates:
        return hit[1]
    index: dict = {}
    for t in templates:
        index.setdefault((t.kind, t.left, t.right), []).append(t)
    _INDEX_CACHE[key] = (templates, index)
    return index


# ---------------------------------------------------------------------------
# completion

@dataclass
class AddedRule:
    rule: GroundRule
    round: int
    origin: str           # source of the branching that produced it
    difference: str


@dataclass
class CompletionReport:
    added: list = field(default_factory=list)
    rounds: int = 0
    converged: bool = False
    residual: list = field(default_factory=list)
    sound: bool = True
    initial: list = field(default_factory=list)    # non-joinable pairs of the input

    def to_dict(self) -> dict:
        return {"rounds": self.rounds, "converged": self.converged, "sound": self.sound,
                "added": [{"round": a.round, "lhs": str(a.rule.lhs), "rhs": str(a.rule.rhs),
                           "origin": a.origin} for a in self.added],
                "residual": [cb.to_dict() for cb in self.residual]}


def clone_system(system: System, name: str | None = None) -> System:
    s = System(system.gens, system.ops, system.lam, name=name or system.name,
               phi=system.phi, phi_name=system.phi_name, companion=system.companion,
               fuel=system.fuel)
    for sc in system.schemas:
        s.add_schema(sc)
    for g in system.ground:
        s.add_ground(GroundRule(g.lhs, g.rhs, g.name, g.binding, None, s))
    s.measure_name = system.measure_name
    s.pda_name = system.pda_name
    s.families = system.families
    s.directives = dict(system.directives)
    return s


def complete(system: System, bound: int, max_rounds: int = 3, key: Callable | None = None,
             progress: Callable | None = None, incremental: bool = True
             ) -> tuple[System, CompletionReport]:
    """Add oriented ground rules for non-joinable critical branchings until
    every branching up to ``bound`` is joinable or ``max_rounds`` is reached.

    Adding rules never destroys a common reduct, so with ``incremental`` a
    round re-examines only the previous failures and the branchings that
    involve rules added in the previous round."""
    from .measures import check_termination, named_measure
    out = clone_system(system, system.name + "+completed")
    key = key or order_key(out)
    if system.measure_name:
        rep = check_termination(system, named_measure(system.measure_name, system), min(bound, 6))
        if not rep.passed:
            raise BranchingError(f"the orientation does not decrease on rule {rep.counterexample}")
    report = CompletionReport()
    counter = itertools.count(1)
    base = list(out.instances(bound))
    fresh: list = []
    bad: list = []

    def failures():
        if not incremental or not report.added:
            cands = iter_critical_pairs(out, bound, base + [a.rule for a in report.added
                                                            if size(a.rule.lhs) <= bound])
        else:
            insts = base + [a.rule for a in report.added if size(a.rule.lhs) <= bound]
            cands = itertools.chain(bad, iter_critical_pairs(out, bound, insts, new_rules=fresh))
        return [cb for cb in cands if not joinable(out, cb).joinable]

    for rnd in range(1, max_rounds + 1):
        report.rounds = rnd
        bad = failures()
        if rnd == 1:
            report.initial = list(bad)
        if progress:
            progress(rnd, len(bad))
        if not bad:
            report.converged = True
            report.rounds = rnd - 1
            break
        bad.sort(key=lambda cb: cb.sort_key(out))
        fresh = []
        for cb in bad:
            a = out.normal_form(cb.left.target) - out.normal_form(cb.right.target)
            if not a:
                continue
            mons = sorted(a, key=key)
            lead = mons[-1]
            if len(mons) > 1 and key(mons[-2]) == key(lead):
                raise BranchingError(f"cannot orient {out.fmt(a)}: leading terms tie")
            c = a.coefficient(lead)
            rhs = Polynomial.from_monomial(lead) - a.scale(Fraction(1) / c)
            g = GroundRule(lead, rhs, f"c{next(counter)}", (), None, out)
            out.add_ground(g)
            fresh.append(g)
            report.added.append(AddedRule(g, rnd, str(cb.source), str(a)))
    else:
        report.residual = failures()
        report.converged = not report.residual
    for a in report.added:
        if out.normal_form(Polynomial.from_monomial(a.rule.lhs) - a.rule.rhs):
            report.sound = False
    return out, report


def match_completion_targets(completed: System, report: CompletionReport,
                             reference: System | None = None,
                             names: Sequence[str] = ("delta1", "delta2")) -> list[tuple[str, str | None]]:
    """For every added rule, the name of a ``reference`` rule (by default
    the convergent differential Rota-Baxter system) whose source pattern it
    matches and whose target agrees with it after normalization in
    ``reference``; ``None`` when there is none."""
    if reference is None:
        from .presets import load_preset
        reference = load_preset("XPD", completed.gens, completed.lam)
    schemas = [sc for sc in reference.schemas if sc.name in names]
    out = []
    for a in report.added:
        found = None
        for sc in schemas:
            chk = reference._checker(sc)
            for _, b in match_from(sc.lhs, tuple(a.rule.lhs), 0, {}, chk or None, True):
                t = sc.rhs_of(b, reference)
                if not reference.normal_form(t - a.rule.rhs):
                    found = sc.name
                    break
            if found:
                break
        out.append((str(a.rule.lhs), found))
    return out
