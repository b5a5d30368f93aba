"""Pushdown automata, the bracket automaton and the flattening bijection.

Flat words are tuples of string symbols: a generator name stands for
itself, ``l:OP`` and ``r:OP`` are the left and right brackets of the
operator ``OP``.  The symbol ``_`` stands for the hole of a context.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .terms import HOLE, Bracket, Monomial

EPS = None
BOTTOM = "$"


class MalformedWord(ValueError):
    """A flat word that does not encode a monomial."""

    def __init__(self, position: int, reason: str):
        super().__init__(f"malformed word at position {position}: {reason}")
        self.position = position
        self.reason = reason


class PdaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# flat words

def left(op: str) -> str:
    return "l:" + op


def right(op: str) -> str:
    return "r:" + op


def is_left(sym: str) -> bool:
    return sym.startswith("l:")


def is_right(sym: str) -> bool:
    return sym.startswith("r:")


def _flat_into(m, out: list) -> None:
    for a in m:
        if a.__class__ is Bracket:
            op = a[0]
            out.append("l:" + op)
            _flat_into(a[1], out)
            out.append("r:" + op)
        elif a is HOLE:
            out.append("_")
        else:
            out.append(a)


def flatten(m) -> tuple[str, ...]:
    """Replace every bracket ``op(u)`` by ``l:op · flatten(u) · r:op``."""
    out: list[str] = []
    _flat_into(m, out)
    return tuple(out)


def unflatten(w: Sequence[str], gens: Iterable[str] | None = None) -> Monomial:
    """Inverse of :func:`flatten`; raises :class:`MalformedWord`."""
    allowed = None if gens is None else set(gens)
    stack: list[list] = [[]]
    ops: list[str] = []
    cur = stack[0]
    for pos, s in enumerate(w):
        head = s[:2]
        if head == "l:":
            cur = []
            stack.append(cur)
            ops.append(s[2:])
        elif head == "r:":
            op = s[2:]
            if not ops:
                raise MalformedWord(pos, f"unmatched closing bracket {s}")
            if ops[-1] != op:
                raise MalformedWord(pos, f"closing {s} does not match l:{ops[-1]}")
            inner = stack.pop()
            ops.pop()
            cur = stack[-1]
            cur.append(Bracket(op, Monomial(inner)))
        elif s == "_":
            cur.append(HOLE)
        else:
            if allowed is not None and s not in allowed:
                raise MalformedWord(pos, f"unknown generator {s!r}")
            cur.append(s)
    if ops:
        raise MalformedWord(len(w), f"unclosed bracket l:{ops[-1]}")
    return Monomial(stack[0])


def format_word(w: Sequence[str]) -> str:
    return " ".join(w)


def parse_word(text: str) -> tuple[str, ...]:
    """Whitespace separated symbols; ``eps`` or an empty string is the empty word."""
    parts = text.split()
    if parts == ["eps"]:
        return ()
    return tuple(parts)


def balanced_factors(w: Sequence[str]):
    """Yield ``(i, j)`` for every nonempty factor ``w[i:j]`` that is itself a
    well-bracketed word (assumes ``w`` is well-bracketed)."""
    n = len(w)
    for i in range(n):
        if w[i].startswith("r:"):
            continue
        d = 0
        for j in range(i, n):
            s = w[j]
            if s.startswith("l:"):
                d += 1
            elif s.startswith("r:"):
                d -= 1
                if d < 0:
                    break
            if d == 0:
                yield i, j + 1


class Alphabet:
    """The fixed total order on generators and bracket symbols."""

    def __init__(self, gens: Sequence[str], ops: Sequence[str]):
        self.gens = tuple(gens)
        self.ops = tuple(ops)
        symbols = list(self.gens) + [left(o) for o in self.ops] + [right(o) for o in self.ops]
        self.rank = {s: i for i, s in enumerate(symbols)}
        self.symbols = tuple(symbols)

    def word_key(self, w: Sequence[str]) -> tuple:
        r = self.rank
        return tuple(r.get(s, len(r)) for s in w)

    def key(self, m) -> tuple:
        """Presentation key ``(size, flat-lex)``."""
        w = flatten(m)
        nb = sum(1 for s in w if s.startswith("l:"))
        return (len(w) - nb, self.word_key(w))


# ---------------------------------------------------------------------------
# pushdown automata

@dataclass(frozen=True)
class Transition:
    src: str
    symbol: str | None          # None = epsilon
    pop: str | None             # None = epsilon
    dst: str
    push: tuple[str, ...] = ()  # pushed left to right; the last one ends on top

    def __str__(self) -> str:
        sym = "eps" if self.symbol is None else self.symbol
        pop = "eps" if self.pop is None else self.pop
        push = "".join(self.push) if self.push else "eps"
        if len(self.push) > 1:
            push = " ".join(self.push)
        return f"{self.src}, {sym}, {pop} -> {self.dst}, {push}"


@dataclass
class Pda:
    states: tuple[str, ...]
    input_alphabet: frozenset
    stack_alphabet: frozenset
    transitions: tuple[Transition, ...]
    initial: str
    accepting: frozenset
    name: str = "pda"
    _by_state: dict = field(default=None, repr=False, compare=False)
    _tables: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        states = set(self.states)
        if self.initial not in states:
            raise PdaError(f"initial state {self.initial} is undeclared")
        for q in self.accepting:
            if q not in states:
                raise PdaError(f"accepting state {q} is undeclared")
        for t in self.transitions:
            if t.src not in states or t.dst not in states:
                raise PdaError(f"transition {t} references an undeclared state")
            if t.symbol is not None and t.symbol not in self.input_alphabet:
                raise PdaError(f"transition {t} reads an undeclared symbol")
            for s in ((t.pop,) if t.pop is not None else ()) + t.push:
                if s not in self.stack_alphabet:
                    raise PdaError(f"transition {t} uses an undeclared stack symbol {s}")
        by: dict = {q: [] for q in self.states}
        for t in self.transitions:
            by[t.src].append(t)
        self._by_state = {q: tuple(ts) for q, ts in by.items()}

    def to_text(self) -> str:
        lines = [f"# {self.name}",
                 f"states {' '.join(self.states)}",
                 f"initial {self.initial}",
                 f"accepting {' '.join(sorted(self.accepting))}"]
        lines += [str(t) for t in self.transitions]
        return "\n".join(lines) + "\n"


def parse_pda(text: str, name: str = "pda") -> Pda:
    """Read the line format written by :meth:`Pda.to_text`.

    ``states``/``initial``/``accepting`` header lines are optional; states
    default to those mentioned by transitions, the initial state to the
    source of the first transition and the accepting states to ``q_acc``
    style names must then be given explicitly.
    """
    states: list[str] = []
    initial = None
    accepting: list[str] = []
    trans: list[Transition] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "states":
            states = rest.split()
            continue
        if head == "initial":
            initial = rest.strip()
            continue
        if head == "accepting":
            accepting = rest.split()
            continue
        if "->" not in line:
            raise PdaError(f"line {lineno}: expected 'state, input, pop -> state, push'")
        lhs, rhs = line.split("->", 1)
        a = [x.strip() for x in lhs.split(",")]
        b = [x.strip() for x in rhs.split(",")]
        if len(a) != 3 or len(b) != 2:
            raise PdaError(f"line {lineno}: expected 'state, input, pop -> state, push'")
        sym = None if a[1] == "eps" else a[1]
        pop = None if a[2] == "eps" else a[2]
        push: tuple[str, ...]
        if b[1] == "eps":
            push = ()
        elif " " in b[1]:
            push = tuple(b[1].split())
        else:
            push = (b[1],)
        trans.append(Transition(a[0], sym, pop, b[0], push))
    if not states:
        seen: list[str] = []
        for t in trans:
            for q in (t.src, t.dst):
                if q not in seen:
                    seen.append(q)
        states = seen
    if initial is None:
        if not trans:
            raise PdaError("empty automaton")
        initial = trans[0].src
    symbols = frozenset(t.symbol for t in trans if t.symbol is not None)
    stack = frozenset(s for t in trans for s in (((t.pop,) if t.pop else ()) + t.push))
    return Pda(tuple(states), symbols, stack, tuple(trans), initial,
               frozenset(accepting), name)


@dataclass(frozen=True)
class TraceStep:
    state: str
    symbol: str | None
    stack: tuple[str, ...]

    def stack_str(self) -> str:
        return "".join(self.stack) if self.stack else "eps"


@dataclass(frozen=True)
class RunResult:
    accepted: bool
    trace: tuple[TraceStep, ...]
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def stacks(self) -> list[str]:
        return [t.stack_str() for t in self.trace]


def pda_run(a: Pda, w: Sequence[str], *, with_trace: bool = True) -> RunResult:
    """Breadth-first search over configurations ``(state, position, stack)``."""
    for i, s in enumerate(w):
        if s not in a.input_alphabet:
            return RunResult(False, (), f"unknown symbol {s!r} at position {i}")
    n = len(w)
    limit = n + 2 * len(a.states) + 2
    by = a._by_state
    start = (a.initial, 0, ())
    parent: dict = {start: None}
    queue = deque([start])
    found = None
    while queue:
        cfg = queue.popleft()
        q, pos, stack = cfg
        if pos == n and q in a.accepting:
            found = cfg
            break
        sym = w[pos] if pos < n else None
        top = stack[-1] if stack else None
        for t in by[q]:
            if t.symbol is not None:
                if t.symbol != sym:
                    continue
                npos = pos + 1
            else:
                npos = pos
            if t.pop is not None:
                if t.pop != top:
                    continue
                nstack = stack[:-1]
            else:
                nstack = stack
            if t.push:
                nstack = nstack + t.push
                if len(nstack) > limit:
                    continue
            nxt = (t.dst, npos, nstack)
            if nxt not in parent:
                parent[nxt] = (cfg, t.symbol)
                queue.append(nxt)
    if found is None:
        reached = max((c[1] for c in parent), default=0)
        return RunResult(False, (), f"no accepting run; input consumed up to position {reached}")
    if not with_trace:
        return RunResult(True, ())
    steps = []
    cfg = found
    while cfg is not None:
        link = parent[cfg]
        sym = link[1] if link else None
        steps.append(TraceStep(cfg[0], sym, cfg[2]))
        cfg = link[0] if link else None
    steps.reverse()
    return RunResult(True, tuple(steps))


def _tables(a: Pda):
    """Moves by (state, symbol), all epsilon moves by state, and the epsilon
    moves that can still lead to reading more input (the rest only matter
    once the word is consumed)."""
    if a._tables is None:
        read: dict = {}
        eps: dict = {}
        for t in a.transitions:
            move = (t.pop, t.dst, t.push)
            if t.symbol is None:
                eps.setdefault(t.src, []).append(move)
            else:
                read.setdefault((t.src, t.symbol), []).append(move)
        live = {q for q, _ in read}
        grew = True
        while grew:
            grew = False
            for q, moves in eps.items():
                if q not in live and any(dst in live for _, dst, _ in moves):
                    live.add(q)
                    grew = True
        mid = {q: [m for m in moves if m[1] in live] for q, moves in eps.items()}
        mid = {q: moves for q, moves in mid.items() if moves}
        a._tables = (read, eps, mid)
    return a._tables


def _closure(eps, configs, limit):
    for q, _ in configs:
        if q in eps:
            break
    else:
        return configs
    out = set(configs)
    todo = list(configs)
    while todo:
        q, st = todo.pop()
        for pop, dst, push in eps.get(q, ()):
            if pop is not None:
                if not st or st[-1] != pop:
                    continue
                ns = st[:-1]
            else:
                ns = st
            if push:
                ns = ns + push
                if len(ns) > limit:
                    continue
            c = (dst, ns)
            if c not in out:
                out.add(c)
                todo.append(c)
    return out


def _advance(read, cur, sym, limit):
    nxt = []
    for q, st in cur:
        for pop, dst, push in read.get((q, sym), ()):
            if pop is not None:
                if not st or st[-1] != pop:
                    continue
                ns = st[:-1]
            else:
                ns = st
            if push:
                ns = ns + push
                if len(ns) > limit:
                    continue
            nxt.append((dst, ns))
    return nxt


def accepts(a: Pda, w: Sequence[str]) -> bool:
    """Acceptance without a trace: the set of reachable configurations is
    advanced one symbol at a time, with a straight path while it holds a
    single configuration with a single move."""
    read, eps, mid = _tables(a)
    limit = len(w) + 2 * len(a.states) + 2
    cur = list(_closure(mid, [(a.initial, ())], limit))
    for sym in w:
        if len(cur) == 1:
            q, st = cur[0]
            moves = read.get((q, sym))
            if moves is None:
                return False
            if len(moves) == 1 and q not in mid:
                pop, dst, push = moves[0]
                if pop is not None:
                    if not st or st[-1] != pop:
                        return False
                    st = st[:-1]
                if push:
                    st = st + push
                    if len(st) > limit:
                        return False
                if dst not in mid:
                    cur[0] = (dst, st)
                    continue
                cur = list(_closure(mid, [(dst, st)], limit))
                continue
        cur = _advance(read, cur, sym, limit)
        if not cur:
            return False
        cur = list(_closure(mid, cur, limit))
    acc = a.accepting
    return any(q in acc for q, _ in _closure(eps, cur, limit))


# ---------------------------------------------------------------------------
# concrete machines

def _machine(name, states, trans, accepting, gens, ops, extra_stack=()):
    symbols = frozenset(list(gens) + [left(o) for o in ops] + [right(o) for o in ops])
    stack = frozenset([BOTTOM, *ops, *extra_stack])
    return Pda(tuple(states), symbols, stack, tuple(trans), states[0],
               frozenset(accepting), name)


def build_bracket_pda(ops: Iterable[str], gens: Iterable[str]) -> Pda:
    """The automaton recognizing flat words of operated monomials."""
    ops = tuple(ops)
    gens = tuple(gens)
    T = Transition
    trans = [T("q0", None, None, "q1", (BOTTOM,))]
    trans += [T("q1", x, None, "q1") for x in gens]
    trans += [T("q1", left(o), None, "q1", (o,)) for o in ops]
    trans += [T("q1", right(o), o, "q1") for o in ops]
    trans.append(T("q1", None, BOTTOM, "q2"))
    return _machine("A_Omega", ["q0", "q1", "q2"], trans, ["q2"], gens, ops)


def anbn_pda() -> Pda:
    """The machine for ``a^n b^n``.  Reading ``b`` moves to a separate state
    so that no ``a`` can follow; a single looping state would accept every
    balanced word such as ``abab``."""
    T = Transition
    trans = [T("q0", None, None, "q1", (BOTTOM,)),
             T("q1", "a", None, "q1", ("0",)),
             T("q1", "b", "0", "q3"),
             T("q3", "b", "0", "q3"),
             T("q1", None, BOTTOM, "q2"),
             T("q3", None, BOTTOM, "q2")]
    return Pda(("q0", "q1", "q2", "q3"), frozenset("ab"), frozenset([BOTTOM, "0"]),
               tuple(trans), "q0", frozenset(["q2"]), "anbn")


def _pda_d(gens):
    T = Transition
    D = "D"
    trans = [T("q0", None, None, "q1", (BOTTOM,))]
    trans += [T("q1", x, None, "q1") for x in gens]
    trans += [T("q1", None, BOTTOM, "q5"),
              T("q1", None, None, "q2"),
              T("q2", left(D), None, "q2", (D,))]
    trans += [T("q2", x, None, "q3") for x in gens]
    trans += [T("q3", right(D), D, "q3"),
              T("q3", None, None, "q1")]
    return _machine("A_D", ["q0", "q1", "q2", "q3", "q5"], trans, ["q5"], gens, [D])


def _pda_p(gens):
    T = Transition
    P = "P"
    trans = [T("q0", None, None, "q1", (BOTTOM,)),
             T("q1", left(P), None, "q1", (P,)),
             T("q1", None, None, "q2"),
             T("q2", right(P), P, "q2")]
    trans += [T("q2", x, None, "q1") for x in gens]
    trans += [T("q1", None, BOTTOM, "q3"),
              T("q2", None, BOTTOM, "q4")]
    return _machine("A_P", ["q0", "q1", "q2", "q3", "q4"], trans, ["q3", "q4"], gens, [P])


def _pda_pd(gens):
    T = Transition
    P, D = "P", "D"
    lP, lD, rP, rD = left(P), left(D), right(P), right(D)
    trans = [T("q0", None, None, "q1", (BOTTOM,)),
             T("q1", lP, None, "q1", (P,)),
             T("q1", lD, None, "q2", (D,)),
             T("q1", None, None, "q5"),
             T("q1", None, BOTTOM, "q6"),
             T("q2", lD, None, "q2", (D,)),
             T("q2", lP, None, "q3", (P,)),
             T("q3", lP, None, "q3", (P,)),
             T("q3", lD, None, "q2", (D,)),
             T("q3", rP, P, "q4"),
             T("q4", rP, P, "q4"),
             T("q5", rP, P, "q5"),
             T("q5", rD, D, "q5"),
             T("q5", None, BOTTOM, "q6")]
    for x in gens:
        trans += [T("q5", x, None, "q1"),
                  T("q2", x, None, "q1"),
                  T("q3", x, None, "q3"),
                  T("q4", x, None, "q1")]
    return _machine("A_PD", ["q0", "q1", "q2", "q3", "q4", "q5", "q6"], trans,
                    ["q6"], gens, [P, D])


PRESET_PDAS = ("A_D", "A_P", "A_PD", "A_Omega")


def preset_pda(name: str, gens: Iterable[str] = ("x",), ops: Iterable[str] | None = None) -> Pda:
    """Machines transcribed from the normal-form diagrams.

    ``A_Omega`` needs ``ops``; the others fix their operator names
    (``D`` and/or ``P``).
    """
    gens = tuple(gens)
    if name == "A_D":
        return _pda_d(gens)
    if name == "A_P":
        return _pda_p(gens)
    if name == "A_PD":
        return _pda_pd(gens)
    if name in ("A_Omega", "A_Ω"):
        return build_bracket_pda(tuple(ops or ()), gens)
    raise PdaError(f"unknown preset automaton {name!r}; expected one of {', '.join(PRESET_PDAS)}")
