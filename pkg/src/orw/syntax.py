"""Surface syntax for terms, polynomials, contexts and rule templates.

Grammar (whitespace is insignificant)::

    expr    := ['+'|'-'] product (('+'|'-') product)*
    product := factor (['*'] factor)*
    factor  := NUMBER ['/' NUMBER]
             | 'lambda' ['^' ['-'] NUMBER]
             | OP ['^' NUMBER] '(' expr ')'
             | 'NF' '(' expr ')'
             | NAME ['{' expr '}']
             | '{' expr '}'
             | '_'
             | '(' expr ')'

Juxtaposition is multiplication.  ``q{...}`` and ``{...}`` are only
meaningful inside family templates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .terms import HOLE, Bracket, Context, Monomial, Polynomial, TermError, hole_count

RESERVED = frozenset({"lambda", "NF", "eps"})


class ParseError(ValueError):
    """Syntax error with a 1-based column (and line, when known)."""

    def __init__(self, message: str, column: int, line: int | None = None):
        self.message = message
        self.column = column
        self.line = line
        where = f"line {line}, column {column}" if line else f"column {column}"
        super().__init__(f"{where}: {message}")


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Lam:
    power: int


@dataclass(frozen=True)
class Name:
    name: str
    col: int = 0


@dataclass(frozen=True)
class Apply:
    op: str
    arg: object
    col: int = 0


@dataclass(frozen=True)
class Nf:
    arg: object


@dataclass(frozen=True)
class Hole:
    pass


@dataclass(frozen=True)
class CtxMark:
    """``q{inner}`` (anywhere inside) or ``{inner}`` (exactly here)."""
    inner: object
    anywhere: bool


@dataclass(frozen=True)
class Sum:
    terms: tuple  # of (sign, node)


@dataclass(frozen=True)
class Prod:
    factors: tuple


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_']*)
  | (?P<hole>_)
  | (?P<sym>[-+*/^(){}])
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str, ops: Iterable[str]):
        self.toks = tokenize(text)
        self.i = 0
        self.ops = set(ops)

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value:
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {value!r}, got {got}", t[2])
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return node

    def expr(self):
        terms = []
        sign = 1
        t = self.peek()
        if t[1] in "+-" and t[0] == "sym":
            self.take()
            sign = -1 if t[1] == "-" else 1
        terms.append((sign, self.product()))
        while True:
            t = self.peek()
            if t[0] == "sym" and t[1] in ("+", "-"):
                self.take()
                terms.append((-1 if t[1] == "-" else 1, self.product()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def _starts_factor(self, t) -> bool:
        return t[0] in ("num", "name", "hole") or (t[0] == "sym" and t[1] in "({")

    def product(self):
        factors = [self.factor()]
        while True:
            t = self.peek()
            if t[0] == "sym" and t[1] == "*":
                self.take()
                factors.append(self.factor())
            elif self._starts_factor(t):
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def _int(self) -> int:
        t = self.take()
        if t[0] != "num":
            raise ParseError("expected an integer", t[2])
        return int(t[1])

    def factor(self):
        t = self.take()
        kind, val, col = t
        if kind == "num":
            num = Fraction(int(val))
            if self.peek()[1] == "/" and self.peek(1)[0] == "num":
                self.take()
                den = self._int()
                if den == 0:
                    raise ParseError("zero denominator", col)
                num = num / den
            return Num(num)
        if kind == "hole":
            return Hole()
        if kind == "sym":
            if val == "(":
                node = self.expr()
                self.expect(")")
                return node
            if val == "{":
                node = self.expr()
                self.expect("}")
                return CtxMark(node, anywhere=False)
            raise ParseError(f"unexpected {val!r}", col)
        if kind == "name":
            if val == "lambda":
                power = 1
                if self.peek()[1] == "^":
                    self.take()
                    neg = False
                    if self.peek()[1] == "-":
                        self.take()
                        neg = True
                    power = -self._int() if neg else self._int()
                return Lam(power)
            if val == "NF":
                self.expect("(")
                node = self.expr()
                self.expect(")")
                return Nf(node)
            if val in self.ops:
                times = 1
                if self.peek()[1] == "^":
                    self.take()
                    times = self._int()
                self.expect("(")
                node = self.expr() if self.peek()[1] != ")" else Num(Fraction(1))
                self.expect(")")
                for _ in range(times):
                    node = Apply(val, node, col)
                return node
            if self.peek()[1] == "(" and val not in RESERVED:
                raise ParseError(f"unknown operator {val!r}", col)
            if val == "q" and self.peek()[1] == "{":
                self.take()
                node = self.expr()
                self.expect("}")
                return CtxMark(node, anywhere=True)
            return Name(val, col)
        raise ParseError("unexpected end of input", col)


def parse_ast(text: str, ops: Iterable[str]):
    return _Parser(text, ops).parse()


# ---------------------------------------------------------------------------
# name resolution

def split_name(name: str, known: Iterable[str]) -> list[str] | None:
    """Split an unknown identifier into known names (``xy`` -> ``x y``)."""
    known = set(known)
    n = len(name)
    best: list = [None] * (n + 1)
    best[0] = []
    for i in range(n):
        if best[i] is None:
            continue
        for j in range(i + 1, n + 1):
            if name[i:j] in known and best[j] is None:
                best[j] = best[i] + [name[i:j]]
    return best[n]


def resolve_name(node: Name, known: Iterable[str]) -> list[str]:
    known = set(known)
    if node.name in known:
        return [node.name]
    parts = split_name(node.name, known)
    if parts is None:
        raise ParseError(f"unknown symbol {node.name!r}", node.col)
    return parts


# ---------------------------------------------------------------------------
# evaluation of plain terms

class Evaluator:
    """Evaluate an AST to a :class:`Polynomial` over fixed generators."""

    def __init__(self, gens: Sequence[str], ops: Sequence[str], lam: Fraction = Fraction(1),
                 nf=None, allow_hole: bool = False):
        self.gens = tuple(gens)
        self.ops = tuple(ops)
        self.lam = Fraction(lam)
        self.nf = nf
        self.allow_hole = allow_hole

    def eval(self, node) -> Polynomial:
        cls = node.__class__
        if cls is Num:
            return Polynomial.from_monomial(Monomial(), node.value)
        if cls is Lam:
            if node.power < 0 and self.lam == 0:
                raise ParseError("lambda^-1 requires a nonzero lambda", 0)
            return Polynomial.from_monomial(Monomial(), self.lam ** node.power)
        if cls is Name:
            names = resolve_name(node, self.gens)
            return Polynomial.from_monomial(Monomial(names))
        if cls is Apply:
            return self.eval(node.arg).apply(node.op)
        if cls is Nf:
            if self.nf is None:
                raise ParseError("NF(...) is only available with a rewriting system", 0)
            return self.nf(self.eval(node.arg))
        if cls is Hole:
            if not self.allow_hole:
                raise ParseError("'_' is only allowed in contexts", 0)
            return Polynomial.from_monomial(Monomial((HOLE,)))
        if cls is Sum:
            acc = Polynomial.zero()
            for sign, t in node.terms:
                v = self.eval(t)
                acc = acc + (v if sign > 0 else -v)
            return acc
        if cls is Prod:
            acc = self.eval(node.factors[0])
            for f in node.factors[1:]:
                acc = acc * self.eval(f)
            return acc
        if cls is CtxMark:
            raise ParseError("context marks are only allowed in family templates", 0)
        raise TypeError(f"unknown node {node!r}")


def parse_polynomial(text: str, gens: Sequence[str], ops: Sequence[str],
                     lam=1, nf=None) -> Polynomial:
    return Evaluator(gens, ops, Fraction(lam), nf).eval(parse_ast(text, ops))


def parse_monomial(text: str, gens: Sequence[str], ops: Sequence[str]) -> Monomial:
    p = Evaluator(gens, ops, allow_hole=True).eval(parse_ast(text, ops))
    if not p.is_monomial():
        raise ParseError(f"{text!r} is not a single monomial", 1)
    return next(iter(p))


def parse_context(text: str, gens: Sequence[str], ops: Sequence[str]) -> Context:
    m = parse_monomial(text, gens, ops)
    if hole_count(m) != 1:
        raise ParseError("a context needs exactly one '_'", 1)
    return Context(m)


def format_term(x, key=None) -> str:
    if isinstance(x, Polynomial):
        return x.to_str(key)
    if isinstance(x, Context):
        return str(x)
    return str(Monomial(x))


__all__ = [
    "ParseError", "Num", "Lam", "Name", "Apply", "Nf", "Hole", "CtxMark", "Sum", "Prod",
    "tokenize", "parse_ast", "split_name", "resolve_name", "Evaluator",
    "parse_polynomial", "parse_monomial", "parse_context", "format_term", "RESERVED",
    "TermError", "Bracket",
]
