"""Operated monomials, polynomials over the rationals, and one-hole contexts.

A monomial is a finite sequence of atoms.  An atom is either a generator
(a plain ``str``) or a :class:`Bracket` holding an operator name and an
inner monomial.  Both monomials and brackets are tuple subclasses, so
equality and hashing are structural and run at C speed.

Contexts are monomials containing exactly one :data:`HOLE` atom.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union


class TermError(ValueError):
    """Raised on structurally invalid terms (bad holes, bad atoms)."""


class _Hole:
    __slots__ = ()

    def __repr__(self) -> str:
        return "HOLE"

    def __str__(self) -> str:
        return "_"

    def __reduce__(self):
        return "HOLE"


HOLE = _Hole()


class Bracket(tuple):
    """The atom ``op(arg)``."""

    __slots__ = ()

    def __new__(cls, op: str, arg: "Monomial") -> "Bracket":
        if arg.__class__ is not Monomial:
            arg = Monomial(arg)
        return tuple.__new__(cls, (op, arg))

    def __getnewargs__(self):
        return (self[0], self[1])

    @property
    def op(self) -> str:
        return self[0]

    @property
    def arg(self) -> "Monomial":
        return self[1]

    def __repr__(self) -> str:
        return f"Bracket({self[0]!r}, {self[1]!r})"

    def __str__(self) -> str:
        return f"{self[0]}({self[1]})"


Atom = Union[str, Bracket]


class Monomial(tuple):
    """An element of the free operated monoid; the empty tuple is 1."""

    __slots__ = ()

    def __new__(cls, atoms: Iterable = ()) -> "Monomial":
        return tuple.__new__(cls, atoms)

    @property
    def atoms(self) -> tuple:
        return tuple(self)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial(tuple.__add__(self, other))
        if isinstance(other, Polynomial):
            return Polynomial.from_monomial(self) * other
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return Polynomial({self: scalar(other)})
        return NotImplemented

    # tuple.__add__ would silently return a plain tuple
    def __add__(self, other):
        return Polynomial.from_monomial(self) + other

    def __repr__(self) -> str:
        return f"Monomial({tuple(self)!r})"

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(str(a) for a in self)


ONE = Monomial(())


def gen(name: str) -> Monomial:
    return Monomial((name,))


def bracket(op: str, arg) -> Monomial:
    """The monomial consisting of the single atom ``op(arg)``."""
    return Monomial((Bracket(op, Monomial(arg)),))


def is_bracket(atom) -> bool:
    return atom.__class__ is Bracket


# ---------------------------------------------------------------------------
# measures

def size(m) -> int:
    """Generators plus brackets, counted recursively (a hole counts as one)."""
    n = len(m)
    for a in m:
        if a.__class__ is Bracket:
            n += size(a[1])
    return n


def depth(m) -> int:
    d = 0
    for a in m:
        if a.__class__ is Bracket:
            d = max(d, 1 + depth(a[1]))
    return d


def breadth(m) -> int:
    return len(m)


def measure(m) -> tuple[int, int, int]:
    """Return ``(breadth, depth, size)``."""
    return len(m), depth(m), size(m)


def op_degree(m) -> int:
    """Number of bracket atoms, counted recursively."""
    n = 0
    for a in m:
        if a.__class__ is Bracket:
            n += 1 + op_degree(a[1])
    return n


def gen_degree(m) -> int:
    n = 0
    for a in m:
        if a.__class__ is Bracket:
            n += gen_degree(a[1])
        elif a is not HOLE:
            n += 1
    return n


def contains_hole(m) -> bool:
    for a in m:
        if a is HOLE:
            return True
        if a.__class__ is Bracket and contains_hole(a[1]):
            return True
    return False


def hole_count(m) -> int:
    n = 0
    for a in m:
        if a is HOLE:
            n += 1
        elif a.__class__ is Bracket:
            n += hole_count(a[1])
    return n


def generators_of(m, acc: set | None = None) -> set:
    acc = set() if acc is None else acc
    for a in m:
        if a.__class__ is Bracket:
            generators_of(a[1], acc)
        elif a is not HOLE:
            acc.add(a)
    return acc


def operators_of(m, acc: set | None = None) -> set:
    acc = set() if acc is None else acc
    for a in m:
        if a.__class__ is Bracket:
            acc.add(a[0])
            operators_of(a[1], acc)
    return acc


# ---------------------------------------------------------------------------
# polynomials

Scalar = Union[int, Fraction]


def scalar(c) -> Scalar:
    """Coefficients are kept as ``int`` when integral (much faster than
    :class:`Fraction`) and as ``Fraction`` otherwise."""
    if c.__class__ is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class Polynomial:
    """Finitely supported map from monomials to nonzero rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        t: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    if m.__class__ is not Monomial:
                        m = Monomial(m)
                    t[m] = scalar(c)
        self.terms = t

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def from_monomial(cls, m: Monomial, c: Scalar = 1) -> "Polynomial":
        if not c:
            return cls._raw({})
        return cls._raw({m: scalar(c)})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    # -- container protocol
    def support(self) -> list[Monomial]:
        return list(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, 0)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __contains__(self, m) -> bool:
        return m in self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) == 1

    # -- arithmetic
    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        if not c:
            return Polynomial._raw({})
        c = scalar(c)
        return Polynomial._raw({m: scalar(v * c) for m, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        t: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = Monomial(tuple.__add__(m1, m2))
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Polynomial._raw(t)

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other * self

    def apply(self, op: str) -> "Polynomial":
        """Apply the (linear) operator ``op`` to every support monomial."""
        return Polynomial._raw(
            {Monomial((Bracket(op, m),)): c for m, c in self.terms.items()})

    def add_term(self, m: Monomial, c: Scalar) -> None:
        """In-place accumulation; only for freshly built polynomials."""
        v = self.terms.get(m, 0) + c
        if v:
            self.terms[m] = v
        else:
            self.terms.pop(m, None)

    # -- comparison / printing
    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self, key=None) -> list[tuple[Monomial, Fraction]]:
        key = key or presentation_key
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]))

    def to_str(self, key=None) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms(key)):
            neg = c < 0
            a = -c if neg else c
            if a == 1:
                body = str(m)
            elif not m:
                body = _fmt_scalar(a)
            else:
                body = f"{_fmt_scalar(a)}*{m}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r})"


def _fmt_scalar(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _as_poly(x) -> Polynomial | None:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, Monomial):
        return Polynomial._raw({x: 1})
    if isinstance(x, (int, Rational)):
        return Polynomial.from_monomial(ONE, x)
    return None


def as_polynomial(x) -> Polynomial:
    p = _as_poly(x)
    if p is None:
        raise TypeError(f"cannot interpret {x!r} as a polynomial")
    return p


def poly_arith(kind: str, a: Polynomial, b) -> Polynomial:
    """Dispatch for ``add``, ``scale``, ``multiply`` and ``apply-operator``."""
    a = as_polynomial(a)
    if kind == "add":
        return a + as_polynomial(b)
    if kind == "scale":
        return a.scale(b)
    if kind == "multiply":
        return a * as_polynomial(b)
    if kind in ("apply-operator", "apply"):
        return a.apply(b)
    raise ValueError(f"unknown polynomial operation {kind!r}")


# ---------------------------------------------------------------------------
# presentation order

def _default_symbol_key(sym: str):
    if sym.startswith("l:"):
        return (1, sym[2:])
    if sym.startswith("r:"):
        return (2, sym[2:])
    return (0, sym)


def presentation_key(m: Monomial):
    """(size, flat word) with generators < left brackets < right brackets.

    Names inside each class are compared alphabetically; a polygraph
    supplies its own declaration-order key when one is available.
    """
    from .automaton import flatten
    return (size(m), tuple(_default_symbol_key(s) for s in flatten(m)))


# ---------------------------------------------------------------------------
# contexts

class Context:
    """A monomial with exactly one hole."""

    __slots__ = ("mono",)

    def __init__(self, mono):
        if mono.__class__ is not Monomial:
            mono = Monomial(mono)
        if hole_count(mono) != 1:
            raise TermError("a context must contain exactly one hole")
        self.mono = mono

    @classmethod
    def _raw(cls, mono: Monomial) -> "Context":
        c = cls.__new__(cls)
        c.mono = mono
        return c

    @classmethod
    def at(cls, m: Monomial, path: tuple, start: int, end: int) -> "Context":
        """Context obtained by replacing ``m``'s factor ``[start, end)`` at the
        node reached by following bracket indices ``path``."""
        return cls._raw(_replace(m, path, start, end, (HOLE,)))

    def plug(self, a):
        return plug(self, a)

    def is_trivial(self) -> bool:
        return len(self.mono) == 1 and self.mono[0] is HOLE

    def hole_path(self) -> tuple[tuple, int]:
        """Bracket path to the node holding the hole, and its index there."""
        path = []
        node = self.mono
        while True:
            for i, a in enumerate(node):
                if a is HOLE:
                    return tuple(path), i
                if a.__class__ is Bracket and contains_hole(a[1]):
                    path.append(i)
                    node = a[1]
                    break
            else:  # pragma: no cover - guarded by the constructor
                raise TermError("context lost its hole")

    def __eq__(self, other) -> bool:
        return isinstance(other, Context) and self.mono == other.mono

    def __hash__(self) -> int:
        return hash(("ctx", self.mono))

    def __str__(self) -> str:
        return str(self.mono)

    def __repr__(self) -> str:
        return f"Context({str(self.mono)!r})"


TRIVIAL_CONTEXT = Context._raw(Monomial((HOLE,)))


def _replace(m: Monomial, path: tuple, start: int, end: int, new: tuple) -> Monomial:
    if not path:
        return Monomial(tuple.__add__(tuple.__add__(m[:start], new), m[end:]))
    i = path[0]
    b = m[i]
    inner = _replace(b[1], path[1:], start, end, new)
    return Monomial(m[:i] + (Bracket(b[0], inner),) + m[i + 1:])


def _splice(m: Monomial, filler: tuple) -> Monomial:
    out = []
    for a in m:
        if a is HOLE:
            out.extend(filler)
        elif a.__class__ is Bracket and contains_hole(a[1]):
            out.append(Bracket(a[0], _splice(a[1], filler)))
        else:
            out.append(a)
    return Monomial(out)


def plug(q: Context, a):
    """Substitute ``a`` for the hole of ``q``; linear on polynomials."""
    if isinstance(a, Context):
        raise TermError("cannot plug a context into a context; use compose_contexts")
    if isinstance(a, Polynomial):
        t: dict = {}
        for m, c in a.terms.items():
            pm = _splice(q.mono, m)
            t[pm] = t.get(pm, 0) + c
        return Polynomial({m: c for m, c in t.items() if c})
    if a.__class__ is not Monomial:
        a = Monomial(a)
    if contains_hole(a):
        raise TermError("the plugged monomial contains a hole")
    return _splice(q.mono, a)


def compose_contexts(p: Context, q: Context) -> Context:
    """The context ``p|_q``: plugging into it equals plugging into q, then p."""
    return Context._raw(_splice(p.mono, q.mono))


def left_mult_context(prefix: Monomial, q: Context | None = None) -> Context:
    """Context ``prefix·q`` (``q`` defaults to the bare hole)."""
    inner = q.mono if q is not None else (HOLE,)
    return Context._raw(Monomial(tuple(prefix) + tuple(inner)))


def right_mult_context(q: Context | None, suffix: Monomial) -> Context:
    inner = q.mono if q is not None else (HOLE,)
    return Context._raw(Monomial(tuple(inner) + tuple(suffix)))


def bracket_context(op: str, q: Context | None, suffix: Monomial = ONE) -> Context:
    """Context ``op(q)·suffix``."""
    inner = q.mono if q is not None else Monomial((HOLE,))
    return Context._raw(Monomial((Bracket(op, inner),) + tuple(suffix)))
