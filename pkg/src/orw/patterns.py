"""Monomial patterns with sequence variables, and right-hand templates.

A pattern is a sequence of pattern atoms:

* a generator name (``str``) matching exactly that generator,
* :class:`PBracket` matching a bracket with the same operator whose
  argument matches an inner pattern,
* :class:`PVar` matching any run of atoms (at least ``min_len`` of them),
* :class:`PCtx` (templates only) matching the hole of a context,
* :data:`HOLE` itself.

Templates are linear combinations of template monomials; their atoms are
the same as pattern atoms plus :class:`TNf` markers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .syntax import (Apply, CtxMark, Hole, Lam, Name, Nf, Num, ParseError, Prod, Sum,
                     resolve_name)
from .terms import HOLE, Bracket, Monomial, Polynomial, contains_hole, scalar


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class PVar:
    name: str
    min_len: int = 0

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PBracket:
    op: str
    inner: "Pattern"

    def __str__(self) -> str:
        return f"{self.op}({self.inner})"


@dataclass(frozen=True)
class PCtx:
    inner: "Pattern"
    anywhere: bool

    def __str__(self) -> str:
        return ("q{%s}" if self.anywhere else "{%s}") % self.inner


class Pattern:
    """An immutable pattern sequence with precomputed length bounds."""

    __slots__ = ("atoms", "minrest", "vars", "ground", "head", "rigid")

    def __init__(self, atoms: Sequence):
        self.atoms = tuple(atoms)
        rest = [0] * (len(self.atoms) + 1)
        for i in range(len(self.atoms) - 1, -1, -1):
            a = self.atoms[i]
            rest[i] = rest[i + 1] + (a.min_len if isinstance(a, PVar) else 1)
        self.minrest = tuple(rest)
        vs: list[str] = []
        _collect_vars(self.atoms, vs)
        self.vars = tuple(vs)
        self.ground = not vs and not any(isinstance(a, PCtx) for a in self.atoms)
        h = self.atoms[0] if self.atoms else None
        if isinstance(h, str):
            self.head = h
        elif isinstance(h, PBracket):
            self.head = ("op", h.op)
        else:
            self.head = None
        self.rigid = _is_rigid(self.atoms)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __str__(self) -> str:
        if not self.atoms:
            return "1"
        return "*".join(str(a) if a is not HOLE else "_" for a in self.atoms)

    def __repr__(self) -> str:
        return f"Pattern({str(self)!r})"

    def to_monomial(self) -> Monomial:
        """The monomial of a ground pattern."""
        out = []
        for a in self.atoms:
            if isinstance(a, PBracket):
                out.append(Bracket(a.op, a.inner.to_monomial()))
            elif isinstance(a, str) or a is HOLE:
                out.append(a)
            else:
                raise PatternError(f"pattern {self} is not ground")
        return Monomial(out)


def _is_rigid(atoms) -> bool:
    """No sequence variable needs a split: variables only fill a whole
    bracket argument on their own."""
    for a in atoms:
        if isinstance(a, PBracket):
            inner = a.inner.atoms
            if len(inner) == 1 and isinstance(inner[0], PVar):
                continue
            if not _is_rigid(inner):
                return False
        elif not isinstance(a, str):
            return False
    return True


def _collect_vars(atoms, acc: list) -> None:
    for a in atoms:
        if isinstance(a, PVar):
            if a.name not in acc:
                acc.append(a.name)
        elif isinstance(a, PBracket):
            _collect_vars(a.inner.atoms, acc)
        elif isinstance(a, PCtx):
            _collect_vars(a.inner.atoms, acc)


# ---------------------------------------------------------------------------
# building patterns from syntax

def compile_pattern(node, gens: Sequence[str], variables: dict[str, int]) -> Pattern:
    """``variables`` maps variable names to their minimal length."""
    return Pattern(_pat_atoms(node, gens, variables))


def _pat_atoms(node, gens, variables) -> list:
    cls = node.__class__
    if cls is Num:
        if node.value != 1:
            raise PatternError("numbers other than 1 cannot appear in a pattern")
        return []
    if cls is Name:
        out = []
        for n in resolve_name(node, list(gens) + list(variables)):
            out.append(PVar(n, variables[n]) if n in variables else n)
        return out
    if cls is Apply:
        return [PBracket(node.op, Pattern(_pat_atoms(node.arg, gens, variables)))]
    if cls is Prod:
        out = []
        for f in node.factors:
            out.extend(_pat_atoms(f, gens, variables))
        return out
    if cls is Hole:
        return [HOLE]
    if cls is CtxMark:
        return [PCtx(Pattern(_pat_atoms(node.inner, gens, variables)), node.anywhere)]
    if cls is Sum and len(node.terms) == 1 and node.terms[0][0] == 1:
        return _pat_atoms(node.terms[0][1], gens, variables)
    raise PatternError("a pattern must be a single monomial without coefficients")


# ---------------------------------------------------------------------------
# matching

Check = Callable[[str, Monomial], bool]


def match_from(pat: Pattern, atoms: tuple, start: int, binding: dict,
               check: Check | None = None, full: bool = False,
               inner_source=None) -> Iterator[tuple[int, dict]]:
    """Match ``pat`` against ``atoms`` beginning at ``start``.

    Yields ``(end, binding)``; when ``full`` only ``end == len(atoms)``.
    ``inner_source`` is the monomial plugged into the hole (for
    :class:`PCtx` atoms of family templates).
    """
    if pat.rigid and not binding:
        return _rigid_match(pat.atoms, atoms, start, check, full)
    return _m(pat.atoms, pat.minrest, 0, atoms, start, binding, check, full, inner_source)


def _rigid_match(pa, atoms, start, check, full):
    end = start + len(pa)
    if end > len(atoms) or (full and end != len(atoms)):
        return
    b = _rigid_seq(pa, atoms, start, {}, check)
    if b is not None:
        yield end, b


def _rigid_seq(pa, atoms, i, b, check):
    for p in pa:
        a = atoms[i]
        i += 1
        if p.__class__ is str:
            if a != p:
                return None
            continue
        if a.__class__ is not Bracket or a[0] != p.op:
            return None
        inner = p.inner.atoms
        arg = a[1]
        if len(inner) == 1 and inner[0].__class__ is PVar:
            v = inner[0]
            if len(arg) < v.min_len:
                return None
            old = b.get(v.name)
            if old is not None:
                if old != arg:
                    return None
            else:
                if check is not None and not check(v.name, arg):
                    return None
                b[v.name] = arg
        elif len(arg) != len(inner) or _rigid_seq(inner, arg, 0, b, check) is None:
            return None
    return b


def _m(pa, minrest, pi, atoms, ai, b, check, full, inner):
    n = len(atoms)
    if pi == len(pa):
        if not full or ai == n:
            yield ai, b
        return
    if n - ai < minrest[pi]:
        return
    p = pa[pi]
    if p.__class__ is str:
        if ai < n and atoms[ai] == p:
            yield from _m(pa, minrest, pi + 1, atoms, ai + 1, b, check, full, inner)
        return
    if p.__class__ is PBracket:
        if ai < n:
            a = atoms[ai]
            if a.__class__ is Bracket and a[0] == p.op:
                ip = p.inner
                for _, b2 in _m(ip.atoms, ip.minrest, 0, a[1], 0, b, check, True, inner):
                    yield from _m(pa, minrest, pi + 1, atoms, ai + 1, b2, check, full, inner)
        return
    if p.__class__ is PVar:
        name = p.name
        if name in b:
            v = b[name]
            k = len(v)
            if atoms[ai:ai + k] == v:
                yield from _m(pa, minrest, pi + 1, atoms, ai + k, b, check, full, inner)
            return
        hi = n - minrest[pi + 1]
        if pi + 1 == len(pa) and full:
            lengths = (n - ai,) if n - ai >= p.min_len else ()
        else:
            lengths = range(p.min_len, hi - ai + 1)
        for k in lengths:
            v = Monomial(atoms[ai:ai + k])
            if check is not None and not check(name, v):
                continue
            b2 = dict(b)
            b2[name] = v
            yield from _m(pa, minrest, pi + 1, atoms, ai + k, b2, check, full, inner)
        return
    if p is HOLE:
        if ai < n and atoms[ai] is HOLE:
            yield from _m(pa, minrest, pi + 1, atoms, ai + 1, b, check, full, inner)
        return
    if p.__class__ is PCtx:
        if inner is None:
            return
        ends = range(ai + 1, n + 1) if p.anywhere else (ai + 1,)
        for e in ends:
            seg = atoms[ai:e]
            if p.anywhere:
                if not contains_hole(seg):
                    continue
            elif not (len(seg) == 1 and seg[0] is HOLE):
                continue
            ip = p.inner
            for _, b2 in _m(ip.atoms, ip.minrest, 0, inner, 0, b, check, True, None):
                yield from _m(pa, minrest, pi + 1, atoms, e, b2, check, full, inner)
        return
    raise PatternError(f"bad pattern atom {p!r}")


def match_full(pat: Pattern, m: Sequence, check: Check | None = None,
               inner_source=None) -> list[dict]:
    return [b for _, b in match_from(pat, tuple(m), 0, {}, check, True, inner_source)]


# ---------------------------------------------------------------------------
# templates

@dataclass(frozen=True)
class TNf:
    """``NF(...)``: normal form of an inner template polynomial."""
    terms: tuple  # of (Fraction, atoms tuple)


class Template:
    """A linear combination of template monomials."""

    __slots__ = ("terms", "has_nf")

    def __init__(self, terms: Iterable[tuple[Fraction, tuple]]):
        merged: dict = {}
        for c, atoms in terms:
            merged[atoms] = merged.get(atoms, 0) + c
        self.terms = tuple((scalar(c), a) for a, c in merged.items() if c)
        self.has_nf = any(_has_nf(a) for _, a in self.terms)

    def variables(self) -> set[str]:
        acc: list = []
        for _, a in self.terms:
            _collect_tvars(a, acc)
        return set(acc)

    def instantiate(self, binding: dict, nf=None) -> Polynomial:
        out: dict = {}
        for c, atoms in self.terms:
            if self.has_nf:
                p = _inst_poly(atoms, binding, nf)
                for m, v in p.terms.items():
                    out[m] = out.get(m, 0) + c * v
            else:
                m = _inst_mono(atoms, binding)
                out[m] = out.get(m, 0) + c
        return Polynomial._raw({m: v for m, v in out.items() if v})


def _has_nf(atoms) -> bool:
    for a in atoms:
        if isinstance(a, TNf):
            return True
        if isinstance(a, PBracket) and _has_nf(a.inner.atoms):
            return True
    return False


def _collect_tvars(atoms, acc) -> None:
    for a in atoms:
        if isinstance(a, PVar):
            acc.append(a.name)
        elif isinstance(a, PBracket):
            _collect_tvars(a.inner.atoms, acc)
        elif isinstance(a, TNf):
            for _, t in a.terms:
                _collect_tvars(t, acc)


def _inst_mono(atoms, b) -> Monomial:
    out = []
    for a in atoms:
        cls = a.__class__
        if cls is str:
            out.append(a)
        elif cls is PVar:
            out.extend(b[a.name])
        elif cls is PBracket:
            out.append(Bracket(a.op, _inst_mono(a.inner.atoms, b)))
        else:
            raise PatternError(f"cannot instantiate {a!r}")
    return Monomial(out)


def _inst_poly(atoms, b, nf) -> Polynomial:
    acc = Polynomial.from_monomial(Monomial())
    run: list = []

    def flush():
        nonlocal acc, run
        if run:
            acc = acc * Polynomial.from_monomial(Monomial(run))
            run = []

    for a in atoms:
        cls = a.__class__
        if cls is str:
            run.append(a)
        elif cls is PVar:
            run.extend(b[a.name])
        elif cls is PBracket:
            inner = _inst_poly(a.inner.atoms, b, nf)
            if len(inner) == 1 and inner.is_monomial():
                run.append(Bracket(a.op, next(iter(inner))))
            else:
                flush()
                acc = acc * inner.apply(a.op)
        elif cls is TNf:
            flush()
            p = Polynomial.zero()
            for c, t in a.terms:
                p = p + _inst_poly(t, b, nf).scale(c)
            if nf is None:
                raise PatternError("NF marker needs a normalizer")
            acc = acc * nf(p)
        else:
            raise PatternError(f"cannot instantiate {a!r}")
    flush()
    return acc


def compile_template(node, gens: Sequence[str], variables: Iterable[str],
                     lam: Fraction) -> Template:
    vs = {v: 0 for v in variables}
    return Template(_tmpl(node, gens, vs, Fraction(lam)))


def _tmpl(node, gens, vs, lam) -> list[tuple[Fraction, tuple]]:
    cls = node.__class__
    if cls is Num:
        return [(node.value, ())]
    if cls is Lam:
        if node.power < 0 and lam == 0:
            raise ParseError("lambda^-1 requires a nonzero lambda", 0)
        return [(lam ** node.power, ())]
    if cls is Name:
        atoms = []
        for n in resolve_name(node, list(gens) + list(vs)):
            atoms.append(PVar(n) if n in vs else n)
        return [(Fraction(1), tuple(atoms))]
    if cls is Apply:
        return [(c, (PBracket(node.op, Pattern(a)),)) for c, a in _tmpl(node.arg, gens, vs, lam)]
    if cls is Nf:
        return [(Fraction(1), (TNf(tuple(_tmpl(node.arg, gens, vs, lam))),))]
    if cls is Sum:
        out = []
        for sign, t in node.terms:
            out += [(c * sign, a) for c, a in _tmpl(t, gens, vs, lam)]
        return out
    if cls is Prod:
        acc = [(Fraction(1), ())]
        for f in node.factors:
            part = _tmpl(f, gens, vs, lam)
            acc = [(c1 * c2, a1 + a2) for c1, a1 in acc for c2, a2 in part]
        return acc
    raise PatternError(f"unsupported construct in a rule target: {node!r}")
