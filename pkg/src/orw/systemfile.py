"""Line-oriented system files.

::

    ops D P
    gens x y
    lambda 1
    phi Phi_P                 # optional membership predicate for `phi`/`nf`
    companion XP              # optional system for NF(...) markers
    measure rb-weight         # optional bundled termination measure
    rule alpha(u: ne, v: ne): P(u) P(v) -> P(P(u) v) + P(u P(v)) + lambda P(u v)
    rule phi: D(1) -> 0
    rule alpha(u...: dtheta): D(u...) -> leibniz

Constraint codes are ``ne``, ``nf``, ``phi``, ``dtheta``, ``notbracket`` and
``not-OP`` (not a single ``OP`` bracket);
several may be given for one variable, separated by spaces.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

from .patterns import PatternError, compile_pattern, compile_template
from .rewrite import CONSTRAINTS, LeibnizSchema, RewriteError, Schema, System
from .syntax import ParseError, parse_ast

_RULE = re.compile(r"^rule\s+([A-Za-z][\w']*)\s*(?:\((.*?)\))?\s*:\s*(.*)$")


class SystemFileError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_lambda(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid lambda {text!r}; expected a rational such as 1, -2 or 1/2")


def _parse_vars(spec: str, lineno: int) -> tuple[dict, bool]:
    out: dict = {}
    variadic = False
    if not spec or not spec.strip():
        return out, variadic
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, codes = part.partition(":")
        name = name.strip()
        if name.endswith("..."):
            variadic = True
            name = name[:-3]
        if not re.fullmatch(r"[A-Za-z][\w']*", name):
            raise SystemFileError(f"bad variable name {name!r}", lineno)
        cs = frozenset(codes.split())
        for c in cs:
            if c not in CONSTRAINTS and not re.fullmatch(r"not-[A-Za-z]\w*", c):
                raise SystemFileError(
                    f"unknown constraint {c!r}; expected one of {', '.join(CONSTRAINTS)}", lineno)
        out[name] = cs
    return out, variadic


def parse_rule(line: str, gens, ops, lam: Fraction, lineno: int = 1) -> Schema:
    m = _RULE.match(line.strip())
    if not m:
        raise SystemFileError("expected 'rule NAME(vars): LHS -> RHS'", lineno)
    name, varspec, body = m.group(1), m.group(2), m.group(3)
    variables, variadic = _parse_vars(varspec or "", lineno)
    if "->" not in body:
        raise SystemFileError("missing '->'", lineno)
    lhs_text, rhs_text = body.split("->", 1)
    offset = line.index(body) + 1
    if variadic:
        lm = re.fullmatch(r"\s*([A-Za-z]\w*)\(\s*(\w+)\.\.\.\s*\)\s*", lhs_text)
        if not lm or rhs_text.strip() != "leibniz" or len(variables) != 1:
            raise SystemFileError("variadic rules must read 'OP(u...) -> leibniz'", lineno)
        op, var = lm.group(1), lm.group(2)
        if op not in ops:
            raise SystemFileError(f"unknown operator {op!r}", lineno)
        return LeibnizSchema(name, op, var, source=line.strip())
    try:
        mins = {v: (1 if "ne" in cs else 0) for v, cs in variables.items()}
        lhs = compile_pattern(parse_ast(lhs_text, ops), gens, mins)
        rhs = compile_template(parse_ast(rhs_text, ops), gens, variables, lam)
        return Schema(name, lhs, rhs, variables, source=line.strip())
    except ParseError as e:
        col = offset + (e.column - 1 if e.column else 0)
        if e.column and rhs_text and e.column > 0:
            pass
        raise SystemFileError(e.message, lineno, col)
    except (PatternError, RewriteError) as e:
        raise SystemFileError(str(e), lineno, offset)


def load_system(text: str, name: str = "system", resolver: Callable | None = None,
                gens=None, lam=None) -> System:
    """Parse a system file.  ``resolver(name, gens, lam)`` supplies companion
    systems by preset name; ``gens``/``lam`` override the file's values."""
    from .phi import PHI
    ops: list[str] = []
    file_gens: list[str] = []
    file_lam = Fraction(1)
    rules: list[tuple[int, str]] = []
    directives: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "ops":
            ops = rest.replace(",", " ").split()
        elif head == "gens":
            file_gens = rest.replace(",", " ").split()
        elif head == "lambda":
            try:
                file_lam = parse_lambda(rest)
            except ValueError as e:
                raise SystemFileError(str(e), lineno)
        elif head in ("phi", "companion", "measure", "pda", "requires"):
            directives[head] = rest
        elif head == "rule":
            rules.append((lineno, line))
        else:
            raise SystemFileError(f"unknown directive {head!r}", lineno)
    gens = list(gens) if gens is not None else file_gens
    lam = Fraction(lam) if lam is not None else file_lam
    if not gens:
        raise SystemFileError("no generators declared ('gens x y')", 1)
    if directives.get("requires") == "lambda-nonzero" and lam == 0:
        raise SystemFileError(f"system {name} requires a nonzero lambda", 1)
    phi = None
    phi_name = directives.get("phi")
    if phi_name:
        if phi_name not in PHI:
            raise SystemFileError(f"unknown predicate {phi_name!r}", 1)
        pred = PHI[phi_name]
        phi = lambda m, pred=pred, gens=tuple(gens): pred(m, gens)  # noqa: E731
    companion = None
    if directives.get("companion"):
        if resolver is None:
            raise SystemFileError("companion systems need a preset resolver", 1)
        companion = resolver(directives["companion"], gens, lam)
    system = System(gens, ops, lam, name=name, phi=phi, phi_name=phi_name, companion=companion)
    system.directives = directives
    for lineno, line in rules:
        try:
            system.add_schema(parse_rule(line, gens, ops, lam, lineno))
        except ValueError as e:
            if isinstance(e, SystemFileError):
                raise
            raise SystemFileError(str(e), lineno)
    system.pda_name = directives.get("pda")
    system.measure_name = directives.get("measure")
    return system
