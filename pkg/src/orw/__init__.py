"""Operated rewriting systems.

Monomials with nested operator brackets, polynomials over the rationals,
rewriting systems given by rule schemas, their critical branchings and
completion, and Squier generators of reduced convergent systems.
"""

from .automaton import Pda, accepts, flatten, pda_run, preset_pda, unflatten
from .branchings import (CriticalBranching, classify_family, compile_families, complete,
                         critical_pairs, gs_trivial, iter_critical_pairs, joinable)
from .enumerate import MonomialSpace
from .measures import check_termination, named_measure
from .phi import grammar_member, phi_member
from .presets import NAMES as PRESETS
from .presets import export_preset, load_preset
from .resolution import boundary, essential_kind, sigma_path, squier_generators
from .rewrite import RewritePath, RewriteStep, System
from .syntax import parse_monomial, parse_polynomial
from .systemfile import load_system
from .terms import Bracket, Context, Monomial, Polynomial, size

__all__ = [
    "Pda", "accepts", "flatten", "pda_run", "preset_pda", "unflatten",
    "CriticalBranching", "classify_family", "compile_families", "complete", "critical_pairs",
    "gs_trivial", "iter_critical_pairs", "joinable", "MonomialSpace", "check_termination",
    "named_measure", "grammar_member", "phi_member", "PRESETS", "export_preset", "load_preset",
    "boundary", "essential_kind", "sigma_path", "squier_generators", "RewritePath",
    "RewriteStep", "System", "parse_monomial", "parse_polynomial", "load_system", "Bracket",
    "Context", "Monomial", "Polynomial", "size",
]
