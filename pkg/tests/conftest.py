import functools

import pytest

from orw.presets import load_preset
from orw.syntax import parse_monomial, parse_polynomial


@functools.lru_cache(maxsize=None)
def preset(name, gens=("x",), lam=1):
    return load_preset(name, gens, lam)


def mono(text, gens=("x", "y", "z"), ops=("D", "P", "B")):
    return parse_monomial(text, gens, ops)


def poly(text, gens=("x", "y", "z"), ops=("D", "P", "B"), lam=1):
    return parse_polynomial(text, gens, ops, lam)


@pytest.fixture
def xp():
    return preset("XP", ("x", "y"))
