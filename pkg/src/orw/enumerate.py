"""Enumeration and uniform random sampling of monomials by size."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, Sequence

from .terms import HOLE, Bracket, Context, Monomial, hole_count

CACHE_LIMIT = 6


class MonomialSpace:
    """All monomials over fixed generators and operators, graded by size."""

    def __init__(self, gens: Sequence[str], ops: Sequence[str], cache_limit: int = CACHE_LIMIT):
        self.gens = tuple(gens)
        self.ops = tuple(ops)
        self.cache_limit = cache_limit
        self._cache: dict[int, list[Monomial]] = {0: [Monomial()]}
        self.count = lru_cache(maxsize=None)(self._count)
        self.atom_count = lru_cache(maxsize=None)(self._atom_count)

    # -- counting
    def _atom_count(self, s: int) -> int:
        if s == 1:
            return len(self.gens) + len(self.ops)
        return len(self.ops) * self.count(s - 1)

    def _count(self, n: int) -> int:
        if n == 0:
            return 1
        return sum(self.atom_count(k) * self.count(n - k) for k in range(1, n + 1))

    # -- enumeration
    def atoms(self, s: int) -> Iterator:
        if s == 1:
            yield from self.gens
            for o in self.ops:
                yield Bracket(o, Monomial())
            return
        for m in self.of_size(s - 1):
            for o in self.ops:
                yield Bracket(o, m)

    def of_size(self, n: int) -> Iterator[Monomial]:
        """All monomials of size exactly ``n``."""
        if n in self._cache:
            return iter(self._cache[n])
        if n <= self.cache_limit:
            self._cache[n] = list(self._gen(n))
            return iter(self._cache[n])
        return self._gen(n)

    def _gen(self, n: int) -> Iterator[Monomial]:
        for k in range(1, n + 1):
            rest_size = n - k
            cached_rest = rest_size <= self.cache_limit
            rest_list = list(self.of_size(rest_size)) if cached_rest else None
            for a in self.atoms(k):
                head = (a,)
                rest = rest_list if cached_rest else self.of_size(rest_size)
                for r in rest:
                    yield Monomial(head + r)

    def up_to(self, n: int, start: int = 0) -> Iterator[Monomial]:
        for s in range(start, n + 1):
            yield from self.of_size(s)

    # -- sampling
    def random(self, n: int, rng: random.Random) -> Monomial:
        """A uniformly random monomial of size ``n``."""
        out = []
        while n > 0:
            r = rng.randrange(self.count(n))
            for k in range(1, n + 1):
                w = self.atom_count(k) * self.count(n - k)
                if r < w:
                    break
                r -= w
            out.append(self.random_atom(k, rng))
            n -= k
        return Monomial(out)

    def random_atom(self, s: int, rng: random.Random):
        if s == 1:
            i = rng.randrange(len(self.gens) + len(self.ops))
            if i < len(self.gens):
                return self.gens[i]
            return Bracket(self.ops[i - len(self.gens)], Monomial())
        return Bracket(rng.choice(self.ops), self.random(s - 1, rng))


def contexts_up_to(gens: Sequence[str], ops: Sequence[str], n: int) -> Iterator[Context]:
    """All one-hole contexts of size at most ``n`` (the hole counts as one)."""
    marker = "\x00hole"
    space = MonomialSpace(tuple(gens) + (marker,), ops)
    for m in space.up_to(n, 1):
        c = _mark_to_hole(m, marker)
        if hole_count(c) == 1:
            yield Context(c)


def _mark_to_hole(m, marker) -> Monomial:
    out = []
    for a in m:
        if a == marker:
            out.append(HOLE)
        elif a.__class__ is Bracket:
            out.append(Bracket(a[0], _mark_to_hole(a[1], marker)))
        else:
            out.append(a)
    return Monomial(out)
