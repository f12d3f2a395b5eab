"""Bounded language enumeration, mainly as oracle support for tests.

Words are tuples of symbol names (position ids on marked leaves are
ignored; rename leaves first if marked words are needed). Interleaving
enumerates every way of merging the operand words; an unbounded counter
contributes only the unfoldings reachable within the length budget.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ast import (
    Concat,
    Count,
    Empty,
    Epsilon,
    Interleave,
    Optional,
    Plus,
    Regex,
    Star,
    Sym,
    Union,
)

Word = tuple[str, ...]


def shortlex_key(word: Word) -> tuple[int, Word]:
    return (len(word), word)


@dataclass(frozen=True)
class LanguageSample:
    """Words of length <= the requested bound; ``truncated`` flags overflow.

    When ``truncated`` is False the sample is exactly the bounded language;
    otherwise it is a subset capped near the word budget.
    """

    words: frozenset[Word]
    truncated: bool


@lru_cache(maxsize=65536)
def _shuffles(u: Word, v: Word) -> frozenset[Word]:
    if not u:
        return frozenset({v})
    if not v:
        return frozenset({u})
    out = set()
    for w in _shuffles(u[1:], v):
        out.add((u[0],) + w)
    for w in _shuffles(u, v[1:]):
        out.add((v[0],) + w)
    return frozenset(out)


class _Enumerator:
    def __init__(self, max_len: int, cap: int):
        self.max_len = max_len
        self.cap = cap
        self.truncated = False

    def limit(self, words: set[Word]) -> set[Word]:
        if len(words) > self.cap:
            self.truncated = True
            return set(sorted(words, key=shortlex_key)[: self.cap])
        return words

    def concat(self, xs: set[Word], ys: set[Word]) -> set[Word]:
        out = set()
        for x in xs:
            room = self.max_len - len(x)
            for y in ys:
                if len(y) <= room:
                    out.add(x + y)
        return self.limit(out)

    def close_star(self, base: set[Word], step: set[Word]) -> set[Word]:
        """Smallest superset of ``base`` closed under appending ``step`` words."""
        out = set(base)
        frontier = set(base)
        while frontier and not self.truncated:
            grown = self.concat(frontier, step)
            frontier = grown - out
            out |= frontier
            out = self.limit(out)
        return out

    def enum(self, r: Regex) -> set[Word]:
        if isinstance(r, Empty):
            return set()
        if isinstance(r, Epsilon):
            return {()}
        if isinstance(r, Sym):
            return {(r.name,)} if self.max_len >= 1 else set()
        if isinstance(r, Union):
            return self.limit(self.enum(r.left) | self.enum(r.right))
        if isinstance(r, Concat):
            return self.concat(self.enum(r.left), self.enum(r.right))
        if isinstance(r, Star):
            return self.close_star({()}, self.enum(r.inner))
        if isinstance(r, Plus):
            inner = self.enum(r.inner)
            return self.close_star(set(inner), inner)
        if isinstance(r, Optional):
            return self.limit(self.enum(r.inner) | {()})
        if isinstance(r, Count):
            inner = self.enum(r.inner)
            acc: set[Word] = {()}
            for _ in range(r.bounds.lo):
                acc = self.concat(acc, inner)
                if not acc:
                    return set()
            if r.bounds.hi is None:
                return self.close_star(acc, inner)
            out = set(acc)
            for _ in range(r.bounds.hi - r.bounds.lo):
                acc = self.concat(acc, inner)
                if not acc:
                    break
                out |= acc
                out = self.limit(out)
            return out
        if isinstance(r, Interleave):
            out = set()
            for u in self.enum(r.left):
                room = self.max_len - len(u)
                for v in self.enum(r.right):
                    if len(v) <= room:
                        out |= _shuffles(u, v)
            return self.limit(out)
        raise TypeError(f"not a Regex node: {r!r}")


def enumerate_language(r: Regex, max_len: int, max_words: int = 100_000) -> LanguageSample:
    """All words of the language with length <= ``max_len``.

    The result is truncated to the shortlex-least ``max_words`` words when
    it would exceed the budget; the overflow is flagged, never an error.
    """
    if max_words < 1:
        raise ValueError("max_words must be positive")
    enumerator = _Enumerator(max_len, max(4 * max_words, 4096))
    words = enumerator.enum(r)
    truncated = enumerator.truncated
    if len(words) > max_words:
        truncated = True
        words = set(sorted(words, key=shortlex_key)[:max_words])
    return LanguageSample(frozenset(words), truncated)
