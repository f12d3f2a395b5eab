"""AST for regular expressions with counting and interleaving.

All nodes are immutable and hashable; trees can be shared freely between
threads. Symbols are plain strings. A ``Sym`` leaf may additionally carry
a position id (see :mod:`dretools.marking`); two leaves with the same name
but different positions compare unequal.

``Star``, ``Plus`` and ``Optional`` are primitive node kinds and are never
rewritten into ``Count`` or vice versa: the subclass taxonomy and the
nesting-depth metric depend on the distinction.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator


class RegexError(Exception):
    """Base class for errors raised by this package."""


class InvalidBoundsError(RegexError):
    """Counter bounds must satisfy 0 <= lo <= hi and hi >= 1."""


@dataclass(frozen=True, slots=True)
class CountBounds:
    """Repetition bounds ``[lo, hi]``; ``hi=None`` means unbounded."""

    lo: int
    hi: int | None

    def __post_init__(self) -> None:
        if self.lo < 0:
            raise InvalidBoundsError(f"lower bound {self.lo} is negative")
        if self.hi is not None:
            if self.hi < 1:
                raise InvalidBoundsError(f"upper bound {self.hi} must be at least 1")
            if self.lo > self.hi:
                raise InvalidBoundsError(
                    f"lower bound {self.lo} exceeds upper bound {self.hi}"
                )


class Regex:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Empty(Regex):
    """The empty language."""


@dataclass(frozen=True, slots=True)
class Epsilon(Regex):
    """The language containing only the empty word."""


@dataclass(frozen=True, slots=True)
class Sym(Regex):
    """A single symbol occurrence; ``pos`` is set only on marked trees."""

    name: str
    pos: int | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("symbol name must be non-empty")


@dataclass(frozen=True, slots=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True, slots=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True, slots=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True, slots=True)
class Plus(Regex):
    inner: Regex


@dataclass(frozen=True, slots=True)
class Optional(Regex):
    inner: Regex


@dataclass(frozen=True, slots=True)
class Count(Regex):
    inner: Regex
    bounds: CountBounds


@dataclass(frozen=True, slots=True)
class Interleave(Regex):
    left: Regex
    right: Regex


EMPTY = Empty()
EPSILON = Epsilon()


def children(r: Regex) -> tuple[Regex, ...]:
    if isinstance(r, (Union, Concat, Interleave)):
        return (r.left, r.right)
    if isinstance(r, (Star, Plus, Optional)):
        return (r.inner,)
    if isinstance(r, Count):
        return (r.inner,)
    return ()


def walk(r: Regex) -> Iterator[Regex]:
    """Preorder traversal; children left to right."""
    stack = [r]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def leaves(r: Regex) -> Iterator[Sym]:
    """Symbol occurrences in left-to-right order."""
    for node in walk(r):
        if isinstance(node, Sym):
            yield node


def symbols(r: Regex) -> Counter[str]:
    """Multiset of leaf symbols. Counting does not multiply occurrences."""
    return Counter(s.name for s in leaves(r))


def ast_size(r: Regex) -> int:
    return sum(1 for _ in walk(r))


def nullable(r: Regex) -> bool:
    """True iff the empty word belongs to the language of ``r``."""
    if isinstance(r, Epsilon):
        return True
    if isinstance(r, (Empty, Sym)):
        return False
    if isinstance(r, Union):
        return nullable(r.left) or nullable(r.right)
    if isinstance(r, (Concat, Interleave)):
        return nullable(r.left) and nullable(r.right)
    if isinstance(r, (Star, Optional)):
        return True
    if isinstance(r, Plus):
        return nullable(r.inner)
    if isinstance(r, Count):
        return r.bounds.lo == 0 or nullable(r.inner)
    raise TypeError(f"not a Regex node: {r!r}")


def map_syms(r: Regex, fn: Callable[[Sym], Sym]) -> Regex:
    """Rebuild ``r`` with every leaf replaced by ``fn(leaf)``."""
    if isinstance(r, Sym):
        return fn(r)
    if isinstance(r, (Empty, Epsilon)):
        return r
    if isinstance(r, Union):
        return Union(map_syms(r.left, fn), map_syms(r.right, fn))
    if isinstance(r, Concat):
        return Concat(map_syms(r.left, fn), map_syms(r.right, fn))
    if isinstance(r, Interleave):
        return Interleave(map_syms(r.left, fn), map_syms(r.right, fn))
    if isinstance(r, Star):
        return Star(map_syms(r.inner, fn))
    if isinstance(r, Plus):
        return Plus(map_syms(r.inner, fn))
    if isinstance(r, Optional):
        return Optional(map_syms(r.inner, fn))
    if isinstance(r, Count):
        return Count(map_syms(r.inner, fn), r.bounds)
    raise TypeError(f"not a Regex node: {r!r}")


def rename_symbols(r: Regex, mapping: dict[str, str]) -> Regex:
    """Apply a simultaneous symbol renaming; names absent from the mapping stay."""
    return map_syms(r, lambda s: Sym(mapping.get(s.name, s.name), s.pos))
