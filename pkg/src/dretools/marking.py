"""Position marking: give every symbol occurrence a unique id.

Positions are globally unique ids 1..P assigned in left-to-right leaf
order, so two occurrences of the same symbol get distinct ids. Dropping
the ids reproduces the source tree exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ast import Regex, Sym, map_syms


@dataclass(frozen=True)
class MarkedRegex:
    """A tree whose leaves carry position ids, plus the id -> symbol table."""

    tree: Regex
    positions: tuple[tuple[int, str], ...]

    def symbol_of(self, pos: int) -> str:
        return dict(self.positions)[pos]

    def symbol_table(self) -> dict[int, str]:
        return dict(self.positions)


def mark(r: Regex) -> MarkedRegex:
    """Assign position ids 1..P in left-to-right leaf order."""
    table: list[tuple[int, str]] = []

    def assign(s: Sym) -> Sym:
        pos = len(table) + 1
        table.append((pos, s.name))
        return Sym(s.name, pos)

    tree = map_syms(r, assign)
    return MarkedRegex(tree, tuple(table))


def unmark(m: MarkedRegex | Regex) -> Regex:
    """Drop position ids; inverse of :func:`mark`."""
    tree = m.tree if isinstance(m, MarkedRegex) else m
    return map_syms(tree, lambda s: Sym(s.name))
