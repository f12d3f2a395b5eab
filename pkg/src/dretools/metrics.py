"""Structural complexity metrics for expressions and schemas.

Star height counts nested unbounded iteration: ``*`` and ``+`` add one,
``?`` adds nothing, and a counter adds one only when its upper bound is
unbounded (convention tag "star-height convention v1", recorded in run
manifests because the base definition covers only union, concatenation
and star). Nesting depth counts every unary operator layer. Schema
density is the mean number of symbol occurrences on rule right-hand
sides; operators do not count toward size.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

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
    leaves,
    walk,
)

if TYPE_CHECKING:
    from .schemadoc import SchemaDoc

STAR_HEIGHT_CONVENTION = "star-height convention v1"


def star_height(r: Regex) -> int:
    if isinstance(r, (Empty, Epsilon, Sym)):
        return 0
    if isinstance(r, (Union, Concat, Interleave)):
        return max(star_height(r.left), star_height(r.right))
    if isinstance(r, (Star, Plus)):
        return star_height(r.inner) + 1
    if isinstance(r, Optional):
        return star_height(r.inner)
    if isinstance(r, Count):
        bump = 1 if r.bounds.hi is None else 0
        return star_height(r.inner) + bump
    raise TypeError(f"not a Regex node: {r!r}")


def nesting_depth(r: Regex) -> int:
    if isinstance(r, (Empty, Epsilon, Sym)):
        return 0
    if isinstance(r, (Union, Concat, Interleave)):
        return max(nesting_depth(r.left), nesting_depth(r.right))
    if isinstance(r, (Star, Plus, Optional, Count)):
        return nesting_depth(r.inner) + 1
    raise TypeError(f"not a Regex node: {r!r}")


def nontrivial_counters(r: Regex) -> int:
    """Counters not expressible as ``* + ?``: lo >= 2, or a finite hi >= 2."""
    total = 0
    for node in walk(r):
        if isinstance(node, Count):
            if node.bounds.lo >= 2 or (
                node.bounds.hi is not None and node.bounds.hi >= 2
            ):
                total += 1
    return total


def interleave_count(r: Regex) -> int:
    return sum(1 for node in walk(r) if isinstance(node, Interleave))


@dataclass(frozen=True)
class ExprMetrics:
    star_height: int
    nesting_depth: int
    nontrivial_counters: int
    has_interleaving: bool
    interleave_count: int

    def to_record(self) -> dict:
        return {
            "star_height": self.star_height,
            "nesting_depth": self.nesting_depth,
            "nontrivial_counters": self.nontrivial_counters,
            "has_interleaving": self.has_interleaving,
            "interleave_count": self.interleave_count,
        }


def expr_metrics(r: Regex) -> ExprMetrics:
    ic = interleave_count(r)
    return ExprMetrics(
        star_height=star_height(r),
        nesting_depth=nesting_depth(r),
        nontrivial_counters=nontrivial_counters(r),
        has_interleaving=ic > 0,
        interleave_count=ic,
    )


def leaf_count(r: Regex) -> int:
    return sum(1 for _ in leaves(r))


def schema_density(doc: "SchemaDoc") -> Fraction:
    """Mean symbol-occurrence count over the schema's rules.

    Exact rational; raises ``ValueError`` on a schema without rules.
    """
    if not doc.rules:
        raise ValueError(f"schema {doc.source_path} has no rules; density undefined")
    total = sum(leaf_count(model) for model in doc.rules.values())
    return Fraction(total, len(doc.rules))


from .ast import Union  # noqa: E402  (late import keeps the operator list readable)
