"""Determinism checking for expressions with counting and interleaving.

An expression is deterministic when, while matching a word left to right,
the next input symbol always matches at most one symbol occurrence of the
expression. Formally: no two marked words u x v and u y w of the marked
language share the prefix u and continue with distinct positions x != y
that carry the same symbol.

The checker builds an epsilon-free position automaton compositionally
(Berry-Sethi style): counters are unfolded inside the construction with
every copy keeping its source position id, and interleaving becomes a
product of the operand automata. The automaton is trimmed to useful
states and determinized by subset construction; the expression is
deterministic iff no reachable subset state has two outgoing positions
with the same underlying symbol. Counter bounds are clamped first
(:func:`clamp_counter_bounds`) so huge real-world counters never explode;
clamping preserves the verdict, and witnesses are recomputed against the
original expression whenever that is feasible.

Witness tie-breaking: the shortest clash prefix, position-lexicographic
among equals, then the smallest (pos_x, pos_y) pair.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .ast import (
    Concat,
    Count,
    CountBounds,
    Empty,
    Epsilon,
    Interleave,
    Optional,
    Plus,
    Regex,
    RegexError,
    Star,
    Sym,
    Union,
)
from .marking import MarkedRegex, mark

DEFAULT_STATE_CEILING = 10**6


class UndecidedResourceError(RegexError):
    """The automaton exceeded the configured state ceiling; no verdict."""


@dataclass(frozen=True)
class Witness:
    """Evidence of nondeterminism.

    After reading ``prefix`` (a word over the marked alphabet, given as
    position ids with their symbols alongside), the two distinct positions
    ``pos_x`` and ``pos_y`` both accept the same next ``symbol``, and both
    extensions complete to accepted marked words.
    """

    prefix: tuple[int, ...]
    prefix_symbols: tuple[str, ...]
    pos_x: int
    pos_y: int
    symbol: str

    def to_record(self) -> dict:
        return {
            "prefix": [
                {"pos": p, "symbol": s}
                for p, s in zip(self.prefix, self.prefix_symbols)
            ],
            "pos_x": self.pos_x,
            "pos_y": self.pos_y,
            "symbol": self.symbol,
        }


@dataclass(frozen=True)
class DeterminismVerdict:
    deterministic: bool
    witness: Witness | None
    method: str  # "compositional" or "oracle"
    clamped: bool = False

    def to_record(self) -> dict:
        record: dict = {
            "deterministic": self.deterministic,
            "method": self.method,
            "clamped": self.clamped,
        }
        if self.witness is not None:
            record["witness"] = self.witness.to_record()
        return record


def clamp_counter_bounds(r: Regex) -> Regex:
    """Shrink every counter to an equivalent small one for checking.

    lo' = min(lo, 2); hi' = lo' when hi == lo, otherwise max(lo' + 1, 2),
    with an unbounded hi going through the hi != lo branch. Verdict
    preservation is enforced by the property suite, not assumed.
    """
    if isinstance(r, Count):
        inner = clamp_counter_bounds(r.inner)
        lo = min(r.bounds.lo, 2)
        if r.bounds.hi is not None and r.bounds.hi == r.bounds.lo:
            hi = lo
        else:
            hi = max(lo + 1, 2)
        return Count(inner, CountBounds(lo, hi))
    if isinstance(r, Union):
        return Union(clamp_counter_bounds(r.left), clamp_counter_bounds(r.right))
    if isinstance(r, Concat):
        return Concat(clamp_counter_bounds(r.left), clamp_counter_bounds(r.right))
    if isinstance(r, Interleave):
        return Interleave(clamp_counter_bounds(r.left), clamp_counter_bounds(r.right))
    if isinstance(r, Star):
        return Star(clamp_counter_bounds(r.inner))
    if isinstance(r, Plus):
        return Plus(clamp_counter_bounds(r.inner))
    if isinstance(r, Optional):
        return Optional(clamp_counter_bounds(r.inner))
    return r


class FirstFollow(NamedTuple):
    first: frozenset[int]
    follow: dict[int, frozenset[int]]
    last: frozenset[int]
    nullable: bool


def first_follow(m: MarkedRegex) -> FirstFollow:
    """Inductive first/last/follow sets over positions.

    A counter contributes its inner first set to the follow of its inner
    last positions when it can iterate (upper bound >= 2 or unbounded).
    Interleaving is deliberately not folded into the follow relation: its
    operands are analyzed independently, and :func:`is_deterministic`
    handles the shuffle with a product construction instead.
    """
    follow: dict[int, set[int]] = {p: set() for p, _ in m.positions}

    def go(node: Regex) -> tuple[frozenset[int], frozenset[int], bool]:
        if isinstance(node, Sym):
            ps = frozenset({node.pos})
            return ps, ps, False
        if isinstance(node, Epsilon):
            return frozenset(), frozenset(), True
        if isinstance(node, Empty):
            return frozenset(), frozenset(), False
        if isinstance(node, Union):
            f1, l1, n1 = go(node.left)
            f2, l2, n2 = go(node.right)
            return f1 | f2, l1 | l2, n1 or n2
        if isinstance(node, Concat):
            f1, l1, n1 = go(node.left)
            f2, l2, n2 = go(node.right)
            for q in l1:
                follow[q] |= f2
            first = f1 | f2 if n1 else f1
            last = l1 | l2 if n2 else l2
            return first, last, n1 and n2
        if isinstance(node, Interleave):
            f1, l1, n1 = go(node.left)
            f2, l2, n2 = go(node.right)
            return f1 | f2, l1 | l2, n1 and n2
        if isinstance(node, (Star, Plus)):
            f, l, n = go(node.inner)
            for q in l:
                follow[q] |= f
            return f, l, True if isinstance(node, Star) else n
        if isinstance(node, Optional):
            f, l, n = go(node.inner)
            return f, l, True
        if isinstance(node, Count):
            f, l, n = go(node.inner)
            if node.bounds.hi is None or node.bounds.hi >= 2:
                for q in l:
                    follow[q] |= f
            return f, l, node.bounds.lo == 0 or n
        raise TypeError(f"not a Regex node: {node!r}")

    first, last, nullable = go(m.tree)
    return FirstFollow(
        first, {p: frozenset(s) for p, s in follow.items()}, last, nullable
    )


class _Frag:
    """Epsilon-free NFA fragment; state 0 is the entry and has no in-edges."""

    __slots__ = ("n", "trans", "accepts")

    def __init__(self, n: int, trans: list[dict[int, set[int]]], accepts: set[int]):
        self.n = n
        self.trans = trans
        self.accepts = accepts


class _PositionNfaBuilder:
    def __init__(self, ceiling: int):
        self.ceiling = ceiling

    def check(self, n: int) -> None:
        if n > self.ceiling:
            raise UndecidedResourceError(
                f"position automaton would exceed {self.ceiling} states"
            )

    def sym(self, label: int) -> _Frag:
        return _Frag(2, [{label: {1}}, {}], {1})

    def epsilon(self) -> _Frag:
        return _Frag(1, [{}], {0})

    def empty(self) -> _Frag:
        return _Frag(1, [{}], set())

    @staticmethod
    def _shift(trans: dict[int, set[int]], offset: int) -> dict[int, set[int]]:
        return {lbl: {t + offset for t in tgts} for lbl, tgts in trans.items()}

    @staticmethod
    def _merge_into(dst: dict[int, set[int]], src: dict[int, set[int]]) -> None:
        for lbl, tgts in src.items():
            dst.setdefault(lbl, set()).update(tgts)

    def union(self, a: _Frag, b: _Frag) -> _Frag:
        n = a.n + b.n - 1
        self.check(n)
        offset = a.n - 1
        trans: list[dict[int, set[int]]] = [dict() for _ in range(n)]
        self._merge_into(trans[0], a.trans[0])
        self._merge_into(trans[0], self._shift(b.trans[0], offset))
        for s in range(1, a.n):
            trans[s] = {lbl: set(t) for lbl, t in a.trans[s].items()}
        for s in range(1, b.n):
            trans[offset + s] = self._shift(b.trans[s], offset)
        accepts = {s for s in a.accepts if s != 0}
        accepts |= {offset + s for s in b.accepts if s != 0}
        if 0 in a.accepts or 0 in b.accepts:
            accepts.add(0)
        return _Frag(n, trans, accepts)

    def concat(self, a: _Frag, b: _Frag) -> _Frag:
        n = a.n + b.n - 1
        self.check(n)
        offset = a.n - 1
        b_entry = self._shift(b.trans[0], offset)
        trans: list[dict[int, set[int]]] = []
        for s in range(a.n):
            trans.append({lbl: set(t) for lbl, t in a.trans[s].items()})
        for s in range(1, b.n):
            trans.append(self._shift(b.trans[s], offset))
        for q in a.accepts:
            self._merge_into(trans[q], b_entry)
        accepts = {offset + s for s in b.accepts if s != 0}
        if 0 in b.accepts:
            accepts |= a.accepts
        return _Frag(n, trans, accepts)

    def _loop_back(self, a: _Frag) -> list[dict[int, set[int]]]:
        entry = {lbl: set(t) for lbl, t in a.trans[0].items()}
        trans = [{lbl: set(t) for lbl, t in a.trans[s].items()} for s in range(a.n)]
        for q in a.accepts:
            if q != 0:
                self._merge_into(trans[q], entry)
        return trans

    def star(self, a: _Frag) -> _Frag:
        return _Frag(a.n, self._loop_back(a), a.accepts | {0})

    def plus(self, a: _Frag) -> _Frag:
        return _Frag(a.n, self._loop_back(a), set(a.accepts))

    def optional(self, a: _Frag) -> _Frag:
        return _Frag(a.n, a.trans, a.accepts | {0})

    def interleave(self, a: _Frag, b: _Frag) -> _Frag:
        n = a.n * b.n
        self.check(n)
        trans: list[dict[int, set[int]]] = [dict() for _ in range(n)]
        accepts: set[int] = set()
        for p in range(a.n):
            base = p * b.n
            for q in range(b.n):
                merged = trans[base + q]
                for lbl, tgts in a.trans[p].items():
                    merged.setdefault(lbl, set()).update(t * b.n + q for t in tgts)
                for lbl, tgts in b.trans[q].items():
                    merged.setdefault(lbl, set()).update(base + t for t in tgts)
                if p in a.accepts and q in b.accepts:
                    accepts.add(base + q)
        return _Frag(n, trans, accepts)

    def build(self, node: Regex) -> _Frag:
        if isinstance(node, Sym):
            if node.pos is None:
                raise ValueError("position automaton requires a marked tree")
            return self.sym(node.pos)
        if isinstance(node, Epsilon):
            return self.epsilon()
        if isinstance(node, Empty):
            return self.empty()
        if isinstance(node, Union):
            return self.union(self.build(node.left), self.build(node.right))
        if isinstance(node, Concat):
            return self.concat(self.build(node.left), self.build(node.right))
        if isinstance(node, Interleave):
            return self.interleave(self.build(node.left), self.build(node.right))
        if isinstance(node, Star):
            return self.star(self.build(node.inner))
        if isinstance(node, Plus):
            return self.plus(self.build(node.inner))
        if isinstance(node, Optional):
            return self.optional(self.build(node.inner))
        if isinstance(node, Count):
            lo, hi = node.bounds.lo, node.bounds.hi
            if hi is None:
                frag = self.star(self.build(node.inner))
                for _ in range(lo):
                    frag = self.concat(self.build(node.inner), frag)
                return frag
            frag = self.epsilon()
            for _ in range(lo):
                frag = self.concat(frag, self.build(node.inner))
            for _ in range(hi - lo):
                frag = self.concat(frag, self.optional(self.build(node.inner)))
            return frag
        raise TypeError(f"not a Regex node: {node!r}")


@dataclass(frozen=True)
class PositionAutomaton:
    """Glushkov-style automaton over the marked alphabet.

    Accepts exactly the marked language of the (possibly clamped and
    unfolded) expression it was built from; labels are position ids.
    State 0 is the start state and has no incoming transitions.
    """

    n_states: int
    transitions: tuple[tuple[int, int, int], ...]  # (source, label, target)
    accepting: frozenset[int]


def position_automaton(
    m: MarkedRegex, state_ceiling: int = DEFAULT_STATE_CEILING
) -> PositionAutomaton:
    frag = _PositionNfaBuilder(state_ceiling).build(m.tree)
    edges = []
    for src in range(frag.n):
        for lbl in sorted(frag.trans[src]):
            for dst in sorted(frag.trans[src][lbl]):
                edges.append((src, lbl, dst))
    return PositionAutomaton(frag.n, tuple(edges), frozenset(frag.accepts))


def _useful_states(frag: _Frag) -> set[int]:
    reachable = {0}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for tgts in frag.trans[s].values():
            for t in tgts:
                if t not in reachable:
                    reachable.add(t)
                    queue.append(t)
    reverse: dict[int, set[int]] = {s: set() for s in range(frag.n)}
    for s in range(frag.n):
        for tgts in frag.trans[s].values():
            for t in tgts:
                reverse[t].add(s)
    coacc = set(frag.accepts)
    queue = deque(coacc)
    while queue:
        s = queue.popleft()
        for p in reverse[s]:
            if p not in coacc:
                coacc.add(p)
                queue.append(p)
    return reachable & coacc


def _scan_clash(label_targets: dict[int, int], symbol_of: dict[int, str]):
    by_symbol: dict[str, list[int]] = {}
    for lbl in label_targets:
        by_symbol.setdefault(symbol_of[lbl], []).append(lbl)
    best: tuple[int, int] | None = None
    for labels in by_symbol.values():
        if len(labels) >= 2:
            labels.sort()
            pair = (labels[0], labels[1])
            if best is None or pair < best:
                best = pair
    return best


def _decide_frag(
    frag: _Frag, symbol_of: dict[int, str], state_ceiling: int
) -> tuple[bool, tuple[tuple[int, ...], int, int] | None]:
    useful = _useful_states(frag)
    if 0 not in useful:
        return True, None  # empty language: the condition is vacuous
    index = {s: i for i, s in enumerate(sorted(useful))}
    move: list[dict[int, int]] = [dict() for _ in index]
    for s in useful:
        row = move[index[s]]
        for lbl, tgts in frag.trans[s].items():
            mask = 0
            for t in tgts:
                if t in useful:
                    mask |= 1 << index[t]
            if mask:
                row[lbl] = mask
    start = 1 << index[0]
    parents: dict[int, tuple[int, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        label_targets: dict[int, int] = {}
        remaining = subset
        while remaining:
            bit = remaining & -remaining
            remaining ^= bit
            for lbl, mask in move[bit.bit_length() - 1].items():
                label_targets[lbl] = label_targets.get(lbl, 0) | mask
        clash = _scan_clash(label_targets, symbol_of)
        if clash is not None:
            prefix: list[int] = []
            cursor = subset
            while parents[cursor] is not None:
                cursor, lbl = parents[cursor]
                prefix.append(lbl)
            prefix.reverse()
            return False, (tuple(prefix), clash[0], clash[1])
        for lbl in sorted(label_targets):
            target = label_targets[lbl]
            if target not in parents:
                if len(parents) >= state_ceiling:
                    raise UndecidedResourceError(
                        f"subset construction exceeded {state_ceiling} states"
                    )
                parents[target] = (subset, lbl)
                queue.append(target)
    return True, None


def _check_marked(
    m: MarkedRegex, state_ceiling: int
) -> tuple[bool, Witness | None]:
    frag = _PositionNfaBuilder(state_ceiling).build(m.tree)
    symbol_of = m.symbol_table()
    det, clash = _decide_frag(frag, symbol_of, state_ceiling)
    if det:
        return True, None
    prefix, x, y = clash
    return False, Witness(
        prefix=prefix,
        prefix_symbols=tuple(symbol_of[p] for p in prefix),
        pos_x=x,
        pos_y=y,
        symbol=symbol_of[x],
    )


def is_deterministic(
    r: Regex, *, state_ceiling: int = DEFAULT_STATE_CEILING
) -> DeterminismVerdict:
    """Decide determinism for the full extended expression class.

    Counters are clamped before the automaton is built. A nondeterminism
    witness is recomputed against the unclamped expression when that fits
    under the state ceiling; ``clamped`` is True when the reported verdict
    or witness still refers to the clamped variant. Raises
    :class:`UndecidedResourceError` instead of guessing when the ceiling
    is exceeded.
    """
    clamped_r = clamp_counter_bounds(r)
    changed = clamped_r != r
    det, witness = _check_marked(mark(clamped_r), state_ceiling)
    if det:
        return DeterminismVerdict(True, None, "compositional", clamped=changed)
    if not changed:
        return DeterminismVerdict(False, witness, "compositional", clamped=False)
    try:
        det0, witness0 = _check_marked(mark(r), state_ceiling)
        return DeterminismVerdict(det0, witness0, "compositional", clamped=False)
    except UndecidedResourceError:
        return DeterminismVerdict(False, witness, "compositional", clamped=True)
