"""Exact brute-force determinism oracle, independent of the fast checker.

Builds an epsilon-NFA for the marked language by Thompson construction
(counters unfolded copy by copy, each copy keeping its source position
id; interleaving as a product of the operand epsilon-NFAs), trims it to
useful states, and determinizes by subset construction over the marked
alphabet. A clash is reported iff some reachable subset state has two
outgoing marked symbols that agree after unmarking. Every reachable
subset state corresponds to a realizable prefix, so the check matches
the marked-word definition exactly.

Intended for test-scale inputs only; preconditions guard the unfolding.
Witness tie-breaking matches the fast checker (shortest prefix,
position-lexicographic, then the smallest position pair), so the two
routes agree on witnesses as well as verdicts.
"""
from __future__ import annotations

from collections import deque

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
    ast_size,
    walk,
)
from .determinism import (
    DEFAULT_STATE_CEILING,
    DeterminismVerdict,
    UndecidedResourceError,
    Witness,
)
from .marking import mark

MAX_ORACLE_BOUND = 8
MAX_ORACLE_SIZE = 32


class _Nfa:
    """Epsilon-NFA with a single start state; accepts may be any state set."""

    __slots__ = ("n", "eps", "sym", "start", "accepts")

    def __init__(self, n, eps, sym, start, accepts):
        self.n = n
        self.eps = eps  # list[set[int]]
        self.sym = sym  # list[dict[label, set[int]]]
        self.start = start
        self.accepts = accepts


def _shift_nfa(a: _Nfa, offset: int) -> _Nfa:
    eps = [{t + offset for t in s} for s in a.eps]
    sym = [
        {lbl: {t + offset for t in tgts} for lbl, tgts in row.items()} for row in a.sym
    ]
    return _Nfa(a.n, eps, sym, a.start + offset, {t + offset for t in a.accepts})


class _ThompsonBuilder:
    def _fresh(self, count: int) -> _Nfa:
        return _Nfa(count, [set() for _ in range(count)],
                    [dict() for _ in range(count)], 0, set())

    def symbol(self, label: int) -> _Nfa:
        nfa = self._fresh(2)
        nfa.sym[0][label] = {1}
        nfa.accepts = {1}
        return nfa

    def epsilon(self) -> _Nfa:
        nfa = self._fresh(1)
        nfa.accepts = {0}
        return nfa

    def empty(self) -> _Nfa:
        return self._fresh(1)

    def _absorb(self, parts: list[_Nfa]) -> tuple[_Nfa, list[_Nfa]]:
        """Concatenate the state spaces; returns the container and shifted parts."""
        total = sum(p.n for p in parts)
        container = self._fresh(total)
        shifted = []
        offset = 0
        for part in parts:
            moved = _shift_nfa(part, offset)
            for s in range(part.n):
                container.eps[offset + s] = moved.eps[s]
                container.sym[offset + s] = moved.sym[s]
            shifted.append(moved)
            offset += part.n
        return container, shifted

    def union(self, a: _Nfa, b: _Nfa) -> _Nfa:
        container = self._fresh(a.n + b.n + 1)
        sa = _shift_nfa(a, 1)
        sb = _shift_nfa(b, 1 + a.n)
        for s in range(a.n):
            container.eps[1 + s] = sa.eps[s]
            container.sym[1 + s] = sa.sym[s]
        for s in range(b.n):
            container.eps[1 + a.n + s] = sb.eps[s]
            container.sym[1 + a.n + s] = sb.sym[s]
        container.eps[0] = {sa.start, sb.start}
        container.accepts = sa.accepts | sb.accepts
        return container

    def concat(self, a: _Nfa, b: _Nfa) -> _Nfa:
        container, (sa, sb) = self._absorb([a, b])
        for q in sa.accepts:
            container.eps[q].add(sb.start)
        container.start = sa.start
        container.accepts = set(sb.accepts)
        return container

    def star(self, a: _Nfa) -> _Nfa:
        total = a.n + 1
        container = self._fresh(total)
        sa = _shift_nfa(a, 1)
        for s in range(a.n):
            container.eps[1 + s] = sa.eps[s]
            container.sym[1 + s] = sa.sym[s]
        container.eps[0].add(sa.start)
        for q in sa.accepts:
            container.eps[q].add(sa.start)
        container.accepts = sa.accepts | {0}
        return container

    def plus(self, a: _Nfa) -> _Nfa:
        container = self.star(a)
        container.accepts = container.accepts - {0}
        if a.start in a.accepts:
            container.accepts.add(0)
        return container

    def optional(self, a: _Nfa) -> _Nfa:
        container, (sa, _sb) = self._absorb([a, self.epsilon()])
        container.start = sa.start
        container.accepts = sa.accepts | {sa.start}
        return container

    def interleave(self, a: _Nfa, b: _Nfa) -> _Nfa:
        n = a.n * b.n
        nfa = self._fresh(n)
        for p in range(a.n):
            base = p * b.n
            for q in range(b.n):
                state = base + q
                nfa.eps[state] = {t * b.n + q for t in a.eps[p]}
                nfa.eps[state] |= {base + t for t in b.eps[q]}
                row = nfa.sym[state]
                for lbl, tgts in a.sym[p].items():
                    row.setdefault(lbl, set()).update(t * b.n + q for t in tgts)
                for lbl, tgts in b.sym[q].items():
                    row.setdefault(lbl, set()).update(base + t for t in tgts)
        nfa.start = a.start * b.n + b.start
        nfa.accepts = {
            p * b.n + q for p in a.accepts for q in b.accepts
        }
        return nfa

    def build(self, node: Regex) -> _Nfa:
        if isinstance(node, Sym):
            if node.pos is None:
                raise ValueError("oracle requires a marked tree")
            return self.symbol(node.pos)
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
            nfa = self.epsilon()
            for _ in range(lo):
                nfa = self.concat(nfa, self.build(node.inner))
            if hi is None:
                return self.concat(nfa, self.star(self.build(node.inner)))
            for _ in range(hi - lo):
                nfa = self.concat(nfa, self.optional(self.build(node.inner)))
            return nfa
        raise TypeError(f"not a Regex node: {node!r}")


def _closures(nfa: _Nfa) -> list[set[int]]:
    closures = [set() for _ in range(nfa.n)]
    for s in range(nfa.n):
        seen = {s}
        stack = [s]
        while stack:
            q = stack.pop()
            for t in nfa.eps[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        closures[s] = seen
    return closures


def _useful(nfa: _Nfa) -> set[int]:
    forward = {nfa.start}
    queue = deque([nfa.start])
    while queue:
        s = queue.popleft()
        nxt = set(nfa.eps[s])
        for tgts in nfa.sym[s].values():
            nxt |= tgts
        for t in nxt:
            if t not in forward:
                forward.add(t)
                queue.append(t)
    reverse: list[set[int]] = [set() for _ in range(nfa.n)]
    for s in range(nfa.n):
        for t in nfa.eps[s]:
            reverse[t].add(s)
        for tgts in nfa.sym[s].values():
            for t in tgts:
                reverse[t].add(s)
    backward = set(nfa.accepts)
    queue = deque(backward)
    while queue:
        s = queue.popleft()
        for p in reverse[s]:
            if p not in backward:
                backward.add(p)
                queue.append(p)
    return forward & backward


def _precheck(r: Regex) -> None:
    if ast_size(r) > MAX_ORACLE_SIZE:
        raise ValueError(f"oracle supports AST size <= {MAX_ORACLE_SIZE}")
    for node in walk(r):
        if isinstance(node, Count):
            if node.bounds.lo > MAX_ORACLE_BOUND or (
                node.bounds.hi is not None and node.bounds.hi > MAX_ORACLE_BOUND
            ):
                raise ValueError(
                    f"oracle supports finite counter bounds <= {MAX_ORACLE_BOUND}"
                )


def oracle_is_deterministic(
    r: Regex,
    len_limit: int | None = None,
    *,
    state_ceiling: int = DEFAULT_STATE_CEILING,
) -> DeterminismVerdict:
    """Exact determinism verdict by exhaustive subset search.

    Preconditions: finite counter bounds <= 8 and AST size <= 32; raises
    ``ValueError`` otherwise. ``len_limit`` optionally caps the explored
    prefix depth, in which case a "deterministic" verdict only covers
    clashes reachable within that many symbols.
    """
    _precheck(r)
    m = mark(r)
    symbol_of = m.symbol_table()
    nfa = _ThompsonBuilder().build(m.tree)
    useful = _useful(nfa)
    if nfa.start not in useful:
        return DeterminismVerdict(True, None, "oracle")
    closures = _closures(nfa)
    index = {s: i for i, s in enumerate(sorted(useful))}

    def close_mask(states: set[int]) -> int:
        mask = 0
        for s in states:
            for t in closures[s]:
                if t in useful:
                    mask |= 1 << index[t]
        return mask

    move: list[dict[int, set[int]]] = [dict() for _ in index]
    for s in useful:
        row = move[index[s]]
        for lbl, tgts in nfa.sym[s].items():
            live = {t for t in tgts if t in useful}
            if live:
                row[lbl] = live

    start = close_mask({nfa.start})
    parents: dict[int, tuple[int, int] | None] = {start: None}
    depths = {start: 0}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        targets_by_label: dict[int, set[int]] = {}
        remaining = subset
        while remaining:
            bit = remaining & -remaining
            remaining ^= bit
            for lbl, tgts in move[bit.bit_length() - 1].items():
                targets_by_label.setdefault(lbl, set()).update(tgts)
        by_symbol: dict[str, list[int]] = {}
        for lbl in targets_by_label:
            by_symbol.setdefault(symbol_of[lbl], []).append(lbl)
        best: tuple[int, int] | None = None
        for labels in by_symbol.values():
            if len(labels) >= 2:
                labels.sort()
                pair = (labels[0], labels[1])
                if best is None or pair < best:
                    best = pair
        if best is not None:
            prefix: list[int] = []
            cursor = subset
            while parents[cursor] is not None:
                cursor, lbl = parents[cursor]
                prefix.append(lbl)
            prefix.reverse()
            witness = Witness(
                prefix=tuple(prefix),
                prefix_symbols=tuple(symbol_of[p] for p in prefix),
                pos_x=best[0],
                pos_y=best[1],
                symbol=symbol_of[best[0]],
            )
            return DeterminismVerdict(False, witness, "oracle")
        if len_limit is not None and depths[subset] >= len_limit:
            continue
        for lbl in sorted(targets_by_label):
            target = close_mask(targets_by_label[lbl])
            if target not in parents:
                if len(parents) >= state_ceiling:
                    raise UndecidedResourceError(
                        f"oracle subset construction exceeded {state_ceiling} states"
                    )
                parents[target] = (subset, lbl)
                depths[target] = depths[subset] + 1
                queue.append(target)
    return DeterminismVerdict(True, None, "oracle")
