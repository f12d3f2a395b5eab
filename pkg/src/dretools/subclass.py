"""Subclass taxonomy for deterministic-expression analysis.

An expression is *standard* when it uses no counting and no interleaving.
A single-occurrence expression (SORE) is a standard expression in which
every symbol occurs at most once. A chain expression (here "simplified
chain") is a SORE of the form f1 ... fn where each factor is a
disjunction of bare symbols under at most one outer unary operator; the
extended variant also allows ``symbol+`` disjuncts. Failure reasons are
mutually exclusive and tested in a fixed order so corpus tables partition
exactly: nonstandard, then not a SORE, then a non-terminal disjunct, then
an operator inside a disjunct.

The "with counting / with interleaving" relaxations (``sore_w_c``,
``sore_w_i``, ``sore_w_ci``) keep the single-occurrence requirement but
forgive the named operator kinds when checking standardness.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    Concat,
    Count,
    Interleave,
    Optional,
    Plus,
    Regex,
    Star,
    Sym,
    Union,
    symbols,
    walk,
)

REASON_NONSTANDARD = "nonstandard"
REASON_NOT_A_SORE = "not_a_sore"
REASON_NOT_A_TERMINAL = "not_a_terminal_symbol"
REASON_UNARY_IN_FACTOR = "unary_operators_in_factor"
REASON_STAR_OPT_IN_FACTOR = "star_or_optional_in_factor"

KORE_MORE_THAN_7 = "more than 7"


def max_occurrences(r: Regex) -> int:
    """Largest multiplicity among leaf symbols; 0 when symbol-free."""
    counts = symbols(r)
    return max(counts.values()) if counts else 0


def k_ore_band(k: int) -> str:
    """Band label for the most-repeated-symbol count ``k``."""
    if k <= 1:
        return "SORE"
    if k <= 6:
        return f"{k}-ORE"
    return KORE_MORE_THAN_7


def _has_count(r: Regex) -> bool:
    return any(isinstance(n, Count) for n in walk(r))


def _has_interleave(r: Regex) -> bool:
    return any(isinstance(n, Interleave) for n in walk(r))


def is_standard(r: Regex) -> bool:
    """No counting and no interleaving operators anywhere."""
    return not _has_count(r) and not _has_interleave(r)


def is_sore(r: Regex) -> tuple[bool, str | None]:
    """Single-occurrence check; symbol-free expressions pass vacuously.

    On failure the reason is ``nonstandard`` when counting or interleaving
    is present (taking precedence), otherwise the occurrence band.
    """
    if not is_standard(r):
        return False, REASON_NONSTANDARD
    k = max_occurrences(r)
    if k <= 1:
        return True, None
    return False, k_ore_band(k)


def _concat_factors(r: Regex) -> list[Regex]:
    if isinstance(r, Concat):
        return _concat_factors(r.left) + _concat_factors(r.right)
    return [r]


def _union_disjuncts(r: Regex) -> list[Regex]:
    if isinstance(r, Union):
        return _union_disjuncts(r.left) + _union_disjuncts(r.right)
    return [r]


def _chain_check(r: Regex, extended: bool) -> tuple[bool, str | None]:
    sore_ok, sore_reason = is_sore(r)
    if not sore_ok:
        if sore_reason == REASON_NONSTANDARD:
            return False, REASON_NONSTANDARD
        return False, REASON_NOT_A_SORE
    operator_reason = (
        REASON_STAR_OPT_IN_FACTOR if extended else REASON_UNARY_IN_FACTOR
    )
    saw_non_terminal = False
    saw_operator = False
    for factor in _concat_factors(r):
        if isinstance(factor, (Star, Plus, Optional)):
            factor = factor.inner  # the single allowed outer operator
        for disjunct in _union_disjuncts(factor):
            if isinstance(disjunct, Sym):
                continue
            if extended and isinstance(disjunct, Plus) and isinstance(disjunct.inner, Sym):
                continue
            if extended:
                if isinstance(disjunct, (Star, Optional)):
                    saw_operator = True
                else:
                    saw_non_terminal = True
            else:
                if isinstance(disjunct, (Star, Plus, Optional)):
                    saw_operator = True
                else:
                    saw_non_terminal = True
    if saw_non_terminal:
        return False, REASON_NOT_A_TERMINAL
    if saw_operator:
        return False, operator_reason
    return True, None


def is_simplified_chare(r: Regex) -> tuple[bool, str | None]:
    """Chain of factors, each a disjunction of bare symbols under at most
    one outer ``? * +``."""
    return _chain_check(r, extended=False)


def is_esimplified_chare(r: Regex) -> tuple[bool, str | None]:
    """As the simplified chain, but a disjunct may also be ``symbol+``;
    only ``*`` and ``?`` inside a disjunct disqualify."""
    return _chain_check(r, extended=True)


@dataclass(frozen=True)
class SubclassReport:
    is_standard: bool
    max_occ: int
    k_ore: str
    sore: bool
    sore_fail_reason: str | None
    simplified_chare: bool
    schare_fail_reason: str | None
    esimplified_chare: bool
    eschare_fail_reason: str | None
    sore_w_c: bool
    sore_w_i: bool
    sore_w_ci: bool

    def to_record(self) -> dict:
        """Flat record keyed by the corpus-table row names."""
        sore_rows = {
            "SOREs": self.sore,
            "SOREs: nonstandard expression": self.sore_fail_reason == REASON_NONSTANDARD,
        }
        for k in range(2, 7):
            sore_rows[f"SOREs: {k}-OREs"] = self.sore_fail_reason == f"{k}-ORE"
        sore_rows["SOREs: more than 7"] = self.sore_fail_reason == KORE_MORE_THAN_7
        return {
            **sore_rows,
            "Simplified CHAREs": self.simplified_chare,
            "Simplified CHAREs: not a SORE": self.schare_fail_reason == REASON_NOT_A_SORE,
            "Simplified CHAREs: not a terminal symbol":
                self.schare_fail_reason == REASON_NOT_A_TERMINAL,
            "Simplified CHAREs: occur unary operators":
                self.schare_fail_reason == REASON_UNARY_IN_FACTOR,
            "Simplified CHAREs: nonstandard expression":
                self.schare_fail_reason == REASON_NONSTANDARD,
            "eSimplified CHAREs": self.esimplified_chare,
            "eSimplified CHAREs: not a SORE": self.eschare_fail_reason == REASON_NOT_A_SORE,
            "eSimplified CHAREs: not a terminal symbol":
                self.eschare_fail_reason == REASON_NOT_A_TERMINAL,
            "eSimplified CHAREs: the unary operator *or?":
                self.eschare_fail_reason == REASON_STAR_OPT_IN_FACTOR,
            "eSimplified CHAREs: nonstandard expression":
                self.eschare_fail_reason == REASON_NONSTANDARD,
            "SOREwC": self.sore_w_c,
            "SOREwI": self.sore_w_i,
            "SOREwCorI": self.sore_w_ci,
            "max occurrences": self.max_occ,
            "k-ORE band": self.k_ore,
        }


def classify(r: Regex) -> SubclassReport:
    """Populate every subclass flag and failure reason for one expression."""
    standard = is_standard(r)
    k = max_occurrences(r)
    single = k <= 1
    sore, sore_reason = is_sore(r)
    chare, chare_reason = is_simplified_chare(r)
    echare, echare_reason = is_esimplified_chare(r)
    return SubclassReport(
        is_standard=standard,
        max_occ=k,
        k_ore=k_ore_band(k),
        sore=sore,
        sore_fail_reason=sore_reason,
        simplified_chare=chare,
        schare_fail_reason=chare_reason,
        esimplified_chare=echare,
        eschare_fail_reason=echare_reason,
        sore_w_c=single and not _has_interleave(r),
        sore_w_i=single and not _has_count(r),
        sore_w_ci=single,
    )
