"""Registry of set-inclusion results verified by exhaustive enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from ._core import Limits, Mode
from .domination import stability_sets
from .errors import ConfigInvalid
from .model import Market, Matching, enumerate_matchings

Sets = dict[str, list[Matching]]
Expr = Callable[[Sets], list[Matching]]


class TheoremStatus(Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    NOT_APPLICABLE = "NOT-APPLICABLE"


@dataclass(frozen=True)
class Theorem:
    """One verifiable set relation between stability notions."""

    id: str
    mode: Mode | None  # None = applies in both modes
    statement: str
    relation: str  # "subset" | "equal"
    lhs: Expr
    rhs: Expr

    def applies_to(self, mode: Mode) -> bool:
        return self.mode is None or self.mode is mode


@dataclass(frozen=True)
class TheoremResult:
    """Outcome of checking one theorem on one market's full enumeration."""

    theorem: Theorem
    status: TheoremStatus
    counterexamples: tuple[Matching, ...]
    strict_witness: Matching | None

    @property
    def holds(self) -> bool:
        return self.status is not TheoremStatus.FAILS


def _inter(*keys: str) -> Expr:
    def expr(sets: Sets) -> list[Matching]:
        base = sets[keys[0]]
        others = [set(sets[k]) for k in keys[1:]]
        return [m for m in base if all(m in o for o in others)]

    return expr


def _one(key: str) -> Expr:
    return lambda sets: sets[key]


THEOREMS: dict[str, Theorem] = {
    t.id: t
    for t in [
        Theorem(
            "qw-core-char",
            Mode.MANY_TO_ONE,
            "IR ∩ worker-quasi-core == worker-quasi-stable",
            "equal",
            _inter("I", "C_QW"),
            _one("QW"),
        ),
        Theorem(
            "qf-core-char",
            Mode.MANY_TO_ONE,
            "IR ∩ firm-quasi-core == firm-quasi-stable",
            "equal",
            _inter("I", "C_QF"),
            _one("QF"),
        ),
        Theorem(
            "core-is-stable",
            Mode.MANY_TO_ONE,
            "core == pairwise-stable set",
            "equal",
            _one("C"),
            _one("S"),
        ),
        Theorem(
            "core-in-quasi-cores",
            Mode.MANY_TO_ONE,
            "core ⊆ worker-quasi-core ∩ firm-quasi-core",
            "subset",
            _one("C"),
            _inter("C_QW", "C_QF"),
        ),
        Theorem(
            "stable-in-quasi",
            None,
            "pairwise-stable ⊆ worker-quasi-stable ∩ firm-quasi-stable",
            "subset",
            _one("S"),
            _inter("QW", "QF"),
        ),
        Theorem(
            "qw-in-ir-core",
            Mode.MANY_TO_MANY,
            "worker-quasi-stable ⊆ IR ∩ worker-quasi-core",
            "subset",
            _one("QW"),
            _inter("I", "C_QW"),
        ),
        Theorem(
            "qf-in-ir-core",
            Mode.MANY_TO_MANY,
            "firm-quasi-stable ⊆ IR ∩ firm-quasi-core",
            "subset",
            _one("QF"),
            _inter("I", "C_QF"),
        ),
        Theorem(
            "sw-qw-char",
            Mode.MANY_TO_MANY,
            "worker-quasi-setwise-stable == worker-quasi-stable",
            "equal",
            _one("SW_QW"),
            _one("QW"),
        ),
        Theorem(
            "sw-qf-char",
            Mode.MANY_TO_MANY,
            "firm-quasi-setwise-stable == firm-quasi-stable",
            "equal",
            _one("SW_QF"),
            _one("QF"),
        ),
        Theorem(
            "sw-in-core",
            Mode.MANY_TO_MANY,
            "setwise-stable ⊆ core",
            "subset",
            _one("SW"),
            _one("C"),
        ),
        Theorem(
            "double-quasi-core",
            Mode.MANY_TO_MANY,
            "worker- and firm-quasi-stable core matchings are pairwise stable",
            "subset",
            _inter("QW", "QF", "C"),
            _one("S"),
        ),
    ]
}


def theorem_ids(selector: str = "all") -> list[str]:
    """Resolve 'all' | 'm21' | 'm2m' | comma-separated ids to registry ids."""
    if selector == "all":
        return list(THEOREMS)
    if selector == "m21":
        return [t.id for t in THEOREMS.values() if t.applies_to(Mode.MANY_TO_ONE)]
    if selector == "m2m":
        return [t.id for t in THEOREMS.values() if t.applies_to(Mode.MANY_TO_MANY)]
    ids = [s.strip() for s in selector.split(",") if s.strip()]
    for tid in ids:
        if tid not in THEOREMS:
            raise ConfigInvalid(
                f"unknown theorem id {tid!r}; known: {', '.join(THEOREMS)}"
            )
    return ids


def check_theorem(
    theorem: Theorem, market: Market, sets: Sets, universe: list[Matching]
) -> TheoremResult:
    if not theorem.applies_to(market.mode):
        return TheoremResult(theorem, TheoremStatus.NOT_APPLICABLE, (), None)
    lhs = theorem.lhs(sets)
    rhs = theorem.rhs(sets)
    lset, rset = set(lhs), set(rhs)
    if theorem.relation == "equal":
        bad = [m for m in universe if (m in lset) != (m in rset)]
        strict = None
    else:
        bad = [m for m in lhs if m not in rset]
        strict = next((m for m in rhs if m not in lset), None)
    status = TheoremStatus.HOLDS if not bad else TheoremStatus.FAILS
    return TheoremResult(theorem, status, tuple(bad), strict)


def verify_market(
    market: Market, ids: list[str] | None = None, limits: Limits | None = None
) -> list[TheoremResult]:
    """Check the selected theorems against one market's full enumeration."""
    chosen = ids if ids is not None else list(THEOREMS)
    sets = stability_sets(market, limits)
    universe = enumerate_matchings(market, limits)
    return [check_theorem(THEOREMS[tid], market, sets, universe) for tid in chosen]
