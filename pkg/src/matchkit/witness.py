"""Constructive translations: blocking structures to dominations and back."""

from __future__ import annotations

from dataclasses import dataclass

from ._core import Mode, Side, iter_bits
from .choice import set_of
from .errors import (
    ConstructionFailed,
    EmptyT,
    NotABlockingPair,
    PreconditionFailed,
    TNotInDesireSet,
)
from .domination import dominates, setwise_dominates
from .model import Coalition, Market, Matching
from .stability import (
    BlockingPair,
    _firm_desire_mask,
    _own,
    _pair_blocks,
    _worker_desire_mask,
    individually_rational,
    is_firm_quasi_stable,
    is_worker_quasi_stable,
)


@dataclass(frozen=True)
class ConstructionReport:
    """A constructed dominating matching with its coalition, already re-checked."""

    description: str
    matching: Matching
    coalition: Coalition
    verified: bool

    def render(self) -> str:
        tag = "verified" if self.verified else "UNVERIFIED"
        return f"{self.description}: {self.matching.render()} via {self.coalition.render()} [{tag}]"


def _drop_worker_elsewhere(fmasks: list[int], keep_firm: int, j: int) -> None:
    for i in range(len(fmasks)):
        if i != keep_firm:
            fmasks[i] &= ~(1 << j)


def domination_from_blocking_pair_m21(market: Market, matching: Matching, pair) -> ConstructionReport:
    """Turn a blocking pair of a many-to-one market into an explicit domination.

    The firm takes its choice from mu(f) plus the blocking worker; every chosen
    worker moves to that firm; the coalition is the firm with its new workers.
    """
    _own(market, matching)
    if market.mode is not Mode.MANY_TO_ONE:
        raise PreconditionFailed("this construction needs a many-to-one market")
    f, w = (market.agent(pair[0]), market.agent(pair[1]))
    if f.side is not Side.FIRM:
        f, w = w, f
    if not _pair_blocks(market, matching, f.index, w.index):
        raise NotABlockingPair(f"({f.label}, {w.label}) does not block this matching")

    chosen = market._ftab[f.index][matching.fmasks[f.index] | (1 << w.index)]
    fmasks = list(matching.fmasks)
    fmasks[f.index] = chosen
    for j in iter_bits(chosen):
        _drop_worker_elsewhere(fmasks, f.index, j)
    mu_p = Matching(market, tuple(fmasks))
    coalition = Coalition(
        frozenset({f}) | set_of(market.workers, chosen)
    )
    ok = dominates(market, mu_p, matching, coalition)
    if not ok:
        raise ConstructionFailed("blocking-pair construction failed its re-check")
    return ConstructionReport(
        f"domination from blocking pair ({f.label}, {w.label})", mu_p, coalition, True
    )


def domination_from_firm_block_m21(market: Market, matching: Matching, firm, T) -> ConstructionReport:
    """Turn a firm-side block (a set of workers preferring the firm) into a domination.

    T must be a nonempty set of workers who strictly prefer the firm to their
    current position; the firm takes its choice from mu(f) plus T.
    """
    _own(market, matching)
    if market.mode is not Mode.MANY_TO_ONE:
        raise PreconditionFailed("this construction needs a many-to-one market")
    f = market.agent(firm)
    t_mask = 0
    for x in T:
        t_mask |= 1 << market.agent(x).index
    if not t_mask:
        raise EmptyT("the blocking worker set must be nonempty")
    desire = _worker_desire_mask(market, matching, f.index)
    if t_mask & ~desire:
        extra = set_of(market.workers, t_mask & ~desire)
        raise TNotInDesireSet(
            f"{sorted(a.label for a in extra)} do not strictly prefer {f.label}"
        )

    chosen = market._ftab[f.index][matching.fmasks[f.index] | t_mask]
    if chosen == matching.fmasks[f.index]:
        raise ConstructionFailed(
            f"{f.label} rejects every worker of T; the construction returns the same matching"
        )
    fmasks = list(matching.fmasks)
    fmasks[f.index] = chosen
    for j in iter_bits(chosen):
        _drop_worker_elsewhere(fmasks, f.index, j)
    mu_p = Matching(market, tuple(fmasks))
    coalition = Coalition(frozenset({f}) | set_of(market.workers, chosen))
    ok = dominates(market, mu_p, matching, coalition)
    if not ok:
        raise ConstructionFailed("firm-block construction failed its re-check")
    labels = " ".join(a.label for a in sorted(set_of(market.workers, t_mask)))
    return ConstructionReport(
        f"domination from firm block ({f.label}; {{{labels}}})", mu_p, coalition, True
    )


def blocking_pair_from_quasi_core_violation_m21(
    market: Market, matching: Matching, dominating: Matching, coalition, worker
) -> BlockingPair:
    """Extract the blocking pair hiding inside a worker-quasi-core violation.

    Given a domination that moves a matched worker, her new firm blocks with
    her. Requires an individually rational many-to-one matching.
    """
    _own(market, matching)
    _own(market, dominating)
    if market.mode is not Mode.MANY_TO_ONE:
        raise PreconditionFailed("this extraction needs a many-to-one market")
    if not individually_rational(market, matching):
        raise PreconditionFailed("the dominated matching must be individually rational")
    if not isinstance(coalition, Coalition):
        coalition = Coalition.of(market, coalition)
    if not dominates(market, dominating, matching, coalition):
        raise PreconditionFailed("the given matching does not dominate via the coalition")
    w = market.agent(worker)
    if w not in coalition.members:
        raise PreconditionFailed(f"{w.label} is not in the coalition")
    old, new = matching.wmasks[w.index], dominating.wmasks[w.index]
    if new == old:
        raise PreconditionFailed(f"{w.label}'s assignment does not change")
    if not old:
        raise PreconditionFailed(f"{w.label} is unmatched; no quasi-core clause is violated")
    if not new:
        raise ConstructionFailed(f"{w.label} moved to the empty set against a rational position")
    f = market.firms[next(iter_bits(new))]
    if not _pair_blocks(market, matching, f.index, w.index):
        raise ConstructionFailed(f"extracted pair ({f.label}, {w.label}) failed its re-check")
    return BlockingPair(f, w)


def setwise_domination_from_qw_violation_m2m(
    market: Market, matching: Matching, worker, K
) -> ConstructionReport:
    """Turn a worker-quasi-stability violation into a setwise domination.

    K is a set of firms desiring the worker whose combined offer makes her drop
    part of mu(w). The coalition is the worker plus her genuinely new firms.
    """
    _own(market, matching)
    if market.mode is not Mode.MANY_TO_MANY:
        raise PreconditionFailed("this construction needs a many-to-many market")
    if not individually_rational(market, matching):
        raise PreconditionFailed("the matching must be individually rational")
    w = market.agent(worker)
    k_mask = 0
    for x in K:
        k_mask |= 1 << market.agent(x).index
    desire = _firm_desire_mask(market, matching, w.index)
    if k_mask & ~desire:
        extra = set_of(market.firms, k_mask & ~desire)
        raise PreconditionFailed(
            f"{sorted(a.label for a in extra)} would not choose {w.label}"
        )
    old = matching.wmasks[w.index]
    chosen = market._wtab[w.index][old | k_mask]
    if not old & ~chosen:
        raise PreconditionFailed(
            f"{w.label} keeps all of her firms against K; no violation to translate"
        )

    fmasks = list(matching.fmasks)
    new_firms = chosen & ~old
    for i in range(market.n_firms):
        if chosen >> i & 1:
            fmasks[i] |= 1 << w.index
        else:
            fmasks[i] &= ~(1 << w.index)
    for i in iter_bits(new_firms):
        fmasks[i] = market._ftab[i][matching.fmasks[i] | (1 << w.index)]
    mu_p = Matching(market, tuple(fmasks))
    coalition = Coalition(frozenset({w}) | set_of(market.firms, new_firms))
    ok = setwise_dominates(market, mu_p, matching, coalition)
    if not ok:
        raise ConstructionFailed("quasi-stability construction failed its re-check")
    if not old & ~mu_p.wmasks[w.index]:
        raise ConstructionFailed(f"{w.label} kept all of mu(w); no clause is violated")
    labels = " ".join(a.label for a in sorted(set_of(market.firms, k_mask)))
    return ConstructionReport(
        f"setwise domination from quasi-stability violation ({w.label}; {{{labels}}})",
        mu_p,
        coalition,
        True,
    )


def domination_from_double_quasi_m2m(market: Market, matching: Matching, pair) -> ConstructionReport:
    """Dominate a doubly quasi-stable matching by adding one blocking link.

    When both quasi-stability notions hold, a blocking pair's link can simply
    be added: both endpoints' choices absorb it, everyone else stands pat, and
    the grand coalition dominates.
    """
    _own(market, matching)
    if market.mode is not Mode.MANY_TO_MANY:
        raise PreconditionFailed("this construction needs a many-to-many market")
    if not is_worker_quasi_stable(market, matching):
        raise PreconditionFailed("the matching is not worker-quasi-stable")
    if not is_firm_quasi_stable(market, matching):
        raise PreconditionFailed("the matching is not firm-quasi-stable")
    f, w = (market.agent(pair[0]), market.agent(pair[1]))
    if f.side is not Side.FIRM:
        f, w = w, f
    if not _pair_blocks(market, matching, f.index, w.index):
        raise PreconditionFailed(f"({f.label}, {w.label}) does not block this matching")

    fmasks = list(matching.fmasks)
    fmasks[f.index] |= 1 << w.index
    mu_p = Matching(market, tuple(fmasks))
    coalition = Coalition(frozenset(market.firms + market.workers))
    ok = dominates(market, mu_p, matching, coalition)
    if not ok:
        raise ConstructionFailed("single-link construction failed its re-check")
    return ConstructionReport(
        f"domination from added link ({f.label}, {w.label})", mu_p, coalition, True
    )
