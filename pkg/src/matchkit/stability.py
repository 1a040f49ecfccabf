"""Blocking, individual rationality, desire sets, and quasi-stability predicates."""

from __future__ import annotations

from dataclasses import dataclass

from ._core import AgentId, Limits, Mode, Side, default_limits, iter_submasks
from .choice import set_of
from .errors import SizeLimitExceeded
from .model import Market, Matching


@dataclass(frozen=True)
class BlockingPair:
    firm: AgentId
    worker: AgentId

    def render(self) -> str:
        return f"({self.firm.label}, {self.worker.label})"


@dataclass(frozen=True, eq=True)
class DesireSets:
    """Who wants whom at a given matching.

    firms_desiring_worker[w] holds every firm f with w in C_f(mu(f) | {w});
    incumbents can qualify, so this set may intersect mu(w).
    workers_desiring_firm[f] holds, in many-to-one mode, the workers ranking
    {f} strictly above their assignment (never incumbents), and in
    many-to-many mode every worker w with f in C_w(mu(w) | {f}).
    """

    firms_desiring_worker: dict[AgentId, frozenset[AgentId]]
    workers_desiring_firm: dict[AgentId, frozenset[AgentId]]


@dataclass(frozen=True)
class QuasiViolation:
    """A quasi-stability failure: adding `added` makes `agent` drop part of its match.

    union_choice is the agent's choice from its assignment united with `added`.
    """

    agent: AgentId
    added: frozenset[AgentId]
    union_choice: frozenset[AgentId]

    def render(self) -> str:
        added = "{" + " ".join(a.label for a in sorted(self.added)) + "}"
        chose = "{" + " ".join(a.label for a in sorted(self.union_choice)) + "}"
        return f"{self.agent.label} with {added} chooses {chose}"


def _own(market: Market, matching: Matching) -> None:
    if matching.market is not market and matching.market != market:
        raise ValueError("matching belongs to a different market")


def blocked_by_agent(market: Market, matching: Matching, agent) -> bool:
    """True when the agent would drop part of its own assignment."""
    _own(market, matching)
    a = market.agent(agent)
    if a.side is Side.FIRM:
        cur = matching.fmasks[a.index]
        return market._ftab[a.index][cur] != cur
    cur = matching.wmasks[a.index]
    if market.mode is Mode.MANY_TO_MANY:
        return market._wtab[a.index][cur] != cur
    # many-to-one worker: blocked when the empty set beats the held firm
    return market.worker_rank_of_mask(a.index, 0) < market.worker_rank_of_mask(a.index, cur)


def individually_rational(market: Market, matching: Matching) -> bool:
    """No agent blocks on its own."""
    _own(market, matching)
    for a in market.firms + market.workers:
        if blocked_by_agent(market, matching, a):
            return False
    return True


def _pair_blocks(market: Market, matching: Matching, i: int, j: int) -> bool:
    if matching.fmasks[i] >> j & 1:
        return False
    if not market._ftab[i][matching.fmasks[i] | (1 << j)] >> j & 1:
        return False
    if market.mode is Mode.MANY_TO_MANY:
        return bool(market._wtab[j][matching.wmasks[j] | (1 << i)] >> i & 1)
    return market.worker_rank_of_mask(j, 1 << i) < market.worker_rank_of_mask(
        j, matching.wmasks[j]
    )


def blocking_pairs(market: Market, matching: Matching) -> list[BlockingPair]:
    """All blocking pairs, firm index ascending then worker index ascending."""
    _own(market, matching)
    out = []
    for i, f in enumerate(market.firms):
        for j, w in enumerate(market.workers):
            if _pair_blocks(market, matching, i, j):
                out.append(BlockingPair(f, w))
    return out


def is_pairwise_stable(market: Market, matching: Matching) -> bool:
    """Individually rational with no blocking pair."""
    return individually_rational(market, matching) and not blocking_pairs(market, matching)


def _firm_desire_mask(market: Market, matching: Matching, j: int) -> int:
    """Mask of firms f with w_j in C_f(mu(f) | {w_j})."""
    mask = 0
    for i in range(market.n_firms):
        if market._ftab[i][matching.fmasks[i] | (1 << j)] >> j & 1:
            mask |= 1 << i
    return mask


def _worker_desire_mask(market: Market, matching: Matching, i: int) -> int:
    """Mask of workers desiring firm f_i, per the mode's reading."""
    mask = 0
    for j in range(market.n_workers):
        if market.mode is Mode.MANY_TO_MANY:
            if market._wtab[j][matching.wmasks[j] | (1 << i)] >> i & 1:
                mask |= 1 << j
        else:
            if market.worker_rank_of_mask(j, 1 << i) < market.worker_rank_of_mask(
                j, matching.wmasks[j]
            ):
                mask |= 1 << j
    return mask


def desire_sets(market: Market, matching: Matching) -> DesireSets:
    """Both desire-set families at this matching."""
    _own(market, matching)
    firms_desiring = {
        w: set_of(market.firms, _firm_desire_mask(market, matching, j))
        for j, w in enumerate(market.workers)
    }
    workers_desiring = {
        f: set_of(market.workers, _worker_desire_mask(market, matching, i))
        for i, f in enumerate(market.firms)
    }
    return DesireSets(firms_desiring, workers_desiring)


def is_worker_quasi_stable(market: Market, matching: Matching) -> bool:
    """Individually rational, and worker-side additions never force a drop.

    Many-to-one: every blocking pair's worker is unmatched. Many-to-many: each
    worker keeps all of mu(w) when choosing from mu(w) united with the full set
    of firms desiring w (substitutability makes the largest set decisive).
    """
    _own(market, matching)
    if not individually_rational(market, matching):
        return False
    if market.mode is Mode.MANY_TO_ONE:
        return all(
            matching.wmasks[p.worker.index] == 0 for p in blocking_pairs(market, matching)
        )
    for j in range(market.n_workers):
        cur = matching.wmasks[j]
        des = _firm_desire_mask(market, matching, j)
        if cur & ~market._wtab[j][cur | des]:
            return False
    return True


def is_worker_quasi_stable_definitional(
    market: Market, matching: Matching, limits: Limits | None = None
) -> bool:
    """Literal quantification over every subset of firms desiring each worker.

    In many-to-one mode the definition has no subset quantifier, so this
    coincides with is_worker_quasi_stable by construction.
    """
    _own(market, matching)
    if market.mode is Mode.MANY_TO_ONE:
        return is_worker_quasi_stable(market, matching)
    limits = limits or default_limits()
    if not individually_rational(market, matching):
        return False
    for j in range(market.n_workers):
        cur = matching.wmasks[j]
        des = _firm_desire_mask(market, matching, j)
        if des.bit_count() > limits.max_assign_bits:
            raise SizeLimitExceeded(
                f"{des.bit_count()} desiring firms exceed the subset cap of "
                f"{limits.max_assign_bits}"
            )
        for k in iter_submasks(des):
            if cur & ~market._wtab[j][cur | k]:
                return False
    return True


def is_firm_quasi_stable(market: Market, matching: Matching) -> bool:
    """Individually rational, and firm-side additions never force a drop.

    Each firm keeps all of mu(f) when choosing from mu(f) united with the full
    set of workers desiring f (substitutability makes the largest set decisive).
    """
    _own(market, matching)
    if not individually_rational(market, matching):
        return False
    for i in range(market.n_firms):
        cur = matching.fmasks[i]
        des = _worker_desire_mask(market, matching, i)
        if cur & ~market._ftab[i][cur | des]:
            return False
    return True


def is_firm_quasi_stable_definitional(
    market: Market, matching: Matching, limits: Limits | None = None
) -> bool:
    """Literal quantification over every subset of workers desiring each firm."""
    _own(market, matching)
    limits = limits or default_limits()
    if not individually_rational(market, matching):
        return False
    for i in range(market.n_firms):
        cur = matching.fmasks[i]
        des = _worker_desire_mask(market, matching, i)
        if des.bit_count() > limits.max_assign_bits:
            raise SizeLimitExceeded(
                f"{des.bit_count()} desiring workers exceed the subset cap of "
                f"{limits.max_assign_bits}"
            )
        for t in iter_submasks(des):
            if cur & ~market._ftab[i][cur | t]:
                return False
    return True


def first_worker_quasi_violation(market: Market, matching: Matching):
    """First worker-side quasi-stability violation, or None.

    Many-to-many: the first (worker, K, choice) with mu(w) not kept, workers by
    index then K by ascending mask over the desiring firms. Many-to-one: the
    first blocking pair whose worker is matched.
    """
    _own(market, matching)
    if market.mode is Mode.MANY_TO_ONE:
        for p in blocking_pairs(market, matching):
            if matching.wmasks[p.worker.index]:
                return p
        return None
    for j, w in enumerate(market.workers):
        cur = matching.wmasks[j]
        des = _firm_desire_mask(market, matching, j)
        for k in iter_submasks(des):
            chosen = market._wtab[j][cur | k]
            if cur & ~chosen:
                return QuasiViolation(
                    w, set_of(market.firms, k), set_of(market.firms, chosen)
                )
    return None


def first_firm_quasi_violation(market: Market, matching: Matching):
    """First (firm, T, choice) with mu(f) not kept, or None; T ascends by mask."""
    _own(market, matching)
    for i, f in enumerate(market.firms):
        cur = matching.fmasks[i]
        des = _worker_desire_mask(market, matching, i)
        for t in iter_submasks(des):
            chosen = market._ftab[i][cur | t]
            if cur & ~chosen:
                return QuasiViolation(
                    f, set_of(market.workers, t), set_of(market.workers, chosen)
                )
    return None
