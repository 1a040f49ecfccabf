"""Domination, setwise domination, core membership, quasi-cores, classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from ._core import (
    AgentId,
    Limits,
    Mode,
    Side,
    assign_bits,
    default_limits,
    iter_bits,
    iter_submasks,
)
from .errors import IdenticalMatchings, NotSingleton, SizeLimitExceeded
from .model import Coalition, Market, Matching, enumerate_matchings
from .stability import (
    _own,
    blocked_by_agent,
    blocking_pairs,
    first_firm_quasi_violation,
    first_worker_quasi_violation,
    individually_rational,
    is_firm_quasi_stable,
    is_worker_quasi_stable,
)

SET_KEYS = ("I", "S", "C", "C_QW", "C_QF", "QW", "QF", "SW", "SW_QW", "SW_QF")


class DominationKind(Enum):
    DOMINATION = "domination"
    SETWISE_DOMINATION = "setwise-domination"


@dataclass(frozen=True)
class DominationWitness:
    """A matching and coalition that (setwise) dominate the matching under study."""

    dominating: Matching
    coalition: Coalition
    strict_agent: AgentId
    kind: DominationKind

    def verify(self, market: Market, matching: Matching) -> bool:
        """Re-check this witness against the defining predicate."""
        if self.kind is DominationKind.DOMINATION:
            return dominates(market, self.dominating, matching, self.coalition)
        return setwise_dominates(market, self.dominating, matching, self.coalition)

    def render(self) -> str:
        return f"{self.dominating.render()} via {self.coalition.render()}"


@dataclass
class ClassificationRecord:
    """Membership of one matching in all ten stability notions.

    witnesses maps a set key (see SET_KEYS) to evidence for a negative bit:
    a blocked AgentId, a BlockingPair, a DominationWitness, or a QuasiViolation.
    """

    individually_rational: bool
    pairwise_stable: bool
    core: bool
    worker_quasi_core: bool
    firm_quasi_core: bool
    worker_quasi_stable: bool
    firm_quasi_stable: bool
    setwise_stable: bool
    worker_quasi_setwise: bool
    firm_quasi_setwise: bool
    witnesses: dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict[str, bool]:
        return {
            "I": self.individually_rational,
            "S": self.pairwise_stable,
            "C": self.core,
            "C_QW": self.worker_quasi_core,
            "C_QF": self.firm_quasi_core,
            "QW": self.worker_quasi_stable,
            "QF": self.firm_quasi_stable,
            "SW": self.setwise_stable,
            "SW_QW": self.worker_quasi_setwise,
            "SW_QF": self.firm_quasi_setwise,
        }


class _Ctx:
    """Per-market caches for the domination searches."""

    __slots__ = ("market", "nf", "nw", "ftab", "wtab", "m21", "_weak")

    def __init__(self, market: Market):
        self.market = market
        self.nf = market.n_firms
        self.nw = market.n_workers
        self.ftab = market._ftab
        self.wtab = market._wtab
        self.m21 = market.mode is Mode.MANY_TO_ONE
        self._weak = {}

    def weak(self, is_firm: bool, idx: int, cur: int) -> tuple[int, tuple[int, ...]]:
        """Masks weakly preferred to cur by this agent: (bitset over masks, ascending tuple)."""
        key = (is_firm, idx, cur)
        got = self._weak.get(key)
        if got is not None:
            return got
        if is_firm:
            tab, n = self.ftab[idx], self.nw
        elif not self.m21:
            tab, n = self.wtab[idx], self.nf
        else:
            tab, n = None, self.nf
        bits = 0
        masks = []
        if tab is not None:
            for m in range(1 << n):
                if tab[m | cur] == m:
                    bits |= 1 << m
                    masks.append(m)
        else:
            cur_rank = self.market.worker_rank_of_mask(idx, cur)
            for m in range(1 << n):
                if m and m & (m - 1):
                    continue
                if m == cur or self.market.worker_rank_of_mask(idx, m) < cur_rank:
                    bits |= 1 << m
                    masks.append(m)
        got = (bits, tuple(masks))
        self._weak[key] = got
        return got

    def can_strict(self, is_firm: bool, idx: int, cur: int) -> bool:
        bits, _ = self.weak(is_firm, idx, cur)
        return bits & ~(1 << cur) != 0


def _check_caps(market: Market, limits: Limits) -> None:
    if market.mode is Mode.MANY_TO_MANY:
        bits = market.n_firms * market.n_workers
        if bits > limits.max_edges:
            raise SizeLimitExceeded(
                f"{bits} edge bits exceed the cap of {limits.max_edges}"
            )
    else:
        bits = assign_bits(market.n_firms, market.n_workers)
        if bits > limits.max_assign_bits:
            raise SizeLimitExceeded(
                f"{bits:.1f} assignment bits exceed the cap of {limits.max_assign_bits}"
            )


def prefers(market: Market, agent, new: Iterable, old: Iterable) -> bool:
    """Weak preference used in domination, dispatched on side and mode.

    Firms and many-to-many workers use the revealed order (new = C(new | old));
    many-to-one workers use their raw ranking over single firms and the empty set.
    """
    a = market.agent(agent)
    if a.side is Side.FIRM:
        cf = market._fcf[a.index]
        nm = _as_mask(market.workers, new)
        om = _as_mask(market.workers, old)
        return cf.table[nm | om] == nm
    if market.mode is Mode.MANY_TO_MANY:
        cf = market._wcf[a.index]
        nm = _as_mask(market.firms, new)
        om = _as_mask(market.firms, old)
        return cf.table[nm | om] == nm
    nm = _as_mask(market.firms, new)
    om = _as_mask(market.firms, old)
    for m in (nm, om):
        if m and m & (m - 1):
            raise NotSingleton(f"{a.label} compares only single firms or the empty set")
    return nm == om or market.worker_rank_of_mask(a.index, nm) < market.worker_rank_of_mask(
        a.index, om
    )


def _as_mask(universe: tuple[AgentId, ...], subset: Iterable) -> int:
    m = 0
    pos = {a: i for i, a in enumerate(universe)}
    pos.update({a.label: i for i, a in enumerate(universe)})
    for x in subset:
        m |= 1 << pos[x]
    return m


def _coalition_masks(market: Market, coalition) -> tuple[int, int, Coalition]:
    if not isinstance(coalition, Coalition):
        coalition = Coalition.of(market, coalition)
    f_mask = w_mask = 0
    for a in coalition.members:
        a = market.agent(a)
        if a.side is Side.FIRM:
            f_mask |= 1 << a.index
        else:
            w_mask |= 1 << a.index
    return f_mask, w_mask, coalition


def _check_pair(
    ctx: _Ctx, mu: Matching, mu_p: Matching, f_mask: int, w_mask: int, setwise: bool
) -> bool:
    """Does mu_p beat mu for this coalition (weakly for all, strictly for one)?

    Plain domination confines each member's whole new set to the coalition;
    the setwise variant confines only the partners the member gains, so kept
    partners may sit outside the coalition.
    """
    changed = False
    for i in iter_bits(f_mask):
        m = mu_p.fmasks[i]
        allowed = w_mask | mu.fmasks[i] if setwise else w_mask
        if m & ~allowed:
            return False
        if not ctx.weak(True, i, mu.fmasks[i])[0] >> m & 1:
            return False
        changed = changed or m != mu.fmasks[i]
    for j in iter_bits(w_mask):
        m = mu_p.wmasks[j]
        allowed = f_mask | mu.wmasks[j] if setwise else f_mask
        if m & ~allowed:
            return False
        if not ctx.weak(False, j, mu.wmasks[j])[0] >> m & 1:
            return False
        changed = changed or m != mu.wmasks[j]
    return changed


def _strict_agent(market: Market, mu: Matching, mu_p: Matching, f_mask: int, w_mask: int) -> AgentId:
    for i in iter_bits(f_mask):
        if mu_p.fmasks[i] != mu.fmasks[i]:
            return market.firms[i]
    for j in iter_bits(w_mask):
        if mu_p.wmasks[j] != mu.wmasks[j]:
            return market.workers[j]
    raise IdenticalMatchings("no agent's assignment changed")


def dominates(market: Market, dominating: Matching, matching: Matching, coalition) -> bool:
    """Definition of domination via a coalition S.

    Every coalition member's new partner set lies inside S, every member weakly
    prefers its new set (revealed order; raw order for many-to-one workers),
    and at least one member's set actually changes.
    """
    _own(market, dominating)
    _own(market, matching)
    f_mask, w_mask, _ = _coalition_masks(market, coalition)
    if dominating == matching:
        raise IdenticalMatchings("domination compares two distinct matchings")
    ctx = _Ctx(market)
    return _check_pair(ctx, matching, dominating, f_mask, w_mask, False)


def setwise_dominates(market: Market, dominating: Matching, matching: Matching, coalition) -> bool:
    """Domination with the containment relaxed to newly gained partners.

    Each coalition member's new partners must come from S, but members may
    keep partners they already had under mu even when those sit outside S.
    """
    _own(market, dominating)
    _own(market, matching)
    f_mask, w_mask, _ = _coalition_masks(market, coalition)
    if dominating == matching:
        raise IdenticalMatchings("domination compares two distinct matchings")
    ctx = _Ctx(market)
    return _check_pair(ctx, matching, dominating, f_mask, w_mask, True)


def find_dominations(
    market: Market,
    matching: Matching,
    kind: DominationKind = DominationKind.DOMINATION,
    limits: Limits | None = None,
) -> list[DominationWitness]:
    """Every (dominating matching, coalition) pair, exhaustively.

    Order: dominating matchings in enumeration order, then coalition masks
    ascending (firms in the low bits). Empty exactly when the matching is
    undominated in the given sense.
    """
    _own(market, matching)
    limits = limits or default_limits()
    ctx = _Ctx(market)
    nf, nw = market.n_firms, market.n_workers
    total = 1 << (nf + nw)
    floor = (1 << nf) - 1
    setwise = kind is DominationKind.SETWISE_DOMINATION
    out = []
    for mu_p in enumerate_matchings(market, limits):
        if mu_p == matching:
            continue
        for s in range(1, total):
            f_mask, w_mask = s & floor, s >> nf
            if _check_pair(ctx, matching, mu_p, f_mask, w_mask, setwise):
                members = frozenset(
                    [market.firms[i] for i in iter_bits(f_mask)]
                    + [market.workers[j] for j in iter_bits(w_mask)]
                )
                out.append(
                    DominationWitness(
                        mu_p,
                        Coalition(members),
                        _strict_agent(market, matching, mu_p, f_mask, w_mask),
                        kind,
                    )
                )
    return out


class _AllFound(Exception):
    pass


def _search(
    ctx: _Ctx, mu: Matching, kind: DominationKind, need: tuple[str, ...], collect: bool
) -> dict[str, object]:
    """Existence search over coalitions and coalition-local edge patterns.

    Flags: "any" (some witness exists), "worker" (a witness whose coalition
    contains a worker losing part of mu(w)), "firm" (likewise for a firm).
    Values are True/None, or the first DominationWitness found when collect.
    """
    market = ctx.market
    nf, nw = ctx.nf, ctx.nw
    setwise = kind is DominationKind.SETWISE_DOMINATION
    found: dict[str, object] = {flag: None for flag in need}
    remaining = set(need)
    floor = (1 << nf) - 1

    sp_f = [ctx.can_strict(True, i, mu.fmasks[i]) for i in range(nf)]
    sp_w = [ctx.can_strict(False, j, mu.wmasks[j]) for j in range(nw)]

    def record(flag: str, f_mask: int, w_mask: int, pat_f: list, pat_w: list):
        if flag not in remaining:
            return
        remaining.discard(flag)
        if not collect:
            found[flag] = True
            return
        fmasks = list(mu.fmasks)
        for i in iter_bits(f_mask):
            fmasks[i] = pat_f[i]
        for j in iter_bits(w_mask):
            m = pat_w[j]
            for i in range(nf):
                if f_mask >> i & 1:
                    continue
                if m >> i & 1:
                    fmasks[i] |= 1 << j
                else:
                    fmasks[i] &= ~(1 << j)
        mu_p = Matching(market, tuple(fmasks))
        if ctx.m21 and any(m & (m - 1) for m in mu_p.wmasks):
            raise AssertionError("pattern completion broke the one-firm-per-worker bound")
        members = frozenset(
            [market.firms[i] for i in iter_bits(f_mask)]
            + [market.workers[j] for j in iter_bits(w_mask)]
        )
        found[flag] = DominationWitness(
            mu_p,
            Coalition(members),
            _strict_agent(market, mu, mu_p, f_mask, w_mask),
            kind,
        )

    def leaf(f_mask: int, w_mask: int, pat_f: list, pat_w: list):
        changed = False
        for i in iter_bits(f_mask):
            if pat_f[i] != mu.fmasks[i]:
                changed = True
                break
        if not changed:
            for j in iter_bits(w_mask):
                if pat_w[j] != mu.wmasks[j]:
                    changed = True
                    break
        if not changed:
            return
        record("any", f_mask, w_mask, pat_f, pat_w)
        if "worker" in remaining:
            for j in iter_bits(w_mask):
                if mu.wmasks[j] & ~pat_w[j]:
                    record("worker", f_mask, w_mask, pat_f, pat_w)
                    break
        if "firm" in remaining:
            for i in iter_bits(f_mask):
                if mu.fmasks[i] & ~pat_f[i]:
                    record("firm", f_mask, w_mask, pat_f, pat_w)
                    break
        if not remaining:
            raise _AllFound

    try:
        for s in range(1, 1 << (nf + nw)):
            f_mask, w_mask = s & floor, s >> nf
            if not any(sp_f[i] for i in iter_bits(f_mask)) and not any(
                sp_w[j] for j in iter_bits(w_mask)
            ):
                continue
            s_firms = list(iter_bits(f_mask))
            s_workers = list(iter_bits(w_mask))
            firm_opts = {}
            empty = False
            for i in s_firms:
                allowed = w_mask | mu.fmasks[i] if setwise else w_mask
                opts = [m for m in ctx.weak(True, i, mu.fmasks[i])[1] if not m & ~allowed]
                if not opts:
                    empty = True
                    break
                firm_opts[i] = opts
            if empty:
                continue
            worker_weak = {j: ctx.weak(False, j, mu.wmasks[j]) for j in s_workers}
            worker_allowed = {
                j: (f_mask | mu.wmasks[j] if setwise else f_mask) for j in s_workers
            }
            pat_f = [0] * nf
            pat_w = [0] * nw

            def assign_workers(k: int):
                if k == len(s_workers):
                    leaf(f_mask, w_mask, pat_f, pat_w)
                    return
                j = s_workers[k]
                forced = 0
                for i in s_firms:
                    if pat_f[i] >> j & 1:
                        forced |= 1 << i
                bits, _ = worker_weak[j]
                for m in iter_submasks(worker_allowed[j]):
                    if m & f_mask == forced and bits >> m & 1:
                        pat_w[j] = m
                        assign_workers(k + 1)
                pat_w[j] = 0

            def assign_firms(k: int):
                if k == len(s_firms):
                    assign_workers(0)
                    return
                i = s_firms[k]
                for m in firm_opts[i]:
                    pat_f[i] = m
                    assign_firms(k + 1)
                pat_f[i] = 0

            assign_firms(0)
    except _AllFound:
        pass
    return found


def in_core(market: Market, matching: Matching, limits: Limits | None = None) -> bool:
    """No coalition can enforce a matching every member weakly prefers."""
    _own(market, matching)
    _check_caps(market, limits or default_limits())
    ctx = _Ctx(market)
    return _search(ctx, matching, DominationKind.DOMINATION, ("any",), False)["any"] is None


def in_worker_quasi_core(market: Market, matching: Matching, limits: Limits | None = None) -> bool:
    """Every domination witness leaves each coalition worker's assignment intact.

    A matching fails only when some witness makes a coalition worker give up
    part of mu(w) (in many-to-one terms: a matched worker changes firms).
    """
    _own(market, matching)
    _check_caps(market, limits or default_limits())
    ctx = _Ctx(market)
    return (
        _search(ctx, matching, DominationKind.DOMINATION, ("worker",), False)["worker"] is None
    )


def in_firm_quasi_core(market: Market, matching: Matching, limits: Limits | None = None) -> bool:
    """Every domination witness keeps each coalition firm's workers (mu(f) grows or stays)."""
    _own(market, matching)
    _check_caps(market, limits or default_limits())
    ctx = _Ctx(market)
    return _search(ctx, matching, DominationKind.DOMINATION, ("firm",), False)["firm"] is None


def in_setwise_stable(market: Market, matching: Matching, limits: Limits | None = None) -> bool:
    """Individually rational and not setwise dominated."""
    _own(market, matching)
    _check_caps(market, limits or default_limits())
    if not individually_rational(market, matching):
        return False
    ctx = _Ctx(market)
    return (
        _search(ctx, matching, DominationKind.SETWISE_DOMINATION, ("any",), False)["any"] is None
    )


def in_worker_quasi_setwise(market: Market, matching: Matching, limits: Limits | None = None) -> bool:
    """Individually rational; setwise witnesses never shrink a coalition worker's match."""
    _own(market, matching)
    _check_caps(market, limits or default_limits())
    if not individually_rational(market, matching):
        return False
    ctx = _Ctx(market)
    return (
        _search(ctx, matching, DominationKind.SETWISE_DOMINATION, ("worker",), False)["worker"]
        is None
    )


def in_firm_quasi_setwise(market: Market, matching: Matching, limits: Limits | None = None) -> bool:
    """Individually rational; setwise witnesses never shrink a coalition firm's match."""
    _own(market, matching)
    _check_caps(market, limits or default_limits())
    if not individually_rational(market, matching):
        return False
    ctx = _Ctx(market)
    return (
        _search(ctx, matching, DominationKind.SETWISE_DOMINATION, ("firm",), False)["firm"]
        is None
    )


def _first_blocked_agent(market: Market, matching: Matching) -> AgentId | None:
    for a in market.firms + market.workers:
        if blocked_by_agent(market, matching, a):
            return a
    return None


def classify(market: Market, matching: Matching, limits: Limits | None = None) -> ClassificationRecord:
    """Membership in all ten notions, with re-verified evidence for each negative bit."""
    _own(market, matching)
    limits = limits or default_limits()
    _check_caps(market, limits)
    ctx = _Ctx(market)

    witnesses: dict[str, object] = {}
    blocked = _first_blocked_agent(market, matching)
    ir = blocked is None
    if not ir:
        witnesses["I"] = blocked

    pairs = blocking_pairs(market, matching)
    pairwise = ir and not pairs
    if not pairwise:
        witnesses["S"] = pairs[0] if pairs else blocked

    dom = _search(ctx, matching, DominationKind.DOMINATION, ("any", "worker", "firm"), True)
    core = dom["any"] is None
    c_qw = dom["worker"] is None
    c_qf = dom["firm"] is None
    if not core:
        witnesses["C"] = dom["any"]
    if not c_qw:
        witnesses["C_QW"] = dom["worker"]
    if not c_qf:
        witnesses["C_QF"] = dom["firm"]

    sw = _search(ctx, matching, DominationKind.SETWISE_DOMINATION, ("any", "worker", "firm"), True)
    setwise = ir and sw["any"] is None
    sw_qw = ir and sw["worker"] is None
    sw_qf = ir and sw["firm"] is None
    if not setwise:
        witnesses["SW"] = sw["any"] if sw["any"] is not None else blocked
    if not sw_qw:
        witnesses["SW_QW"] = sw["worker"] if sw["worker"] is not None else blocked
    if not sw_qf:
        witnesses["SW_QF"] = sw["firm"] if sw["firm"] is not None else blocked

    qw = is_worker_quasi_stable(market, matching)
    if not qw:
        witnesses["QW"] = first_worker_quasi_violation(market, matching) if ir else blocked
    qf = is_firm_quasi_stable(market, matching)
    if not qf:
        witnesses["QF"] = first_firm_quasi_violation(market, matching) if ir else blocked

    for key in ("C", "C_QW", "C_QF", "SW", "SW_QW", "SW_QF"):
        w = witnesses.get(key)
        if isinstance(w, DominationWitness) and not w.verify(market, matching):
            raise AssertionError(f"internal witness for {key} failed re-verification")

    return ClassificationRecord(
        individually_rational=ir,
        pairwise_stable=pairwise,
        core=core,
        worker_quasi_core=c_qw,
        firm_quasi_core=c_qf,
        worker_quasi_stable=qw,
        firm_quasi_stable=qf,
        setwise_stable=setwise,
        worker_quasi_setwise=sw_qw,
        firm_quasi_setwise=sw_qf,
        witnesses=witnesses,
    )


def stability_sets(market: Market, limits: Limits | None = None) -> dict[str, list[Matching]]:
    """All ten stability sets over the full matching enumeration.

    Keys follow SET_KEYS; each list keeps enumeration order.
    """
    limits = limits or default_limits()
    ctx = _Ctx(market)
    sets: dict[str, list[Matching]] = {key: [] for key in SET_KEYS}
    for mu in enumerate_matchings(market, limits):
        ir = individually_rational(market, mu)
        if ir:
            sets["I"].append(mu)
            if not blocking_pairs(market, mu):
                sets["S"].append(mu)
        dom = _search(ctx, mu, DominationKind.DOMINATION, ("any", "worker", "firm"), False)
        if dom["any"] is None:
            sets["C"].append(mu)
        if dom["worker"] is None:
            sets["C_QW"].append(mu)
        if dom["firm"] is None:
            sets["C_QF"].append(mu)
        if is_worker_quasi_stable(market, mu):
            sets["QW"].append(mu)
        if is_firm_quasi_stable(market, mu):
            sets["QF"].append(mu)
        if ir:
            sw = _search(
                ctx, mu, DominationKind.SETWISE_DOMINATION, ("any", "worker", "firm"), False
            )
            if sw["any"] is None:
                sets["SW"].append(mu)
            if sw["worker"] is None:
                sets["SW_QW"].append(mu)
            if sw["firm"] is None:
                sets["SW_QF"].append(mu)
    return sets
