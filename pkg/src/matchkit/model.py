"""Markets, matchings, coalitions, and exhaustive matching enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ._core import (
    AgentId,
    Limits,
    Mode,
    Side,
    assign_bits,
    default_limits,
    iter_bits,
)
from .choice import (
    ChoiceFunction,
    PreferenceList,
    UNRANKED,
    induce_choice,
    is_consistent,
    is_substitutable,
    make_choice_function,
    make_preference_list,
    set_of,
)
from .errors import (
    DuplicateLabel,
    InvalidPreferenceList,
    ManyToOneCapacityViolation,
    MissingChoiceEntry,
    SizeLimitExceeded,
    SubstitutabilityViolation,
    ConsistencyViolation,
    EmptyCoalition,
    UnknownAgent,
)


class Market:
    """A two-sided market: firms with choice functions, workers per the mode.

    Workers carry choice functions in many-to-many mode and strict rankings of
    single firms (plus the empty set) in many-to-one mode. Instances are
    immutable and compare by value.
    """

    __slots__ = (
        "firms",
        "workers",
        "mode",
        "_ftab",
        "_wtab",
        "_wprefs",
        "_by_label",
        "_fcf",
        "_wcf",
        "_hash",
    )

    def __init__(
        self,
        firms: tuple[AgentId, ...],
        workers: tuple[AgentId, ...],
        mode: Mode,
        firm_tables: tuple[tuple[int, ...], ...],
        worker_tables: tuple[tuple[int, ...], ...] | None,
        worker_prefs: tuple[PreferenceList, ...] | None,
    ):
        self.firms = firms
        self.workers = workers
        self.mode = mode
        self._ftab = firm_tables
        self._wtab = worker_tables
        self._wprefs = worker_prefs
        by_label: dict[str, AgentId] = {}
        for a in firms + workers:
            by_label[a.label] = a
        self._by_label = by_label
        self._fcf = tuple(
            ChoiceFunction(f, workers, firm_tables[i]) for i, f in enumerate(firms)
        )
        if mode is Mode.MANY_TO_MANY:
            self._wcf = tuple(
                ChoiceFunction(w, firms, worker_tables[j]) for j, w in enumerate(workers)
            )
        else:
            self._wcf = None
        self._hash = None

    # -- public views ------------------------------------------------------

    @property
    def firm_choices(self) -> dict[AgentId, ChoiceFunction]:
        return {f: cf for f, cf in zip(self.firms, self._fcf)}

    @property
    def worker_choices(self) -> dict[AgentId, ChoiceFunction]:
        if self.mode is not Mode.MANY_TO_MANY:
            raise InvalidPreferenceList("many-to-one workers hold rankings, not choice tables")
        return {w: cf for w, cf in zip(self.workers, self._wcf)}

    @property
    def worker_prefs(self) -> dict[AgentId, PreferenceList]:
        if self.mode is not Mode.MANY_TO_ONE:
            raise InvalidPreferenceList("many-to-many workers hold choice tables, not rankings")
        return {w: p for w, p in zip(self.workers, self._wprefs)}

    @property
    def worker_side(self) -> dict:
        """Per-worker choice data: ChoiceFunction or PreferenceList per the mode."""
        if self.mode is Mode.MANY_TO_MANY:
            return self.worker_choices
        return self.worker_prefs

    def agent(self, x) -> AgentId:
        """Resolve a label or AgentId to this market's AgentId."""
        if isinstance(x, AgentId):
            if self._by_label.get(x.label) == x:
                return x
            raise UnknownAgent(f"{x.label!r} is not an agent of this market")
        got = self._by_label.get(x)
        if got is None:
            raise UnknownAgent(f"{x!r} is not an agent of this market")
        return got

    def agents(self, *xs) -> frozenset[AgentId]:
        return frozenset(self.agent(x) for x in xs)

    def choice_of(self, x) -> ChoiceFunction:
        a = self.agent(x)
        if a.side is Side.FIRM:
            return self._fcf[a.index]
        if self._wcf is None:
            raise InvalidPreferenceList(f"{a.label} holds a ranking, not a choice table")
        return self._wcf[a.index]

    def pref_of(self, x) -> PreferenceList:
        a = self.agent(x)
        if a.side is not Side.WORKER or self._wprefs is None:
            raise InvalidPreferenceList(f"{a.label} holds a choice table, not a ranking")
        return self._wprefs[a.index]

    # -- internals used by the analysis modules -----------------------------

    @property
    def n_firms(self) -> int:
        return len(self.firms)

    @property
    def n_workers(self) -> int:
        return len(self.workers)

    def worker_rank_of_mask(self, j: int, mask: int) -> int:
        """Rank of a firm-set mask in many-to-one worker j's list (UNRANKED if absent)."""
        return self._wprefs[j].rank_of_mask(mask)

    def _value(self) -> tuple:
        wpart = (
            self._wtab
            if self.mode is Mode.MANY_TO_MANY
            else tuple(p._masks for p in self._wprefs)
        )
        return (
            self.mode,
            tuple(a.label for a in self.firms),
            tuple(a.label for a in self.workers),
            self._ftab,
            wpart,
        )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Market):
            return NotImplemented
        return self._value() == other._value()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._value())
        return self._hash

    def __repr__(self) -> str:
        return (
            f"Market({self.mode.value}, firms={[a.label for a in self.firms]}, "
            f"workers={[a.label for a in self.workers]})"
        )


def _relabel(subset: Iterable) -> frozenset[str]:
    return frozenset(a.label if isinstance(a, AgentId) else a for a in subset)


def _build_table(owner: AgentId, universe: tuple[AgentId, ...], entry) -> tuple[int, ...]:
    if isinstance(entry, ChoiceFunction):
        by_labels = {_relabel(k): _relabel(v) for k, v in entry.as_dict().items()}
        cf = make_choice_function(owner, universe, by_labels)
    elif isinstance(entry, PreferenceList):
        cf = induce_choice(
            make_preference_list(owner, universe, [_relabel(s) for s in entry.ranking])
        )
    elif isinstance(entry, Mapping):
        cf = make_choice_function(owner, universe, entry)
    elif isinstance(entry, Sequence) and not isinstance(entry, (str, bytes)):
        cf = induce_choice(make_preference_list(owner, universe, entry))
    else:
        raise MissingChoiceEntry(
            f"unsupported choice data for {owner.label}: {type(entry).__name__}"
        )
    return cf.table


def _validate_choice(owner: AgentId, universe: tuple[AgentId, ...], table: tuple[int, ...]):
    cf = ChoiceFunction(owner, universe, table)
    sub = is_substitutable(cf)
    if not sub:
        big, small, elem = sub.witness
        raise SubstitutabilityViolation(
            owner.label,
            frozenset(a.label for a in big),
            frozenset(a.label for a in small),
            elem.label,
        )
    con = is_consistent(cf)
    if not con:
        big, small = con.witness
        raise ConsistencyViolation(
            owner.label,
            frozenset(a.label for a in big),
            frozenset(a.label for a in small),
        )


def make_market(
    firms: Sequence[str],
    workers: Sequence[str],
    mode: Mode,
    choice_data: Mapping,
) -> Market:
    """Build and validate a market.

    choice_data maps each agent label to its choice data: a ChoiceFunction, a
    subset-to-subset mapping, or a ranking (sequence of label sets). Workers in
    many-to-one mode must get a ranking of single firms plus the empty set.
    Firm tables and many-to-many worker tables must be substitutable and
    consistent.
    """
    labels = list(firms) + list(workers)
    seen = set()
    for lab in labels:
        if lab in seen:
            raise DuplicateLabel(f"label {lab!r} appears twice")
        seen.add(lab)
    firm_ids = tuple(AgentId(Side.FIRM, i, lab) for i, lab in enumerate(firms))
    worker_ids = tuple(AgentId(Side.WORKER, j, lab) for j, lab in enumerate(workers))

    for lab in choice_data:
        if lab not in seen:
            raise UnknownAgent(f"choice data given for unknown agent {lab!r}")

    ftabs = []
    for f in firm_ids:
        if f.label not in choice_data:
            raise MissingChoiceEntry(f"no choice data for firm {f.label}")
        table = _build_table(f, worker_ids, choice_data[f.label])
        _validate_choice(f, worker_ids, table)
        ftabs.append(table)

    wtabs = None
    wprefs = None
    if mode is Mode.MANY_TO_MANY:
        tabs = []
        for w in worker_ids:
            if w.label not in choice_data:
                raise MissingChoiceEntry(f"no choice data for worker {w.label}")
            table = _build_table(w, firm_ids, choice_data[w.label])
            _validate_choice(w, firm_ids, table)
            tabs.append(table)
        wtabs = tuple(tabs)
    else:
        prefs = []
        for w in worker_ids:
            if w.label not in choice_data:
                raise MissingChoiceEntry(f"no choice data for worker {w.label}")
            entry = choice_data[w.label]
            if isinstance(entry, PreferenceList):
                pref = make_preference_list(w, firm_ids, [_relabel(s) for s in entry.ranking])
            elif isinstance(entry, Sequence) and not isinstance(entry, (str, bytes)):
                pref = make_preference_list(w, firm_ids, entry)
            else:
                raise InvalidPreferenceList(
                    f"worker {w.label} needs a ranking of single firms in many-to-one mode"
                )
            if not pref.singletons_only():
                raise InvalidPreferenceList(
                    f"worker {w.label}'s ranking may only contain single firms and the empty set"
                )
            prefs.append(pref)
        wprefs = tuple(prefs)

    return Market(firm_ids, worker_ids, mode, tuple(ftabs), wtabs, wprefs)


class Matching:
    """A symmetric assignment: w in mu(f) exactly when f in mu(w).

    Compares by market value plus edge set; iteration order and rendering are
    canonical (firms by index, partners by index).
    """

    __slots__ = ("market", "fmasks", "wmasks", "_hash")

    def __init__(self, market: Market, fmasks: tuple[int, ...]):
        self.market = market
        self.fmasks = fmasks
        wmasks = [0] * market.n_workers
        for i, m in enumerate(fmasks):
            for j in iter_bits(m):
                wmasks[j] |= 1 << i
        self.wmasks = tuple(wmasks)
        self._hash = None

    def partners(self, x) -> frozenset[AgentId]:
        a = self.market.agent(x)
        if a.side is Side.FIRM:
            return set_of(self.market.workers, self.fmasks[a.index])
        return set_of(self.market.firms, self.wmasks[a.index])

    @property
    def assignment(self) -> dict[AgentId, frozenset[AgentId]]:
        out = {}
        for a in self.market.firms + self.market.workers:
            out[a] = self.partners(a)
        return out

    def edges(self) -> tuple[tuple[AgentId, AgentId], ...]:
        out = []
        for i, m in enumerate(self.fmasks):
            for j in iter_bits(m):
                out.append((self.market.firms[i], self.market.workers[j]))
        return tuple(out)

    def render(self) -> str:
        """Canonical one-line form: 'f1:w2 w3; f2:w1' or '(empty)'."""
        parts = []
        for i, m in enumerate(self.fmasks):
            if m:
                names = " ".join(self.market.workers[j].label for j in iter_bits(m))
                parts.append(f"{self.market.firms[i].label}:{names}")
        return "; ".join(parts) if parts else "(empty)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        if self is other:
            return True
        if self.fmasks != other.fmasks:
            return False
        return self.market is other.market or self.market == other.market

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((hash(self.market), self.fmasks))
        return self._hash

    def __repr__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Coalition:
    """A nonempty set of agents from either or both sides."""

    members: frozenset[AgentId]

    def __post_init__(self):
        if not self.members:
            raise EmptyCoalition("a coalition needs at least one agent")

    @classmethod
    def of(cls, market: Market, items: Iterable) -> "Coalition":
        return cls(frozenset(market.agent(x) for x in items))

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, a) -> bool:
        return a in self.members

    def render(self) -> str:
        return "{" + " ".join(a.label for a in sorted(self.members)) + "}"


def make_matching(market: Market, pairs: Iterable) -> Matching:
    """Build a matching from (firm, worker) pairs given in either orientation."""
    fmasks = [0] * market.n_firms
    for x, y in pairs:
        a, b = market.agent(x), market.agent(y)
        if a.side == b.side:
            raise ValueError(f"pair ({a.label}, {b.label}) must join a firm and a worker")
        f, w = (a, b) if a.side is Side.FIRM else (b, a)
        fmasks[f.index] |= 1 << w.index
    if market.mode is Mode.MANY_TO_ONE:
        for j, w in enumerate(market.workers):
            count = sum(1 for m in fmasks if m >> j & 1)
            if count > 1:
                raise ManyToOneCapacityViolation(
                    f"worker {w.label} holds {count} firms in a many-to-one market"
                )
    return Matching(market, tuple(fmasks))


def enumerate_matchings(market: Market, limits: Limits | None = None) -> list[Matching]:
    """Every matching of the market, in a fixed documented order.

    Many-to-many: ascending edge bitmask, edge bit = firm_index * |W| + worker_index
    (2^(|F||W|) matchings). Many-to-one: ascending lexicographic worker assignment
    vectors, entry 0 = unmatched, k = firm k-1 ((|F|+1)^|W| matchings).
    """
    limits = limits or default_limits()
    nf, nw = market.n_firms, market.n_workers
    out = []
    if market.mode is Mode.MANY_TO_MANY:
        bits = nf * nw
        if bits > limits.max_edges:
            raise SizeLimitExceeded(
                f"{bits} edge bits exceed the cap of {limits.max_edges}; "
                f"raise limits or MATCHKIT_MAX_EDGES to enumerate"
            )
        low = (1 << nw) - 1
        for mask in range(1 << bits):
            out.append(Matching(market, tuple((mask >> (i * nw)) & low for i in range(nf))))
    else:
        bits = assign_bits(nf, nw)
        if bits > limits.max_assign_bits:
            raise SizeLimitExceeded(
                f"{bits:.1f} assignment bits exceed the cap of {limits.max_assign_bits}; "
                f"raise limits or MATCHKIT_MAX_EDGES to enumerate"
            )
        for vector in itertools.product(range(nf + 1), repeat=nw):
            fmasks = [0] * nf
            for j, v in enumerate(vector):
                if v:
                    fmasks[v - 1] |= 1 << j
            out.append(Matching(market, tuple(fmasks)))
    return out


def matched(matching: Matching, agent) -> bool:
    """True when the agent holds at least one partner."""
    a = matching.market.agent(agent)
    if a.side is Side.FIRM:
        return matching.fmasks[a.index] != 0
    return matching.wmasks[a.index] != 0


def unmatched(matching: Matching, agent) -> bool:
    return not matched(matching, agent)
