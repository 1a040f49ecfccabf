"""Choice functions over partner subsets: tables, rankings, validators, orders."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from ._core import AgentId, iter_bits
from .errors import (
    InvalidChoiceEntry,
    InvalidPreferenceList,
    MissingChoiceEntry,
    NotSingleton,
)

UNRANKED = 1 << 30  # rank assigned to subsets absent from a preference ranking


class BlairVerdict(Enum):
    STRICTLY_PREFERS = "strictly-prefers"
    EQUAL = "equal"
    STRICTLY_DISPREFERRED = "strictly-dispreferred"
    INCOMPARABLE = "incomparable"


def _index_map(universe: tuple[AgentId, ...]) -> dict:
    ix = {}
    for i, a in enumerate(universe):
        ix[a] = i
        ix[a.label] = i
    return ix


def mask_of(universe: tuple[AgentId, ...], subset: Iterable) -> int:
    """Bitmask of a subset given as AgentIds or labels."""
    ix = _index_map(universe)
    m = 0
    for x in subset:
        if x not in ix:
            raise InvalidChoiceEntry(f"{x!r} is not in the opposite side {[a.label for a in universe]}")
        m |= 1 << ix[x]
    return m


def set_of(universe: tuple[AgentId, ...], mask: int) -> frozenset[AgentId]:
    """Inverse of mask_of."""
    return frozenset(universe[i] for i in iter_bits(mask))


@dataclass(frozen=True)
class ValidationResult:
    """Verdict plus the first counterexample when the verdict is negative."""

    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ChoiceFunction:
    """A total choice table C over subsets of the opposite side.

    table[m] is the mask chosen from the subset with mask m; every one of the
    2^n subsets has an entry and C(T) <= T always holds (so C({}) = {}).
    """

    owner: AgentId
    universe: tuple[AgentId, ...]
    table: tuple[int, ...]

    def __post_init__(self):
        n = len(self.universe)
        if len(self.table) != 1 << n:
            raise MissingChoiceEntry(
                f"choice of {self.owner.label} has {len(self.table)} entries, needs {1 << n}"
            )
        for m, c in enumerate(self.table):
            if c & ~m:
                raise InvalidChoiceEntry(
                    f"choice of {self.owner.label}: C({self._names(m)}) = {self._names(c)} "
                    f"is not a subset of its argument"
                )

    def _names(self, mask: int) -> list[str]:
        return [self.universe[i].label for i in iter_bits(mask)]

    def choose_mask(self, mask: int) -> int:
        return self.table[mask]

    def choose(self, subset: Iterable) -> frozenset[AgentId]:
        return set_of(self.universe, self.table[mask_of(self.universe, subset)])

    def as_dict(self) -> dict[frozenset[AgentId], frozenset[AgentId]]:
        return {
            set_of(self.universe, m): set_of(self.universe, c)
            for m, c in enumerate(self.table)
        }


@dataclass(frozen=True)
class PreferenceList:
    """A strict ranking of distinct partner subsets; must contain the empty set.

    Subsets absent from the ranking sit below every listed one and are never
    chosen by the induced choice function; two distinct absent subsets are
    mutually incomparable.
    """

    owner: AgentId
    universe: tuple[AgentId, ...]
    ranking: tuple[frozenset[AgentId], ...]
    _masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masks = tuple(mask_of(self.universe, entry) for entry in self.ranking)
        if len(set(masks)) != len(masks):
            raise InvalidPreferenceList(f"ranking of {self.owner.label} has duplicate entries")
        if 0 not in masks:
            raise InvalidPreferenceList(f"ranking of {self.owner.label} must contain the empty set")
        object.__setattr__(self, "_masks", masks)

    def rank_of_mask(self, mask: int) -> int:
        """Position in the ranking; UNRANKED for absent subsets."""
        try:
            return self._masks.index(mask)
        except ValueError:
            return UNRANKED

    def singletons_only(self) -> bool:
        return all(m == 0 or m & (m - 1) == 0 for m in self._masks)


def make_choice_function(
    owner: AgentId,
    universe: Sequence[AgentId],
    table: Mapping,
) -> ChoiceFunction:
    """Build a ChoiceFunction from a mapping of subsets (AgentIds or labels) to subsets."""
    universe = tuple(universe)
    n = len(universe)
    by_mask: dict[int, int] = {}
    for key, val in table.items():
        by_mask[mask_of(universe, key)] = mask_of(universe, val)
    entries = []
    for m in range(1 << n):
        if m not in by_mask:
            raise MissingChoiceEntry(
                f"choice of {owner.label} lacks an entry for "
                f"{{{' '.join(universe[i].label for i in iter_bits(m))}}}"
            )
        entries.append(by_mask[m])
    return ChoiceFunction(owner, universe, tuple(entries))


def make_preference_list(
    owner: AgentId,
    universe: Sequence[AgentId],
    ranking: Sequence[Iterable],
) -> PreferenceList:
    """Build a PreferenceList from subsets given as AgentIds or labels."""
    universe = tuple(universe)
    entries = tuple(set_of(universe, mask_of(universe, entry)) for entry in ranking)
    return PreferenceList(owner, universe, entries)


def choose(cf: ChoiceFunction, subset: Iterable) -> frozenset[AgentId]:
    """C(T) for T given as AgentIds or labels."""
    return cf.choose(subset)


def induce_choice(pref: PreferenceList) -> ChoiceFunction:
    """Choice induced by a ranking: C(T) is the highest-ranked entry contained in T.

    The empty set is always listed, so the induced table is total; unlisted
    subsets are never chosen.
    """
    n = len(pref.universe)
    table = []
    for m in range(1 << n):
        for entry in pref._masks:
            if entry & ~m == 0:
                table.append(entry)
                break
    return ChoiceFunction(pref.owner, pref.universe, tuple(table))


def _masks_largest_first(n: int) -> list[int]:
    """All masks over n elements, largest size first, ascending within a size."""
    return sorted(range(1 << n), key=lambda m: (-m.bit_count(), m))


def is_substitutable(cf: ChoiceFunction) -> ValidationResult:
    """Check C(T) & T' <= C(T') for all T' <= T.

    On failure the witness is the first violating (T, T', element) with T
    largest first, then T' largest first (ascending within a size), then the
    lowest-indexed dropped element.
    """
    n = len(cf.universe)
    order = _masks_largest_first(n)
    for big in order:
        chosen_big = cf.table[big]
        if not chosen_big:
            continue
        for small in order:
            if small & ~big:
                continue
            bad = chosen_big & small & ~cf.table[small]
            if bad:
                elem = (bad & -bad).bit_length() - 1
                return ValidationResult(
                    False,
                    (set_of(cf.universe, big), set_of(cf.universe, small), cf.universe[elem]),
                )
    return ValidationResult(True)


def is_consistent(cf: ChoiceFunction) -> ValidationResult:
    """Check C(T') = C(T) whenever C(T) <= T' <= T.

    On failure the witness is the first violating (T, T') with T largest
    first, then T' largest first (ascending within a size).
    """
    n = len(cf.universe)
    order = _masks_largest_first(n)
    for big in order:
        chosen = cf.table[big]
        for small in order:
            if small & ~big or chosen & ~small:
                continue
            if cf.table[small] != chosen:
                return ValidationResult(
                    False, (set_of(cf.universe, big), set_of(cf.universe, small))
                )
    return ValidationResult(True)


def is_path_independent(cf: ChoiceFunction) -> bool:
    """Check C(T | T') = C(C(T) | T') for all pairs of subsets."""
    n = len(cf.universe)
    for a in range(1 << n):
        ca = cf.table[a]
        for b in range(1 << n):
            if cf.table[a | b] != cf.table[ca | b]:
                return False
    return True


def blair_compare(cf: ChoiceFunction, left: Iterable, right: Iterable) -> BlairVerdict:
    """Compare two subsets in the revealed-preference order of cf's owner.

    T is weakly above T' exactly when T = C(T | T'); EQUAL only for identical
    sets, INCOMPARABLE when neither set is chosen from the union.
    """
    lm = mask_of(cf.universe, left)
    rm = mask_of(cf.universe, right)
    if lm == rm:
        return BlairVerdict.EQUAL
    c = cf.table[lm | rm]
    if c == lm:
        return BlairVerdict.STRICTLY_PREFERS
    if c == rm:
        return BlairVerdict.STRICTLY_DISPREFERRED
    return BlairVerdict.INCOMPARABLE


def worker_prefers_m21(pref: PreferenceList, left: Iterable, right: Iterable) -> bool:
    """Weak raw preference for a many-to-one worker: left is right, or ranked above it.

    Both arguments must be the empty set or a single firm.
    """
    lm = mask_of(pref.universe, left)
    rm = mask_of(pref.universe, right)
    for m in (lm, rm):
        if m and m & (m - 1):
            raise NotSingleton(
                f"{pref.owner.label} compares only single firms or the empty set"
            )
    return lm == rm or pref.rank_of_mask(lm) < pref.rank_of_mask(rm)
