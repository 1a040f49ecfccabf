"""Seeded random market generation with always-valid choice functions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ._core import Mode
from .errors import ConfigInvalid, RetriesExhausted
from .model import Market, make_market

# SplitMix64: 64-bit state advances by the golden-gamma; outputs are the
# finalized state. Chosen so corpora reproduce bit-for-bit anywhere.
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

MAX_RETRIES = 10_000


def mix64(x: int) -> int:
    """The SplitMix64 output finalizer."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK
    return x ^ (x >> 31)


class SplitMix64:
    """Deterministic 64-bit stream: state += golden gamma, output = mix64(state)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n)."""
        return self.next64() % n

    def frac(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next64() >> 11) * 2.0**-53

    def chance(self, p: float) -> bool:
        return self.frac() < p

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, last position first."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def subseed(seed: int, index: int) -> int:
    """Independent child seed number `index` of a parent seed."""
    return mix64((seed + (index + 1) * _GOLDEN) & _MASK)


class Strategy(Enum):
    QUOTA_PRIORITY = "quota-priority"
    SUBSET_REJECTION = "subset-rejection"


@dataclass(frozen=True)
class GenConfig:
    """Everything that determines one generated market."""

    seed: int
    n_firms: int
    n_workers: int
    mode: Mode
    quota_range: tuple[int, int] = (1, 2)
    acceptability_prob: float = 0.8
    strategy: Strategy = Strategy.QUOTA_PRIORITY

    def __post_init__(self):
        if self.n_firms < 1 or self.n_workers < 1:
            raise ConfigInvalid("both sides need at least one agent")
        lo, hi = self.quota_range
        if not (0 <= lo <= hi):
            raise ConfigInvalid(f"quota range [{lo}, {hi}] is not an integer range from 0")
        if hi > self.n_workers:
            raise ConfigInvalid(f"firm quota bound {hi} exceeds the {self.n_workers} workers")
        if self.mode is Mode.MANY_TO_MANY and hi > self.n_firms:
            raise ConfigInvalid(f"worker quota bound {hi} exceeds the {self.n_firms} firms")
        if not 0.0 <= self.acceptability_prob <= 1.0:
            raise ConfigInvalid("acceptability probability must lie in [0, 1]")


def _quota_priority_ranking(rng: SplitMix64, opposite: list[str], quota_range: tuple[int, int], p: float):
    """Top-q choice data: (ordered acceptable partners, quota)."""
    acceptable = [x for x in opposite if rng.chance(p)]
    rng.shuffle(acceptable)
    lo, hi = quota_range
    quota = lo + rng.below(hi - lo + 1)
    return acceptable, quota


def _quota_priority_table(order: list[str], quota: int, opposite: list[str]) -> dict:
    """Choice mapping that keeps the top-quota acceptable partners present."""
    pos = {x: k for k, x in enumerate(order)}
    table = {}
    n = len(opposite)
    for mask in range(1 << n):
        present = [opposite[i] for i in range(n) if mask >> i & 1]
        ranked = sorted((x for x in present if x in pos), key=pos.__getitem__)
        table[frozenset(present)] = frozenset(ranked[:quota])
    return table


def _subset_rejection_entry(rng: SplitMix64, opposite: list[str]) -> dict:
    """Random consistent-substitutable table via ranked random subset families."""
    from .choice import induce_choice, is_consistent, is_substitutable, make_preference_list
    from ._core import AgentId, Side

    n = len(opposite)
    probe = AgentId(Side.FIRM, 0, "probe")
    universe = tuple(AgentId(Side.WORKER, i, x) for i, x in enumerate(opposite))
    for _ in range(MAX_RETRIES):
        family = [frozenset()]
        for mask in range(1, 1 << n):
            if rng.chance(0.5):
                family.append(frozenset(opposite[i] for i in range(n) if mask >> i & 1))
        rng.shuffle(family)
        pref = make_preference_list(probe, universe, family)
        cf = induce_choice(pref)
        if is_substitutable(cf) and is_consistent(cf):
            return {
                frozenset(a.label for a in k): frozenset(a.label for a in v)
                for k, v in cf.as_dict().items()
            }
    raise RetriesExhausted(
        f"no valid table after {MAX_RETRIES} ranked subset families"
    )


def gen_market(config: GenConfig) -> Market:
    """One pseudorandom market, fully determined by the config.

    Draw order is fixed: firms by index then workers by index; per agent, one
    acceptability draw per opposite-side agent in index order, a shuffle, and
    one quota draw. Subset-rejection agents instead consume draws until a
    table passes both validators.
    """
    rng = SplitMix64(config.seed)
    firms = [f"f{i + 1}" for i in range(config.n_firms)]
    workers = [f"w{j + 1}" for j in range(config.n_workers)]
    data = {}
    for f in firms:
        if config.strategy is Strategy.QUOTA_PRIORITY:
            order, quota = _quota_priority_ranking(
                rng, workers, config.quota_range, config.acceptability_prob
            )
            data[f] = _quota_priority_table(order, quota, workers)
        else:
            data[f] = _subset_rejection_entry(rng, workers)
    for w in workers:
        if config.mode is Mode.MANY_TO_ONE:
            acceptable = [f for f in firms if rng.chance(config.acceptability_prob)]
            rng.shuffle(acceptable)
            ranking = [frozenset([f]) for f in acceptable] + [frozenset()]
            data[w] = ranking
        elif config.strategy is Strategy.QUOTA_PRIORITY:
            order, quota = _quota_priority_ranking(
                rng, firms, config.quota_range, config.acceptability_prob
            )
            data[w] = _quota_priority_table(order, quota, firms)
        else:
            data[w] = _subset_rejection_entry(rng, firms)
    return make_market(firms, workers, config.mode, data)


def gen_corpus(config: GenConfig, count: int) -> list[Market]:
    """count markets from independent child seeds of config.seed."""
    out = []
    for k in range(count):
        child = GenConfig(
            seed=subseed(config.seed, k),
            n_firms=config.n_firms,
            n_workers=config.n_workers,
            mode=config.mode,
            quota_range=config.quota_range,
            acceptability_prob=config.acceptability_prob,
            strategy=config.strategy,
        )
        out.append(gen_market(child))
    return out
