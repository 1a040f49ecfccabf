"""Shared kernel: agent identities, market modes, enumeration limits, bit helpers."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum

MAX_EDGES_ENV = "MATCHKIT_MAX_EDGES"
DEFAULT_MAX_EDGES = 16  # many-to-many: |F|*|W| edge bits
DEFAULT_MAX_ASSIGN_BITS = 20  # many-to-one: |W|*log2(|F|+1) bits


class Side(Enum):
    FIRM = "firm"
    WORKER = "worker"


class Mode(Enum):
    MANY_TO_ONE = "many-to-one"
    MANY_TO_MANY = "many-to-many"


@dataclass(frozen=True, order=False)
class AgentId:
    """One agent: which side it sits on, its index there, and its label."""

    side: Side
    index: int
    label: str

    def _key(self) -> tuple[int, int]:
        return (0 if self.side is Side.FIRM else 1, self.index)

    def __lt__(self, other: "AgentId") -> bool:
        return self._key() < other._key()

    def __repr__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Limits:
    """Caps on exhaustive enumeration; exceeding either raises SizeLimitExceeded."""

    max_edges: int = DEFAULT_MAX_EDGES
    max_assign_bits: int = DEFAULT_MAX_ASSIGN_BITS


def default_limits() -> Limits:
    """Limits from the environment (MATCHKIT_MAX_EDGES sets both caps) or defaults."""
    raw = os.environ.get(MAX_EDGES_ENV)
    if raw is None:
        return Limits()
    value = int(raw)
    return Limits(max_edges=value, max_assign_bits=value)


def assign_bits(n_firms: int, n_workers: int) -> float:
    """log2 of the many-to-one matching count (|F|+1)^|W|."""
    return n_workers * math.log2(n_firms + 1)


def iter_bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def iter_submasks(mask: int):
    """All submasks of mask in ascending numeric order (including 0 and mask)."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask
