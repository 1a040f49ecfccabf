"""Exception taxonomy for market construction, analysis and parsing."""

from __future__ import annotations


class MatchkitError(Exception):
    """Base class for all library errors."""


class DuplicateLabel(MatchkitError):
    """The same agent label appears twice in a market description."""


class UnknownAgent(MatchkitError):
    """A label or agent id does not belong to the market at hand."""


class MissingChoiceEntry(MatchkitError):
    """A choice table lacks an entry for some subset of the opposite side."""


class InvalidChoiceEntry(MatchkitError):
    """A choice table entry violates C(T) <= T."""


class SubstitutabilityViolation(MatchkitError):
    """A choice function rejects a contract it accepted from a larger set.

    Carries the first violating triple: agent label, T, T' (frozensets of
    labels) and the offending element label.
    """

    def __init__(self, agent: str, big: frozenset, small: frozenset, element: str):
        self.agent = agent
        self.big = big
        self.small = small
        self.element = element
        super().__init__(
            f"choice of {agent} is not substitutable: {element!r} chosen from "
            f"{sorted(big)} but not from {sorted(small)}"
        )


class ConsistencyViolation(MatchkitError):
    """C(T') != C(T) for some C(T) <= T' <= T.

    Carries the first violating pair: agent label, T, T' (frozensets of labels).
    """

    def __init__(self, agent: str, big: frozenset, small: frozenset):
        self.agent = agent
        self.big = big
        self.small = small
        super().__init__(
            f"choice of {agent} is not consistent: C({sorted(small)}) differs "
            f"from C({sorted(big)}) although the latter fits inside {sorted(small)}"
        )


class InvalidPreferenceList(MatchkitError):
    """A preference ranking breaks its structural rules (no empty set, duplicates,
    or a non-singleton entry on the worker side of a many-to-one market)."""


class ManyToOneCapacityViolation(MatchkitError):
    """A worker in a many-to-one market was assigned more than one firm."""


class SizeLimitExceeded(MatchkitError):
    """An exhaustive operation would exceed the configured enumeration cap."""


class EmptyCoalition(MatchkitError):
    """A coalition must contain at least one agent."""


class IdenticalMatchings(MatchkitError):
    """Domination is only defined between two distinct matchings."""


class NotSingleton(MatchkitError):
    """Many-to-one worker comparisons only accept the empty set or one firm."""


class NotABlockingPair(MatchkitError):
    """The given (firm, worker) pair does not block the matching."""


class EmptyT(MatchkitError):
    """The firm-side construction needs a nonempty set of desiring workers."""


class TNotInDesireSet(MatchkitError):
    """The given workers are not all in the firm's desire set."""


class PreconditionFailed(MatchkitError):
    """A construction's documented preconditions do not hold."""


class ConstructionFailed(MatchkitError):
    """A constructed witness failed its own re-verification.

    Raised instead of ever returning an unverified report.
    """


class RetriesExhausted(MatchkitError):
    """Rejection sampling gave up after the configured retry budget."""


class ConfigInvalid(MatchkitError):
    """A generator configuration is structurally impossible."""


class MarketSyntaxError(MatchkitError):
    """A market file or matching expression failed to parse.

    Carries 1-based line and column of the first offending character.
    """

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")
