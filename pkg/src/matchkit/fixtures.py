"""Hand-written fixture markets and their matchings of interest."""

from __future__ import annotations

from functools import lru_cache

from ._core import Mode
from .model import Market, Matching, make_matching, make_market


@lru_cache(maxsize=None)
def ex1() -> Market:
    """1x1 many-to-one market: the firm rejects its only worker, who wants it."""
    return make_market(
        ["f"],
        ["w"],
        Mode.MANY_TO_ONE,
        {
            "f": [frozenset(), frozenset({"w"})],
            "w": [frozenset({"f"}), frozenset()],
        },
    )


@lru_cache(maxsize=None)
def ex2() -> Market:
    """1x1 many-to-one market: the firm wants its only worker, who rejects it."""
    return make_market(
        ["f"],
        ["w"],
        Mode.MANY_TO_ONE,
        {
            "f": [frozenset({"w"}), frozenset()],
            "w": [frozenset(), frozenset({"f"})],
        },
    )


def mu1(market: Market | None = None) -> Matching:
    """The matched pair in ex1 (not individually rational for the firm)."""
    return make_matching(market or ex1(), [("f", "w")])


def mu2(market: Market | None = None) -> Matching:
    """The matched pair in ex2 (not individually rational for the worker)."""
    return make_matching(market or ex2(), [("f", "w")])


def _sets(*names: str) -> list[frozenset[str]]:
    return [frozenset(n.split()) if n else frozenset() for n in names]


@lru_cache(maxsize=None)
def m69() -> Market:
    """3x3 many-to-many market with pair-first preferences on both sides."""
    return make_market(
        ["f1", "f2", "f3"],
        ["w1", "w2", "w3"],
        Mode.MANY_TO_MANY,
        {
            "f1": _sets("w1 w2", "w2 w3", "w1", "w2", "w3", ""),
            "f2": _sets("w2 w3", "w1 w3", "w2", "w1", "w3", ""),
            "f3": _sets("w1 w3", "w1 w2", "w3", "w1", "w2", ""),
            "w1": _sets("f1 f2", "f2 f3", "f1", "f2", "f3", ""),
            "w2": _sets("f2 f3", "f1 f3", "f2", "f1", "f3", ""),
            "w3": _sets("f1 f3", "f1 f2", "f3", "f1", "f2", ""),
        },
    )


def mu3(market: Market | None = None) -> Matching:
    """The fully-employed matching of m69 (in the core, not worker-quasi-stable)."""
    return make_matching(
        market or m69(),
        [("f1", "w2"), ("f1", "w3"), ("f2", "w1"), ("f2", "w3"), ("f3", "w1"), ("f3", "w2")],
    )


@lru_cache(maxsize=None)
def m69b() -> Market:
    """Variant of m69 where f3 and all workers accept the grand set first."""
    return make_market(
        ["f1", "f2", "f3"],
        ["w1", "w2", "w3"],
        Mode.MANY_TO_MANY,
        {
            "f1": _sets("w1 w2", "w2 w3", "w1", "w2", "w3", ""),
            "f2": _sets("w2 w3", "w1 w3", "w2", "w1", "w3", ""),
            "f3": _sets("w1 w2 w3", "w1 w3", "w1 w2", "w2 w3", "w3", "w1", "w2", ""),
            "w1": _sets("f1 f2 f3", "f1 f2", "f2 f3", "f1 f3", "f1", "f2", "f3", ""),
            "w2": _sets("f1 f2 f3", "f1 f3", "f1 f2", "f2 f3", "f2", "f1", "f3", ""),
            "w3": _sets("f1 f2 f3", "f1 f3", "f1 f2", "f2 f3", "f3", "f1", "f2", ""),
        },
    )


def mu4(market: Market | None = None) -> Matching:
    """The matching of m69b where f3 hires everyone (core, worker-quasi-stable only)."""
    return make_matching(
        market or m69b(),
        [
            ("f1", "w2"),
            ("f1", "w3"),
            ("f2", "w1"),
            ("f2", "w3"),
            ("f3", "w1"),
            ("f3", "w2"),
            ("f3", "w3"),
        ],
    )


FIXTURE_MARKETS = {"ex1": ex1, "ex2": ex2, "m69": m69, "m69b": m69b}

DISPLAYED_MATCHINGS = {
    "mu1": (ex1, mu1),
    "mu2": (ex2, mu2),
    "mu3": (m69, mu3),
    "mu4": (m69b, mu4),
}
