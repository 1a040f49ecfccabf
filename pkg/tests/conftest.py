"""Shared corpora and acceptance-report plumbing."""

from __future__ import annotations

import sys

import pytest

from matchkit import (
    GenConfig,
    Mode,
    Strategy,
    enumerate_matchings,
    gen_market,
    stability_sets,
    subseed,
)
from matchkit.fixtures import ex1, ex2, m69, m69b

PARENT_SEED = 20260819
SCHEDULE = [(2, 2), (3, 2), (2, 3), (3, 3)]


def _size(k: int) -> tuple[int, int]:
    return SCHEDULE[k % len(SCHEDULE)]


def build_m21_corpus() -> list[tuple[str, object]]:
    """The many-to-one theorem corpus: both 1x1 fixtures plus 100 seeded markets."""
    markets = [("EX1", ex1()), ("EX2", ex2())]
    for k in range(100):
        nf, nw = _size(k)
        cfg = GenConfig(
            seed=subseed(PARENT_SEED, k),
            n_firms=nf,
            n_workers=nw,
            mode=Mode.MANY_TO_ONE,
            quota_range=(1, 2),
        )
        markets.append((f"qp{k:03d}", gen_market(cfg)))
    return markets


def build_m2m_corpus() -> list[tuple[str, object]]:
    """The many-to-many theorem corpus: both 3x3 fixtures plus 50 mixed-strategy markets."""
    markets = [("M69", m69()), ("M69B", m69b())]
    for k in range(50):
        nf, nw = _size(k)
        strategy = Strategy.QUOTA_PRIORITY if k % 2 == 0 else Strategy.SUBSET_REJECTION
        cfg = GenConfig(
            seed=subseed(PARENT_SEED, k),
            n_firms=nf,
            n_workers=nw,
            mode=Mode.MANY_TO_MANY,
            quota_range=(1, 2),
            strategy=strategy,
        )
        tag = "qp" if strategy is Strategy.QUOTA_PRIORITY else "sr"
        markets.append((f"{tag}{k:03d}", gen_market(cfg)))
    return markets


@pytest.fixture(scope="session")
def m21_corpus():
    return build_m21_corpus()


@pytest.fixture(scope="session")
def m2m_corpus():
    return build_m2m_corpus()


@pytest.fixture(scope="session")
def m21_evaluated(m21_corpus):
    """(name, market, stability sets, all matchings) per many-to-one corpus market."""
    return [
        (name, mkt, stability_sets(mkt), enumerate_matchings(mkt))
        for name, mkt in m21_corpus
    ]


@pytest.fixture(scope="session")
def m2m_evaluated(m2m_corpus):
    """(name, market, stability sets, all matchings) per many-to-many corpus market."""
    return [
        (name, mkt, stability_sets(mkt), enumerate_matchings(mkt))
        for name, mkt in m2m_corpus
    ]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the one-line-per-criterion acceptance report after the run."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
