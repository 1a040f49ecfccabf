"""Deterministic market generation and the SplitMix64 stream."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import matchkit.gen
from matchkit import GenConfig, Mode, gen_market
from matchkit.choice import is_consistent, is_path_independent, is_substitutable
from matchkit.errors import ConfigInvalid, InvalidPreferenceList, RetriesExhausted
from matchkit.gen import SplitMix64, Strategy, gen_corpus, subseed


def test_stream_known_answers():
    r = SplitMix64(0)
    assert [r.next64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_stream_helpers_are_frozen():
    assert SplitMix64(1).frac() == pytest.approx(0.5665615751722809)
    xs = list(range(5))
    SplitMix64(7).shuffle(xs)
    assert xs == [4, 1, 3, 0, 2]
    assert subseed(20260819, 0) == 0xFBEF8D8855DC9E84
    assert subseed(20260819, 1) == 0x6D2E73B78AF37120
    assert subseed(20260819, 0) != subseed(20260819, 1)


def test_below_is_uniformly_bounded():
    r = SplitMix64(3)
    draws = [r.below(6) for _ in range(200)]
    assert set(draws) <= set(range(6))
    assert len(set(draws)) == 6


def test_generation_is_deterministic():
    cfg = GenConfig(seed=99, n_firms=3, n_workers=3, mode=Mode.MANY_TO_MANY)
    assert gen_market(cfg) == gen_market(cfg)
    other = GenConfig(seed=100, n_firms=3, n_workers=3, mode=Mode.MANY_TO_MANY)
    assert gen_market(cfg) != gen_market(other)


def test_corpus_uses_child_seeds():
    cfg = GenConfig(seed=20260819, n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE)
    corpus = gen_corpus(cfg, 3)
    assert len(corpus) == 3
    child = GenConfig(
        seed=subseed(20260819, 1), n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE
    )
    assert corpus[1] == gen_market(child)


def test_quota_bound_holds_on_every_entry():
    cfg = GenConfig(
        seed=11, n_firms=3, n_workers=3, mode=Mode.MANY_TO_MANY, quota_range=(1, 2)
    )
    mkt = gen_market(cfg)
    for table in list(mkt._ftab) + list(mkt._wtab):
        assert all(entry.bit_count() <= 2 for entry in table)


def test_generated_tables_pass_all_validators():
    for strategy in Strategy:
        cfg = GenConfig(
            seed=5, n_firms=2, n_workers=3, mode=Mode.MANY_TO_MANY, strategy=strategy
        )
        mkt = gen_market(cfg)
        for a in mkt.firms + mkt.workers:
            cf = mkt.choice_of(a)
            for check in (is_substitutable, is_consistent):
                result = check(cf)
                assert result.ok and result.witness is None
            assert is_path_independent(cf)


def test_m21_workers_hold_rankings():
    mkt = gen_market(GenConfig(seed=5, n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE))
    w1 = mkt.agent("w1")
    assert mkt.pref_of(w1).ranking[-1] == frozenset()
    with pytest.raises(InvalidPreferenceList):
        mkt.choice_of(w1)


@pytest.mark.parametrize(
    ("kwargs", "fragment"),
    [
        (dict(n_firms=0, n_workers=2, mode=Mode.MANY_TO_ONE), "at least one agent"),
        (
            dict(n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE, quota_range=(2, 1)),
            "not an integer range",
        ),
        (
            dict(n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE, quota_range=(1, 3)),
            "exceeds the 2 workers",
        ),
        (
            dict(n_firms=2, n_workers=3, mode=Mode.MANY_TO_MANY, quota_range=(1, 3)),
            "exceeds the 2 firms",
        ),
        (
            dict(n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE, acceptability_prob=1.5),
            "probability",
        ),
    ],
)
def test_config_validation(kwargs, fragment):
    with pytest.raises(ConfigInvalid, match=fragment):
        GenConfig(seed=1, **kwargs)


def test_subset_rejection_retries_can_exhaust(monkeypatch):
    monkeypatch.setattr(matchkit.gen, "MAX_RETRIES", 0)
    cfg = GenConfig(
        seed=5,
        n_firms=2,
        n_workers=2,
        mode=Mode.MANY_TO_MANY,
        strategy=Strategy.SUBSET_REJECTION,
    )
    with pytest.raises(RetriesExhausted):
        gen_market(cfg)


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**63 - 1),
    mode=st.sampled_from(list(Mode)),
    strategy=st.sampled_from(list(Strategy)),
)
def test_generation_always_yields_valid_markets(seed, mode, strategy):
    """Property: any config produces a market that passes construction checks."""
    cfg = GenConfig(seed=seed, n_firms=2, n_workers=2, mode=mode, strategy=strategy)
    assert gen_market(cfg) == gen_market(cfg)
