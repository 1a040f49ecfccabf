"""Choice-function validators, induced choices, and the Blair order."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchkit import (
    AgentId,
    BlairVerdict,
    GenConfig,
    Mode,
    NotSingleton,
    Side,
    Strategy,
    blair_compare,
    choose,
    gen_market,
    induce_choice,
    is_consistent,
    is_path_independent,
    is_substitutable,
    make_choice_function,
    make_preference_list,
    worker_prefers_m21,
)
from matchkit.fixtures import ex1, ex2, m69, m69b

W3 = tuple(AgentId(Side.WORKER, i, f"w{i+1}") for i in range(3))
PROBE = AgentId(Side.FIRM, 0, "f")


def _labels(agents):
    return sorted(a.label for a in agents)


def counterexample_table():
    """The pair-first ranking whose induced choice is not substitutable."""
    pl = make_preference_list(PROBE, W3, [{"w1", "w2"}, {"w3"}, set()])
    return induce_choice(pl)


def test_induced_counterexample_values():
    cf = counterexample_table()
    assert _labels(cf.choose(("w1", "w2", "w3"))) == ["w1", "w2"]
    assert _labels(cf.choose(("w1", "w3"))) == ["w3"]
    assert _labels(cf.choose(("w1",))) == []
    assert _labels(cf.choose(("w1", "w2"))) == ["w1", "w2"]
    assert _labels(cf.choose(("w3",))) == ["w3"]
    assert cf.choose(()) == frozenset()


def test_substitutability_witness_is_largest_first():
    res = is_substitutable(counterexample_table())
    assert not res.ok
    big, small, elem = res.witness
    assert _labels(big) == ["w1", "w2", "w3"]
    assert _labels(small) == ["w1", "w3"]
    assert elem.label == "w1"


def test_smaller_substitutability_violations_are_also_genuine():
    # ({w1,w2}, {w1}, w1) violates the same condition further down the scan.
    cf = counterexample_table()
    assert "w1" in {a.label for a in cf.choose(("w1", "w2"))}
    assert cf.choose(("w1",)) == frozenset()


def test_counterexample_fails_path_independence():
    assert not is_path_independent(counterexample_table())


def test_constant_empty_choice_passes_everything():
    cf = induce_choice(make_preference_list(PROBE, W3, [set()]))
    assert all(cf.choose(s) == frozenset() for s in [(), ("w1",), ("w1", "w2", "w3")])
    assert is_substitutable(cf).ok
    assert is_consistent(cf).ok
    assert is_path_independent(cf)


def test_consistency_witness():
    cf = make_choice_function(
        PROBE,
        W3[:2],
        {(): (), ("w1",): (), ("w2",): ("w2",), ("w1", "w2"): ("w1",)},
    )
    res = is_consistent(cf)
    assert not res.ok
    big, small = res.witness
    assert _labels(big) == ["w1", "w2"]
    assert _labels(small) == ["w1"]


def test_fixture_tables_pass_all_validators():
    for mkt in (ex1(), ex2(), m69(), m69b()):
        agents = mkt.firms if mkt.mode is Mode.MANY_TO_ONE else mkt.firms + mkt.workers
        for agent in agents:
            cf = mkt.choice_of(agent)
            assert is_substitutable(cf).ok, agent
            assert is_consistent(cf).ok, agent
            assert is_path_independent(cf), agent


def test_m69_worker_one_table():
    cf = m69().choice_of(m69().agent("w1"))
    assert _labels(cf.choose(("f1", "f2", "f3"))) == ["f1", "f2"]
    assert _labels(cf.choose(("f1", "f3"))) == ["f1"]
    assert _labels(cf.choose(("f2", "f3"))) == ["f2", "f3"]
    assert _labels(cf.choose(("f1", "f2"))) == ["f1", "f2"]


def test_blair_compare_m69_firm_one():
    cf = m69().choice_of(m69().agent("f1"))
    assert blair_compare(cf, ("w1", "w2"), ("w2", "w3")) is BlairVerdict.STRICTLY_PREFERS
    assert blair_compare(cf, ("w2", "w3"), ("w1", "w2")) is BlairVerdict.STRICTLY_DISPREFERRED
    assert blair_compare(cf, ("w1", "w2"), ("w1", "w2")) is BlairVerdict.EQUAL


def test_blair_compare_incomparable_under_empty_first_ranking():
    F2 = tuple(AgentId(Side.FIRM, i, f"f{i+1}") for i in range(2))
    owner = AgentId(Side.WORKER, 0, "w")
    cf = induce_choice(make_preference_list(owner, F2, [set(), {"f1"}, {"f2"}]))
    assert blair_compare(cf, ("f1",), ("f2",)) is BlairVerdict.INCOMPARABLE


def test_worker_prefers_m21():
    one = ex1()
    w = one.agent("w")
    assert worker_prefers_m21(one.pref_of(w), ("f",), ())
    assert worker_prefers_m21(one.pref_of(w), ("f",), ("f",))
    two = ex2()
    assert not worker_prefers_m21(two.pref_of(two.agent("w")), ("f",), ())
    assert worker_prefers_m21(two.pref_of(two.agent("w")), (), ("f",))


def test_worker_prefers_rejects_multi_firm_sets():
    mkt = gen_market(GenConfig(seed=5, n_firms=2, n_workers=2, mode=Mode.MANY_TO_ONE))
    with pytest.raises(NotSingleton):
        worker_prefers_m21(mkt.pref_of(mkt.agent("w1")), ("f1", "f2"), ())
    with pytest.raises(NotSingleton):
        worker_prefers_m21(mkt.pref_of(mkt.agent("w1")), (), ("f1", "f2"))


def _any_market(seed: int, strat: Strategy, mode: Mode):
    return gen_market(
        GenConfig(seed=seed, n_firms=2, n_workers=3, mode=mode, strategy=strat)
    )


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**63 - 1),
    strat=st.sampled_from(list(Strategy)),
    mode=st.sampled_from(list(Mode)),
)
def test_generated_tables_are_path_independent(seed, strat, mode):
    """Property: substitutable + consistent tables satisfy path independence."""
    mkt = _any_market(seed, strat, mode)
    for agent in mkt.firms + mkt.workers:
        if mkt.mode is Mode.MANY_TO_ONE and agent.side is Side.WORKER:
            continue
        cf = mkt.choice_of(agent)
        assert is_substitutable(cf).ok
        assert is_consistent(cf).ok
        assert is_path_independent(cf)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**63 - 1),
    strat=st.sampled_from(list(Strategy)),
    data=st.data(),
)
def test_choose_in_stages(seed, strat, data):
    """Property: C(T | T') == C(C(T) | T') on validated tables."""
    mkt = _any_market(seed, strat, Mode.MANY_TO_MANY)
    agent = data.draw(st.sampled_from(mkt.firms + mkt.workers))
    cf = mkt.choice_of(agent)
    universe = [a.label for a in cf.universe]
    t = data.draw(st.sets(st.sampled_from(universe)))
    t2 = data.draw(st.sets(st.sampled_from(universe)))
    staged = choose(cf, {a.label for a in choose(cf, t)} | t2)
    assert staged == choose(cf, t | t2)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**63 - 1), data=st.data())
def test_choice_is_contained_and_total(seed, data):
    """Property: induced tables choose subsets of their input for every input."""
    mkt = _any_market(seed, Strategy.SUBSET_REJECTION, Mode.MANY_TO_MANY)
    agent = data.draw(st.sampled_from(mkt.firms + mkt.workers))
    cf = mkt.choice_of(agent)
    t = data.draw(st.sets(st.sampled_from([a.label for a in cf.universe])))
    chosen = {a.label for a in choose(cf, t)}
    assert chosen <= t
