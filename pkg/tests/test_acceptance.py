"""Acceptance gate: one test and one report line per shipped guarantee."""

from __future__ import annotations

import time

import pytest

from matchkit import AgentId, Side, make_matching
from matchkit.choice import (
    induce_choice,
    is_consistent,
    is_path_independent,
    is_substitutable,
    make_preference_list,
)
from matchkit.cli import main, serialize_market
from matchkit.domination import DominationKind, classify, find_dominations
from matchkit.errors import ConstructionFailed
from matchkit.fixtures import ex1, ex2, m69, m69b, mu3, mu4
from matchkit.stability import (
    blocking_pairs,
    desire_sets,
    first_worker_quasi_violation,
    is_firm_quasi_stable,
    is_firm_quasi_stable_definitional,
    is_worker_quasi_stable,
    is_worker_quasi_stable_definitional,
)
from matchkit.theorems import THEOREMS, check_theorem, theorem_ids
from matchkit.witness import (
    blocking_pair_from_quasi_core_violation_m21,
    domination_from_blocking_pair_m21,
    domination_from_double_quasi_m2m,
    domination_from_firm_block_m21,
    setwise_domination_from_qw_violation_m2m,
)

REPORT_LINES: list[str] = []


def record(num: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}"
    REPORT_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_worker_side_one_pair_market():
    t0 = time.monotonic()
    mkt = ex1()
    mu = make_matching(mkt, [("f", "w")])
    rec = classify(mkt, mu)
    ws = find_dominations(mkt, mu, DominationKind.DOMINATION)
    dt = time.monotonic() - t0
    ok = (
        rec.individually_rational is False
        and rec.worker_quasi_core is True
        and len(ws) >= 1
        and all(
            w.dominating.render() == "(empty)" and w.coalition.render() == "{f}"
            for w in ws
        )
        and dt < 1.0
    )
    record(1, ok, f"IR=false, worker-quasi-core=true, all {len(ws)} domination "
                  f"witness(es) are (empty) via {{f}} in {dt:.3f}s (< 1s)")


def test_criterion_02_firm_side_one_pair_market():
    t0 = time.monotonic()
    mkt = ex2()
    mu = make_matching(mkt, [("f", "w")])
    rec = classify(mkt, mu)
    ws = find_dominations(mkt, mu, DominationKind.DOMINATION)
    dt = time.monotonic() - t0
    ok = (
        rec.individually_rational is False
        and rec.firm_quasi_core is True
        and len(ws) >= 1
        and all(
            w.dominating.render() == "(empty)" and w.coalition.render() == "{w}"
            for w in ws
        )
        and dt < 1.0
    )
    record(2, ok, f"IR=false, firm-quasi-core=true, all {len(ws)} domination "
                  f"witness(es) are (empty) via {{w}} in {dt:.3f}s (< 1s)")


def test_criterion_03_full_employment_matching():
    t0 = time.monotonic()
    mkt = m69()
    mu = mu3()
    rec = classify(mkt, mu)
    v = first_worker_quasi_violation(mkt, mu)
    dt = time.monotonic() - t0
    ok = (
        rec.individually_rational is True
        and rec.core is True
        and rec.worker_quasi_core is True
        and rec.worker_quasi_stable is False
        and rec.pairwise_stable is False
        and v is not None
        and v.agent.label == "w1"
        and sorted(a.label for a in v.added) == ["f1"]
        and sorted(a.label for a in v.union_choice) == ["f1", "f2"]
        and dt < 30.0
    )
    record(3, ok, "IR/core/worker-quasi-core=true, stable/worker-quasi-stable=false, "
                  f"violation '{v.render() if v else None}' in {dt:.2f}s (< 30s)")


def test_criterion_04_grand_hire_matching():
    t0 = time.monotonic()
    mkt = m69b()
    mu = mu4()
    rec = classify(mkt, mu)
    pairs = [(p.firm.label, p.worker.label) for p in blocking_pairs(mkt, mu)]
    dt = time.monotonic() - t0
    ok = (
        rec.individually_rational is True
        and rec.core is True
        and rec.worker_quasi_stable is True
        and rec.firm_quasi_stable is False
        and pairs == [("f1", "w1")]
        and dt < 30.0
    )
    record(4, ok, f"IR/core/worker-quasi-stable/firm-quasi-stable bits match; "
                  f"blocking pairs = {pairs}, required exactly [('f1', 'w1')] "
                  f"({dt:.2f}s, < 30s)")


def test_criterion_05_many_to_one_theorems(m21_evaluated):
    t0 = time.monotonic()
    ids = theorem_ids("m21")
    counterexamples = 0
    failed = []
    for name, mkt, sets, universe in m21_evaluated:
        for tid in ids:
            res = check_theorem(THEOREMS[tid], mkt, sets, universe)
            counterexamples += len(res.counterexamples)
            if not res.holds:
                failed.append((name, tid))
    dt = time.monotonic() - t0
    ok = len(ids) == 5 and counterexamples == 0 and not failed and dt < 120.0
    record(5, ok, f"{len(ids)} theorems x {len(m21_evaluated)} many-to-one markets, "
                  f"{counterexamples} counterexamples{' ' + repr(failed) if failed else ''} "
                  f"in {dt:.2f}s (< 2min)")


def test_criterion_06_many_to_many_theorems(m2m_evaluated):
    t0 = time.monotonic()
    ids = theorem_ids("m2m")
    counterexamples = 0
    failed = []
    for name, mkt, sets, universe in m2m_evaluated:
        for tid in ids:
            res = check_theorem(THEOREMS[tid], mkt, sets, universe)
            counterexamples += len(res.counterexamples)
            if not res.holds:
                failed.append((name, tid))
    dt = time.monotonic() - t0
    ok = len(ids) == 7 and counterexamples == 0 and not failed and dt < 600.0
    record(6, ok, f"{len(ids)} theorems x {len(m2m_evaluated)} many-to-many markets, "
                  f"{counterexamples} counterexamples{' ' + repr(failed) if failed else ''} "
                  f"in {dt:.2f}s (< 10min)")


def test_criterion_07_shortcut_equals_definition(m21_evaluated, m2m_evaluated):
    t0 = time.monotonic()
    checked = disagreements = 0
    for corpus in (m21_evaluated, m2m_evaluated):
        for _name, mkt, _sets, universe in corpus:
            for mu in universe:
                checked += 1
                if is_worker_quasi_stable(mkt, mu) != is_worker_quasi_stable_definitional(mkt, mu):
                    disagreements += 1
                if is_firm_quasi_stable(mkt, mu) != is_firm_quasi_stable_definitional(mkt, mu):
                    disagreements += 1
    dt = time.monotonic() - t0
    ok = disagreements == 0 and checked > 0
    record(7, ok, f"shortcut vs definitional quasi-stability on {checked} matchings "
                  f"(both sides): {disagreements} disagreements in {dt:.2f}s")


def test_criterion_08_validator_soundness():
    t0 = time.monotonic()
    tables = 0
    all_pass = True
    for mkt in (m69(), m69b()):
        for a in mkt.firms + mkt.workers:
            cf = mkt.choice_of(a)
            tables += 1
            all_pass = (
                all_pass
                and is_substitutable(cf).ok
                and is_consistent(cf).ok
                and is_path_independent(cf)
            )
    probe = AgentId(Side.FIRM, 0, "f")
    universe = tuple(AgentId(Side.WORKER, i, f"w{i + 1}") for i in range(3))
    bad = induce_choice(make_preference_list(probe, universe, [{"w1", "w2"}, {"w3"}, set()]))
    res = is_substitutable(bad)
    witness_ok = (
        not res.ok
        and sorted(a.label for a in res.witness[0]) == ["w1", "w2", "w3"]
        and sorted(a.label for a in res.witness[1]) == ["w1", "w3"]
        and res.witness[2].label == "w1"
        and not is_path_independent(bad)
    )
    dt = time.monotonic() - t0
    ok = tables == 12 and all_pass and witness_ok
    record(8, ok, f"{tables}/12 fixture tables pass all three validators; pair-first "
                  f"counterexample fails with witness ({{w1 w2 w3}}, {{w1 w3}}, w1) "
                  f"in {dt:.2f}s")


def _moved_workers(mu, dominating, coalition):
    """Coalition workers who are matched in mu and lose part of it when dominated."""
    return [
        a
        for a in sorted(coalition.members)
        if a.side is Side.WORKER
        and mu.partners(a)
        and (mu.partners(a) - dominating.partners(a))
    ]


def test_criterion_09_constructions_self_verify(m21_evaluated, m2m_evaluated):
    t0 = time.monotonic()
    reports = []
    round_trips = 0

    for _name, mkt, sets, universe in m21_evaluated:
        ir = set(sets["I"])
        qw_core = set(sets["C_QW"])
        for mu in universe:
            for pair in blocking_pairs(mkt, mu):
                reports.append(
                    domination_from_blocking_pair_m21(mkt, mu, (pair.firm, pair.worker))
                )
            ds = desire_sets(mkt, mu)
            for f in mkt.firms:
                t = ds.workers_desiring_firm[f]
                if t:
                    try:
                        reports.append(domination_from_firm_block_m21(mkt, mu, f, t))
                    except ConstructionFailed:
                        pass  # the firm rejects every worker of T: nothing to build
            if mu in ir and mu not in qw_core:
                witness = classify(mkt, mu).witnesses["C_QW"]
                movers = _moved_workers(mu, witness.dominating, witness.coalition)
                assert movers, "worker-quasi-core witness without a moved matched worker"
                pair = blocking_pair_from_quasi_core_violation_m21(
                    mkt, mu, witness.dominating, witness.coalition, movers[0]
                )
                assert mu.partners(pair.worker), "extracted worker must be matched"
                back = domination_from_blocking_pair_m21(mkt, mu, (pair.firm, pair.worker))
                reports.append(back)
                assert _moved_workers(mu, back.matching, back.coalition), (
                    "rebuilt domination must move the worker"
                )
                round_trips += 1

    for _name, mkt, sets, universe in m2m_evaluated:
        ir = set(sets["I"])
        qw = set(sets["QW"])
        qf = set(sets["QF"])
        stable = set(sets["S"])
        for mu in universe:
            if mu in ir and mu not in qw:
                v = first_worker_quasi_violation(mkt, mu)
                reports.append(
                    setwise_domination_from_qw_violation_m2m(mkt, mu, v.agent, v.added)
                )
            if mu in qw and mu in qf and mu not in stable:
                pair = blocking_pairs(mkt, mu)[0]
                reports.append(
                    domination_from_double_quasi_m2m(mkt, mu, (pair.firm, pair.worker))
                )

    verified = sum(1 for r in reports if r.verified)
    dt = time.monotonic() - t0
    ok = reports and verified == len(reports) and round_trips > 0
    record(9, ok, f"{verified}/{len(reports)} construction reports verified; "
                  f"{round_trips} quasi-core violations round-tripped through a "
                  f"matched-worker blocking pair in {dt:.2f}s")


def test_criterion_10_verify_is_deterministic(tmp_path, capsys):
    path = tmp_path / "m.market"
    path.write_text(serialize_market(m69b()))
    runs = []
    for _ in range(2):
        assert main(["verify", str(path)]) == 0
        runs.append(capsys.readouterr().out)
    gen_argv = [
        "verify", "--gen", "--seed", "20260819", "--count", "6",
        "--firms", "2", "--workers", "2", "--mode", "many-to-many",
        "--strategy", "mixed",
    ]
    gen_runs = []
    for _ in range(2):
        assert main(gen_argv) == 0
        gen_runs.append(capsys.readouterr().out)
    ok = runs[0] == runs[1] and runs[0] != "" and gen_runs[0] == gen_runs[1]
    record(10, ok, "two file runs and two generated-corpus runs of the verify "
                   "command are byte-identical")
