"""Exhaustive optimum search and the ratio reporting built on it."""

import random
import time
from fractions import Fraction

import pytest

from flexconn import (
    FgcInstance,
    MultiGraph,
    OracleBudget,
    OracleRefusalError,
    SndpInstance,
    ValidationError,
    minimum_cost_subset,
    ratio_report,
)
from flexconn.generators import gen_instance
from flexconn.oracle import exact_opt, worker_count

BOTH = (OracleBudget(strategy="bnb"), OracleBudget(strategy="enumerate"))


def test_budget_validation():
    with pytest.raises(ValidationError):
        OracleBudget(max_checks=0)
    with pytest.raises(ValidationError):
        OracleBudget(strategy="dfs")


def test_hand_predicate_minimum():
    costs = {0: Fraction(3), 1: Fraction(2), 2: Fraction(2)}
    for budget in BOTH:
        res = minimum_cost_subset(
            costs, costs, lambda s: len(s) >= 2, budget=budget
        )
        assert (res.feasible, res.cost, res.edges) == (True, 4, frozenset({1, 2}))


def test_equal_cost_ties_break_lexicographically():
    ids = [0, 1, 2, 3]
    unit = {eid: Fraction(1) for eid in ids}
    free = {eid: Fraction(0) for eid in ids}
    for budget in BOTH:
        res = minimum_cost_subset(ids, unit, lambda s: len(s) >= 2, budget=budget)
        assert res.edges == frozenset({0, 1})
        # zero-cost ids are not padded in either: {0} sorts before {0, 1}
        res = minimum_cost_subset(ids, free, lambda s: len(s) >= 1, budget=budget)
        assert res.cost == 0 and res.edges == frozenset({0})


def test_infeasible_predicate():
    for budget in BOTH:
        res = minimum_cost_subset(
            [0, 1], {0: Fraction(1), 1: Fraction(1)}, lambda s: False, budget=budget
        )
        assert (res.feasible, res.cost, res.edges) == (False, None, None)


def test_exact_opt_hand_instances():
    # a 5-cycle of unsafe edges must be bought whole to survive one failure
    c5 = MultiGraph.build(5, [
        (v, (v + 1) % 5, Fraction(1), False) for v in range(5)
    ])
    res = exact_opt(FgcInstance.uniform(c5, 1, 1))
    assert (res.feasible, res.cost, res.edges) == (True, 5, c5.edge_ids)

    lone = MultiGraph.build(2, [(0, 1, Fraction(7), True)])
    res = exact_opt(FgcInstance(lone, {(0, 1): (1, 1)}))
    assert (res.feasible, res.cost, res.edges) == (True, 7, frozenset({0}))

    path = MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
    ])
    res = exact_opt(SndpInstance(path, {(0, 2): 2}))
    assert (res.feasible, res.cost, res.edges) == (False, None, None)


def test_negative_costs_are_rejected():
    with pytest.raises(ValidationError):
        minimum_cost_subset([0], {0: Fraction(-1)}, lambda s: True)


def test_strategies_agree_on_random_monotone_predicates():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.randint(1, 8)
        ids = list(range(m))
        costs = {eid: Fraction(rng.randint(0, 5)) for eid in ids}
        weights = {eid: rng.randint(0, 2) for eid in ids}
        need = rng.randint(0, 6)

        def pred(subset, weights=weights, need=need):
            return sum(weights[eid] for eid in subset) >= need

        results = [
            minimum_cost_subset(ids, costs, pred, budget=b) for b in BOTH
        ]
        assert results[0] == results[1]


def test_check_budget_refusals():
    ids = list(range(6))
    costs = {eid: Fraction(1) for eid in ids}
    with pytest.raises(OracleRefusalError):
        minimum_cost_subset(
            ids, costs, lambda s: len(s) >= 3, budget=OracleBudget(max_checks=2)
        )
    # enumeration refuses before checking anything at all
    calls = []
    with pytest.raises(OracleRefusalError):
        minimum_cost_subset(
            ids,
            costs,
            lambda s: calls.append(1) or True,
            budget=OracleBudget(max_checks=32, strategy="enumerate"),
        )
    assert not calls


def test_time_budget_refusal():
    ids = list(range(4))
    costs = {eid: Fraction(1) for eid in ids}

    def slow(subset):
        time.sleep(0.002)
        return True

    with pytest.raises(OracleRefusalError):
        minimum_cost_subset(
            ids, costs, slow, budget=OracleBudget(time_limit=1e-9)
        )


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("FLEXCONN_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("FLEXCONN_THREADS", "zero")
    with pytest.raises(ValidationError):
        worker_count()
    monkeypatch.setenv("FLEXCONN_THREADS", "0")
    with pytest.raises(ValidationError):
        worker_count()
    monkeypatch.delenv("FLEXCONN_THREADS")
    assert worker_count() >= 1


def test_enumeration_is_thread_count_independent(monkeypatch):
    ids = list(range(13))          # enough subsets for several chunks
    costs = {eid: Fraction(eid % 3) for eid in ids}

    def pred(subset):
        return sum(eid for eid in subset) >= 40

    results = []
    for threads in ("1", "4"):
        monkeypatch.setenv("FLEXCONN_THREADS", threads)
        results.append(
            minimum_cost_subset(
                ids, costs, pred,
                budget=OracleBudget(max_checks=10**5, strategy="enumerate"),
            )
        )
    assert results[0] == results[1]


def test_exact_opt_dispatch():
    g = MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
        (0, 2, Fraction(5), True),
    ])
    res = exact_opt(SndpInstance(g, {(0, 2): 1}))
    assert res.cost == 2 and res.edges == frozenset({0, 1})
    with pytest.raises(ValidationError):
        exact_opt(object())


def test_ratio_report_contents_and_render():
    instances = [
        (f"fgc-q1-{seed}", gen_instance("fgc-q1", seed)) for seed in (3, 4)
    ]
    report = ratio_report("fgc-q1", instances)
    assert report.kind == "fgc-q1" and len(report.entries) == 2
    for entry in report.entries:
        assert entry.ratio == entry.solver_cost / entry.opt_cost
        assert entry.within == (entry.solver_cost <= entry.bound * entry.opt_cost)
    text = report.render()
    lines = text.splitlines()
    assert lines[0] == "kind=fgc-q1 instances=2"
    assert lines[1].startswith("name=fgc-q1-3 solver=")
    assert lines[-1].startswith("summary worst=")
    assert text == report.render()
    assert report.worst() == max(e.ratio for e in report.entries)
    with pytest.raises(ValidationError):
        ratio_report("mst", instances)
