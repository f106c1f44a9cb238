"""Cut LP solver: exact vertices, certified objectives, oracle contract."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flexconn import (
    CutRow,
    LpInfeasibleError,
    LpResourceError,
    OracleContractError,
    solve_cut_lp,
)

scipy_opt = pytest.importorskip("scipy.optimize")


def static_oracle(rows):
    def oracle(x):
        for r in rows:
            if sum(x[e] for e in r.edge_ids) < r.rhs:
                return r
        return None
    return oracle


def test_triangle_cover_has_half_integral_vertex():
    # cover three overlapping pairs; the optimum sits at x = 1/2 everywhere
    rows = [
        CutRow(frozenset({0, 1}), Fraction(1)),
        CutRow(frozenset({1, 2}), Fraction(1)),
        CutRow(frozenset({0, 2}), Fraction(1)),
    ]
    costs = {i: Fraction(1) for i in range(3)}
    sol = solve_cut_lp(costs, {}, static_oracle(rows))
    assert sol.objective == Fraction(3, 2)
    assert sol.is_vertex
    assert all(sol.x[i] == Fraction(1, 2) for i in range(3))
    assert tuple(sol.fractional_ids()) == (0, 1, 2)


def test_unconstrained_edges_stay_at_zero():
    rows = [CutRow(frozenset({0}), Fraction(1))]
    costs = {0: Fraction(2), 1: Fraction(5)}
    sol = solve_cut_lp(costs, {}, static_oracle(rows))
    assert sol.x == {0: Fraction(1), 1: Fraction(0)}
    assert sol.objective == 2


def test_fixed_edges_cover_rows_and_pay_their_cost():
    rows = [CutRow(frozenset({0, 1}), Fraction(1))]
    costs = {0: Fraction(3), 1: Fraction(1)}
    sol = solve_cut_lp(costs, {0: 1}, static_oracle(rows))
    assert sol.x == {0: Fraction(1), 1: Fraction(0)}
    assert sol.objective == 3
    sol = solve_cut_lp(costs, {1: 0}, static_oracle(rows))
    assert sol.x == {0: Fraction(1), 1: Fraction(0)}


def test_infeasible_row_detected():
    rows = [CutRow(frozenset({0, 1}), Fraction(2))]
    costs = {0: Fraction(1), 1: Fraction(1)}
    with pytest.raises(LpInfeasibleError):
        solve_cut_lp(costs, {1: 0}, static_oracle(rows))
    with pytest.raises(LpInfeasibleError):
        solve_cut_lp(costs, {}, static_oracle([CutRow(frozenset({0}), Fraction(3))]))


def test_oracle_must_name_known_edges():
    def oracle(x):
        return CutRow(frozenset({99}), Fraction(1))
    with pytest.raises(OracleContractError):
        solve_cut_lp({0: Fraction(1)}, {}, oracle)


def test_oracle_must_return_violated_rows():
    # claims a violation that the current point already satisfies
    def oracle(x):
        return CutRow(frozenset({0}), Fraction(0))
    with pytest.raises(OracleContractError):
        solve_cut_lp({0: Fraction(1)}, {}, oracle)


def test_row_budget_enforced():
    rows = [CutRow(frozenset({i}), Fraction(1)) for i in range(5)]
    costs = {i: Fraction(1) for i in range(5)}
    with pytest.raises(LpResourceError):
        solve_cut_lp(costs, {}, static_oracle(rows), max_rows=2)


def test_validates_costs_and_fixed():
    with pytest.raises(Exception):
        solve_cut_lp({0: Fraction(-1)}, {}, static_oracle([]))
    with pytest.raises(Exception):
        solve_cut_lp({0: Fraction(1)}, {0: 2}, static_oracle([]))


def _random_problem(rng):
    k = rng.randint(1, 8)
    ids = list(range(k))
    costs = {i: Fraction(rng.randint(0, 9), rng.choice([1, 2])) for i in ids}
    rows = []
    for _ in range(rng.randint(1, 6)):
        size = rng.randint(1, k)
        members = frozenset(rng.sample(ids, size))
        rows.append(CutRow(members, Fraction(rng.randint(1, size))))
    fixed = {}
    for i in ids:
        if rng.random() < 0.2:
            fixed[i] = rng.choice([0, 1])
    satisfiable = all(
        sum(1 for e in r.edge_ids if fixed.get(e) != 0) >= r.rhs for r in rows
    )
    return ids, costs, rows, fixed, satisfiable


def test_matches_reference_lp_solver():
    import numpy as np

    rng = random.Random(20)
    compared = 0
    for _ in range(150):
        ids, costs, rows, fixed, satisfiable = _random_problem(rng)
        if not satisfiable:
            with pytest.raises(LpInfeasibleError):
                solve_cut_lp(costs, fixed, static_oracle(rows))
            continue
        sol = solve_cut_lp(costs, fixed, static_oracle(rows))
        for r in rows:
            assert sum(sol.x[e] for e in r.edge_ids) >= r.rhs
        for i in ids:
            assert 0 <= sol.x[i] <= 1
            if i in fixed:
                assert sol.x[i] == fixed[i]
        free = [i for i in ids if i not in fixed]
        if not free:
            continue
        c = np.array([float(costs[i]) for i in free])
        a_ub, b_ub = [], []
        for r in rows:
            a_ub.append([-1.0 if i in r.edge_ids else 0.0 for i in free])
            covered = sum(1 for e in r.edge_ids if fixed.get(e) == 1)
            b_ub.append(-(float(r.rhs) - covered))
        res = scipy_opt.linprog(
            c, A_ub=np.array(a_ub), b_ub=np.array(b_ub),
            bounds=[(0, 1)] * len(free), method="highs",
        )
        assert res.status == 0
        reference = res.fun + sum(
            float(costs[i]) for i in ids if fixed.get(i) == 1
        )
        assert abs(float(sol.objective) - reference) < 1e-7
        compared += 1
    assert compared > 50


def test_deterministic_resolve():
    rng = random.Random(4)
    for _ in range(20):
        ids, costs, rows, fixed, satisfiable = _random_problem(rng)
        if not satisfiable:
            continue
        a = solve_cut_lp(costs, fixed, static_oracle(rows))
        b = solve_cut_lp(costs, fixed, static_oracle(rows))
        assert a.x == b.x and a.objective == b.objective


@given(st.integers(0, 10_000))
def test_single_row_closed_form(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 6)
    costs = {i: Fraction(rng.randint(1, 9)) for i in range(k)}
    need = rng.randint(1, k)
    row = CutRow(frozenset(range(k)), Fraction(need))
    sol = solve_cut_lp(costs, {}, static_oracle([row]))
    cheapest = sorted(costs.values())[:need]
    assert sol.objective == sum(cheapest, Fraction(0))
