"""Node-failure connectivity: verifiers, inflation, and the rooted solver."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexconn import (
    InfeasibleInstanceError,
    InvalidQueryError,
    MultiGraph,
    NcFgcInstance,
    RootedQConnInstance,
    UnsupportedInstanceError,
    ValidationError,
    edge_connectivity,
    minimum_cost_subset,
    q_connectivity,
    reduce_by_inflation,
    rooted_q_flow,
    solve_p_ncfgc,
    solve_rooted_qconn,
    to_antiparallel_digraph,
    verify_ncfgc,
)
from flexconn.generators import GenConfig, random_multigraph
from flexconn.oracle import exact_opt

from strategies import edge_subsets, multigraphs, node_pairs


def double_path():
    """Two parallel edges on each side of a middle node."""
    return MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
        (1, 2, Fraction(1), True),
    ])


def test_instance_validation_and_caps():
    g = double_path()
    with pytest.raises(ValidationError):
        NcFgcInstance(g, {3}, 1)
    with pytest.raises(ValidationError):
        NcFgcInstance(g, set(), -1)
    inst = NcFgcInstance.uniform(g, {1}, 2)
    assert inst.node_caps() == {0: 1, 1: None, 2: 1}
    assert inst.unsafe_nodes() == [0, 2]


def test_q_connectivity_hand_cases():
    g = double_path()
    # a single-use middle node throttles both parallel pairs
    assert q_connectivity(g, {0: None, 1: 1, 2: None}, 0, 2) == 1
    assert q_connectivity(g, {0: None, 1: None, 2: None}, 0, 2) == 2
    # endpoint caps are ignored
    assert q_connectivity(g, {0: 1, 1: None, 2: 1}, 0, 2) == 2
    assert q_connectivity(g, {1: None}, 0, 2, cutoff=1) == 1
    assert q_connectivity(g, {1: None}, 0, 2, {0, 2}) == 1
    with pytest.raises(InvalidQueryError):
        q_connectivity(g, {}, 1, 1)

    bypass = MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
        (0, 2, Fraction(1), True),
    ])
    # the direct edge dodges the single-use middle node
    assert q_connectivity(bypass, {0: None, 1: 1, 2: None}, 0, 2) == 2


@given(multigraphs(max_nodes=5, max_extra=3), st.data())
def test_uncapped_nodes_reduce_to_edge_connectivity(g, data):
    i, j = data.draw(node_pairs(g.n))
    caps = {v: None for v in range(g.n)}
    assert q_connectivity(g, caps, i, j) == edge_connectivity(g, i, j)


def test_verify_modes_and_hand_cases():
    g = double_path()
    weak = NcFgcInstance(g, set(), 2)
    with pytest.raises(ValidationError):
        verify_ncfgc(weak, g.edge_ids, mode="flow")
    report = verify_ncfgc(weak, g.edge_ids)
    assert not report.ok
    v = report.violations[0]
    # the enumeration route names the failing node
    assert v.pair == (0, 2) and v.removed == frozenset({1}) and v.connectivity == 0
    flow_only = verify_ncfgc(weak, g.edge_ids, mode="qconn")
    assert not flow_only.ok and flow_only.violations[0].removed is None
    assert verify_ncfgc(NcFgcInstance(g, {1}, 2), g.edge_ids).ok
    assert verify_ncfgc(NcFgcInstance(g, set(), 0), set()).ok


def test_star_center_is_the_weak_point():
    # two parallel spokes per leaf, so only the shared center is scarce
    g = MultiGraph.build(4, [
        (0, v, Fraction(1), True) for v in (1, 2, 3) for _ in range(2)
    ])
    safe_leaves = frozenset({1, 2, 3})
    assert verify_ncfgc(NcFgcInstance(g, safe_leaves, 1), g.edge_ids).ok
    report = verify_ncfgc(NcFgcInstance(g, safe_leaves, 2), g.edge_ids)
    assert not report.ok
    v = report.violations[0]
    assert v.pair == (1, 2) and v.removed == frozenset({0}) and v.connectivity == 0


@given(multigraphs(max_nodes=5, max_extra=3), st.data())
def test_flow_and_enumeration_routes_agree(g, data):
    safe = frozenset(data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n)))
    inst = NcFgcInstance(g, safe, data.draw(st.integers(1, 2)))
    chosen = data.draw(edge_subsets(g))
    by_flow = verify_ncfgc(inst, chosen, mode="qconn").ok
    by_enum = verify_ncfgc(inst, chosen, mode="enumeration").ok
    assert by_flow == by_enum
    # "both" cross-checks internally and raises on any split verdict
    assert verify_ncfgc(inst, chosen, mode="both").ok == by_flow


def test_inflation_structure():
    g = MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(2), True),
        (0, 2, Fraction(3), True),
    ])
    red = reduce_by_inflation(NcFgcInstance(g, {0, 1}, 2))
    assert red.instance.safe_nodes == frozenset()
    assert red.instance.requirement == 2
    ig = red.instance.graph
    for v, images in red.node_images.items():
        assert red.node_map[v] == images[0]
    top = max(e.eid for e in g.edges)
    for e in ig.edges:
        if e.eid > top:
            assert e.safe and e.cost == 0
        else:
            assert e.cost == g.edge(e.eid).cost


def test_inflation_without_safe_nodes_is_the_identity():
    g = double_path()
    red = reduce_by_inflation(NcFgcInstance(g, set(), 2))
    ig = red.instance.graph
    assert ig.n == g.n
    assert red.node_map == {v: v for v in range(g.n)}
    assert [(e.eid, e.u, e.v, e.cost, e.safe) for e in ig.edges] == [
        (e.eid, e.u, e.v, e.cost, e.safe) for e in g.edges
    ]


@given(multigraphs(max_nodes=5, max_extra=3), st.data())
def test_inflation_preserves_q_connectivity(g, data):
    safe = frozenset(data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n)))
    inst = NcFgcInstance(g, safe, 1)
    red = reduce_by_inflation(inst)
    caps = inst.node_caps()
    red_caps = red.instance.node_caps()
    for i in range(g.n):
        for j in range(i + 1, g.n):
            lam = q_connectivity(g, caps, i, j)
            image = q_connectivity(
                red.instance.graph, red_caps, red.node_map[i], red.node_map[j]
            )
            assert lam == image


def test_rooted_parallel_pair_buys_both_forward_arcs():
    g = MultiGraph.build(2, [
        (0, 1, Fraction(1), True),
        (0, 1, Fraction(2), True),
    ])
    dg = to_antiparallel_digraph(g)
    res = solve_rooted_qconn(RootedQConnInstance(dg, 0, {0: 2, 1: 2}, 2))
    assert res.arcs == frozenset({0, 2})
    assert all(dg.arc(a).tail == 0 for a in res.arcs)
    assert res.cost == 3


def test_rooted_solver_matches_brute_force():
    rng = random.Random(1)
    cfg = GenConfig(nodes=(3, 4), extra_edges=(0, 2))
    for _ in range(20):
        g = random_multigraph(rng, cfg)
        safe = frozenset(
            v for v in range(g.n) if rng.random() < 0.5
        ) or frozenset({0})
        p = rng.choice([1, 2, 3])
        root = min(safe)
        dg = to_antiparallel_digraph(g)
        caps = {v: p if v in safe else 1 for v in range(g.n)}
        inst = RootedQConnInstance(dg, root, caps, p)
        costs = {aid: dg.arc(aid).cost for aid in dg.arc_ids}

        def feasible(arcs):
            return all(
                rooted_q_flow(dg, caps, root, t, arcs, cutoff=p) >= p
                for t in range(dg.n)
                if t != root
            )

        if not feasible(dg.arc_ids):
            with pytest.raises(InfeasibleInstanceError):
                solve_rooted_qconn(inst)
            continue
        res = solve_rooted_qconn(inst)
        opt = minimum_cost_subset(dg.arc_ids, costs, feasible)
        assert opt.feasible and res.cost == opt.cost
        assert feasible(res.arcs)


def test_solve_hand_cases():
    cycle = MultiGraph.build(4, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
        (2, 3, Fraction(1), True),
        (3, 0, Fraction(5), True),
    ])
    res = solve_p_ncfgc(NcFgcInstance(cycle, {0}, 1))
    assert res.edges == frozenset({0, 1, 2}) and res.cost == 3
    assert (res.root, res.bound) == (0, 2)

    res = solve_p_ncfgc(NcFgcInstance(cycle, {0}, 2))
    assert res.edges == cycle.edge_ids and res.cost == 8
    # both directions of the cheap corridor plus the single expensive hop
    assert res.rooted_cost == 10

    trivial = solve_p_ncfgc(NcFgcInstance(cycle, set(), 0))
    assert trivial.edges == frozenset() and trivial.root is None

    # with every node safe the problem is plain 2-edge-connectivity
    triangle = MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
        (0, 2, Fraction(1), True),
    ])
    res = solve_p_ncfgc(NcFgcInstance(triangle, {0, 1, 2}, 2))
    assert res.edges == triangle.edge_ids and res.cost == 3


def test_solve_requires_a_safe_root():
    g = double_path()
    with pytest.raises(UnsupportedInstanceError):
        solve_p_ncfgc(NcFgcInstance(g, set(), 1))


def test_solve_detects_infeasibility():
    g = MultiGraph.build(3, [
        (0, 1, Fraction(1), True),
        (1, 2, Fraction(1), True),
    ])
    inst = NcFgcInstance(g, {0}, 2)
    assert not verify_ncfgc(inst, g.edge_ids).ok
    with pytest.raises(InfeasibleInstanceError):
        solve_p_ncfgc(inst)


@settings(max_examples=15)
@given(multigraphs(max_nodes=4, max_extra=2), st.data())
def test_solved_instances_verify_and_respect_the_factor(g, data):
    safe = frozenset(data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n)))
    inst = NcFgcInstance(g, safe, data.draw(st.integers(1, 2)))
    try:
        res = solve_p_ncfgc(inst)
    except UnsupportedInstanceError:
        assert not safe
        return
    except InfeasibleInstanceError:
        assert not verify_ncfgc(inst, g.edge_ids, mode="qconn").ok
        return
    assert verify_ncfgc(inst, res.edges, mode="both").ok
    assert res.cost == g.cost(res.edges)
    opt = exact_opt(inst)
    assert opt.feasible and opt.cost <= res.cost <= 2 * opt.cost
    # doubling an optimal edge set is rooted-feasible, capping the arc cost
    assert res.rooted_cost <= 2 * opt.cost
