"""Exact max flow, min cuts, and edge connectivity."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flexconn import (
    InvalidQueryError,
    MultiGraph,
    Network,
    UnboundedFlowError,
    edge_connectivity,
    max_flow_min_cut,
    to_antiparallel_digraph,
)

from strategies import multigraphs


def test_network_basic_flow():
    net = Network(4)
    net.add_pair(0, 1, 3, 0)
    net.add_pair(0, 2, 2, 0)
    net.add_pair(1, 3, 2, 0)
    net.add_pair(2, 3, 3, 0)
    net.add_pair(1, 2, 1, 0)
    assert net.max_flow(0, 3) == 5


def test_network_exact_fractions():
    net = Network(3)
    net.add_pair(0, 1, Fraction(1, 3), 0)
    net.add_pair(1, 2, Fraction(1, 2), 0)
    value = net.max_flow(0, 2)
    assert value == Fraction(1, 3)


def test_network_cutoff_stops_early():
    net = Network(2)
    net.add_pair(0, 1, 100, 0)
    assert net.max_flow(0, 1, cutoff=7) == 7


def test_unbounded_flow_detected():
    net = Network(2)
    net.add_pair(0, 1, None, 0)
    with pytest.raises(UnboundedFlowError):
        net.max_flow(0, 1)
    assert net.max_flow(0, 1, cutoff=5) == 5


def test_min_cut_matches_flow_value():
    g = MultiGraph.build(4, [
        (0, 1, Fraction(1), True),
        (1, 3, Fraction(1), True),
        (0, 2, Fraction(1), True),
        (2, 3, Fraction(1), True),
        (1, 2, Fraction(1), True),
    ])
    caps = {0: Fraction(3), 1: Fraction(1), 2: Fraction(2), 3: Fraction(2), 4: Fraction(2)}
    value, cut = max_flow_min_cut(g, caps, 0, 3)
    assert value == 3
    assert 0 in cut.side and 3 not in cut.side
    assert sum(caps[e] for e in cut.boundary) == value


def test_max_flow_min_cut_rejects_same_endpoints():
    g = MultiGraph.build(2, [(0, 1, Fraction(1), True)])
    with pytest.raises(InvalidQueryError):
        max_flow_min_cut(g, {0: 1}, 1, 1)
    with pytest.raises(InvalidQueryError):
        edge_connectivity(g, 0, 0)


def test_absent_capacity_means_zero():
    g = MultiGraph.build(2, [(0, 1, Fraction(1), True)])
    value, cut = max_flow_min_cut(g, {}, 0, 1)
    assert value == 0 and cut.boundary == frozenset({0})


@given(multigraphs(), st.data())
def test_cut_capacity_equals_flow(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    t = (s + 1 + data.draw(st.integers(0, g.n - 2))) % g.n
    caps = {
        eid: Fraction(data.draw(st.integers(0, 5)), data.draw(st.sampled_from([1, 2])))
        for eid in g.edge_ids
    }
    value, cut = max_flow_min_cut(g, caps, s, t)
    assert s in cut.side and t not in cut.side
    assert sum((caps[e] for e in cut.boundary), Fraction(0)) == value


@given(multigraphs(), st.data())
def test_edge_connectivity_cutoff_truncates(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    t = (s + 1 + data.draw(st.integers(0, g.n - 2))) % g.n
    lam = edge_connectivity(g, s, t)
    cut = data.draw(st.integers(0, 5))
    assert edge_connectivity(g, s, t, cutoff=cut) == min(lam, cut)
    subset = [eid for eid in sorted(g.edge_ids) if eid % 2 == 0]
    assert edge_connectivity(g, s, t, subset) <= lam


@given(multigraphs(), st.data())
def test_directed_antiparallel_matches_undirected(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    t = (s + 1 + data.draw(st.integers(0, g.n - 2))) % g.n
    dg = to_antiparallel_digraph(g)
    und, _ = max_flow_min_cut(g, {e: 1 for e in g.edge_ids}, s, t)
    dval, _ = max_flow_min_cut(dg, {a: 1 for a in dg.arc_ids}, s, t)
    assert und == dval
