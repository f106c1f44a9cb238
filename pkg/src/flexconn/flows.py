"""Deterministic augmenting-path max-flow used by every verifier and separation oracle.

Capacities may be ints, exact rationals, or None for unbounded.  All arithmetic
is exact, augmenting paths are found by BFS in arc insertion order, and the
reported min cut side is always the set of nodes residual-reachable from s.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidQueryError, UnboundedFlowError
from .graphs import Cut, Digraph, MultiGraph


class Network:
    """Residual flow network; arcs 2k and 2k+1 are mutual reverses."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_pair(self, u: int, v: int, cap_uv, cap_vu) -> int:
        """Add the arc u->v with capacity cap_uv and its reverse with cap_vu.

        A directed arc uses cap_vu = 0; an undirected edge uses cap_vu = cap_uv.
        None means unbounded.  Returns the forward arc index.
        """
        i = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((cap_uv, cap_vu))
        self.adj[u].append(i)
        self.adj[v].append(i + 1)
        return i

    def _augmenting_path(self, s: int, t: int) -> list[int] | None:
        parent: list[int] = [-1] * self.n
        parent[s] = -2
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for i in self.adj[u]:
                c = self.cap[i]
                if (c is None or c > 0) and parent[self.to[i]] == -1:
                    parent[self.to[i]] = i
                    queue.append(self.to[i])
        if parent[t] == -1:
            return None
        path = []
        v = t
        while v != s:
            i = parent[v]
            path.append(i)
            v = self.to[i ^ 1]
        path.reverse()
        return path

    def max_flow(self, s: int, t: int, cutoff=None):
        """Exact max s-t flow value, stopping early once `cutoff` is reached."""
        total = 0
        while cutoff is None or total < cutoff:
            path = self._augmenting_path(s, t)
            if path is None:
                break
            finite = [self.cap[i] for i in path if self.cap[i] is not None]
            if not finite:
                if cutoff is None:
                    raise UnboundedFlowError(
                        f"flow from {s} to {t} is unbounded along an unbounded path"
                    )
                push = cutoff - total
            else:
                push = min(finite)
                if cutoff is not None:
                    push = min(push, cutoff - total)
            for i in path:
                if self.cap[i] is not None:
                    self.cap[i] -= push
                if self.cap[i ^ 1] is not None:
                    self.cap[i ^ 1] += push
            total += push
        return total

    def reachable_from(self, s: int) -> frozenset[int]:
        """Nodes reachable from s along residual-positive arcs."""
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for i in self.adj[u]:
                c = self.cap[i]
                v = self.to[i]
                if (c is None or c > 0) and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)


def max_flow_min_cut(g, capacities: Mapping[int, object], s: int, t: int):
    """Exact max s-t flow and a canonical min cut on a MultiGraph or Digraph.

    Capacities are keyed by edge id (arc id for digraphs); absent keys mean
    capacity zero and None means unbounded.  The returned cut side is the set
    of residual-reachable nodes from s, its boundary the ids crossing the cut.
    """
    if s == t:
        raise InvalidQueryError(f"max flow needs distinct endpoints, got s = t = {s}")
    net = Network(g.n)
    if isinstance(g, Digraph):
        for a in g.arcs:
            cap = capacities.get(a.aid, 0)
            net.add_pair(a.tail, a.head, cap, 0)
        value = net.max_flow(s, t)
        side = net.reachable_from(s)
        boundary = frozenset(
            a.aid for a in g.arcs if a.tail in side and a.head not in side
        )
    elif isinstance(g, MultiGraph):
        for e in g.edges:
            cap = capacities.get(e.eid, 0)
            net.add_pair(e.u, e.v, cap, cap)
        value = net.max_flow(s, t)
        side = net.reachable_from(s)
        boundary = frozenset(
            e.eid for e in g.edges if (e.u in side) != (e.v in side)
        )
    else:
        raise TypeError(f"expected MultiGraph or Digraph, got {type(g).__name__}")
    return value, Cut(side, boundary)


def edge_connectivity(
    g: MultiGraph,
    s: int,
    t: int,
    edge_ids: Iterable[int] | None = None,
    cutoff: int | None = None,
) -> int:
    """Count of edge-disjoint s-t paths within the given edge subset.

    With `cutoff` the computation stops as soon as that many paths exist, which
    is all a threshold test needs.
    """
    if s == t:
        raise InvalidQueryError(f"connectivity needs distinct endpoints, got {s}")
    net = Network(g.n)
    ids = g.edge_ids if edge_ids is None else edge_ids
    for eid in sorted(ids):
        e = g.edge(eid)
        net.add_pair(e.u, e.v, 1, 1)
    return net.max_flow(s, t, cutoff=cutoff)
