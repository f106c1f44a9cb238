"""Multigraph and digraph types plus the structural transformations the solvers build on.

Graphs use dense integer node ids 0..n-1.  Edges carry a stable integer id so
parallel edges stay distinguishable through contractions and splits; every
transformation returns a new graph and never mutates its input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import UnknownEdgeError, ValidationError


def as_cost(value) -> Fraction:
    """Coerce a number or numeric string to an exact nonnegative rational cost."""
    try:
        cost = Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad cost {value!r}") from exc
    if cost < 0:
        raise ValidationError(f"negative cost {value!r}")
    return cost


@dataclass(frozen=True)
class Edge:
    """Undirected edge; parallel edges share endpoints but never ids."""

    eid: int
    u: int
    v: int
    cost: Fraction
    safe: bool

    def other(self, node: int) -> int:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise ValueError(f"node {node} is not an endpoint of edge {self.eid}")

    def touches(self, node: int) -> bool:
        return node == self.u or node == self.v


class MultiGraph:
    """Loop-free undirected multigraph, treated as immutable after construction."""

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise ValidationError(f"negative node count {n}")
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._by_id: dict[int, Edge] = {}
        self._incident: list[list[Edge]] = [[] for _ in range(n)]
        for e in self.edges:
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ValidationError(f"edge {e.eid} endpoint out of range")
            if e.u == e.v:
                raise ValidationError(f"edge {e.eid} is a self-loop on node {e.u}")
            if e.cost < 0:
                raise ValidationError(f"edge {e.eid} has negative cost")
            if e.eid in self._by_id:
                raise ValidationError(f"duplicate edge id {e.eid}")
            self._by_id[e.eid] = e
            self._incident[e.u].append(e)
            self._incident[e.v].append(e)

    @classmethod
    def build(cls, n: int, rows: Iterable[tuple]) -> "MultiGraph":
        """Construct from (u, v, cost, safe) tuples; ids are assigned by position."""
        edges = tuple(
            Edge(i, u, v, as_cost(c), bool(safe)) for i, (u, v, c, safe) in enumerate(rows)
        )
        return cls(n, edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise UnknownEdgeError(f"no edge with id {eid}") from None

    def has_edge(self, eid: int) -> bool:
        return eid in self._by_id

    def incident(self, node: int) -> tuple[Edge, ...]:
        return tuple(self._incident[node])

    def degree(self, node: int) -> int:
        return len(self._incident[node])

    def cost(self, edge_ids: Iterable[int] | None = None) -> Fraction:
        ids = self.edge_ids if edge_ids is None else edge_ids
        return sum((self.edge(e).cost for e in ids), Fraction(0))

    def safe_ids(self) -> frozenset[int]:
        return frozenset(e.eid for e in self.edges if e.safe)

    def unsafe_ids(self) -> frozenset[int]:
        return frozenset(e.eid for e in self.edges if not e.safe)

    def with_costs(self, override: Mapping[int, Fraction]) -> "MultiGraph":
        """Copy of the graph with some edge costs replaced."""
        for eid in override:
            self.edge(eid)
        edges = tuple(
            Edge(e.eid, e.u, e.v, as_cost(override[e.eid]), e.safe)
            if e.eid in override
            else e
            for e in self.edges
        )
        return MultiGraph(self.n, edges)

    def components(self, edge_ids: Iterable[int] | None = None) -> list[frozenset[int]]:
        """Connected components under the given edge subset, sorted by smallest node."""
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ids = self.edge_ids if edge_ids is None else edge_ids
        for eid in ids:
            e = self.edge(eid)
            ra, rb = find(e.u), find(e.v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, set[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), set()).add(v)
        return [frozenset(groups[r]) for r in sorted(groups)]

    def connects(self, nodes: Iterable[int], edge_ids: Iterable[int] | None = None) -> bool:
        """True when all listed nodes lie in one component of the edge subset."""
        want = set(nodes)
        if len(want) <= 1:
            return True
        for comp in self.components(edge_ids):
            if want & comp:
                return want <= comp
        return False

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Cut:
    """One side of a node cut together with its boundary edge (or arc) ids."""

    side: frozenset[int]
    boundary: frozenset[int]


@dataclass(frozen=True)
class Arc:
    """Directed arc.  `origin` records the undirected edge an arc came from."""

    aid: int
    tail: int
    head: int
    cost: Fraction
    origin: int | None = None
    split_node: int | None = None


class Digraph:
    """Directed multigraph with the same dense-id and stable-arc-id conventions."""

    def __init__(self, n: int, arcs: Iterable[Arc]):
        if n < 0:
            raise ValidationError(f"negative node count {n}")
        self.n = n
        self.arcs: tuple[Arc, ...] = tuple(arcs)
        self._by_id: dict[int, Arc] = {}
        for a in self.arcs:
            if not (0 <= a.tail < n and 0 <= a.head < n):
                raise ValidationError(f"arc {a.aid} endpoint out of range")
            if a.tail == a.head:
                raise ValidationError(f"arc {a.aid} is a self-loop")
            if a.cost < 0:
                raise ValidationError(f"arc {a.aid} has negative cost")
            if a.aid in self._by_id:
                raise ValidationError(f"duplicate arc id {a.aid}")
            self._by_id[a.aid] = a

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def arc_ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    def arc(self, aid: int) -> Arc:
        try:
            return self._by_id[aid]
        except KeyError:
            raise UnknownEdgeError(f"no arc with id {aid}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self.n == other.n and self.arcs == other.arcs

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class ContractionResult:
    graph: MultiGraph
    node_map: dict[int, int]


@dataclass(frozen=True)
class SplitResult:
    graph: MultiGraph
    copy_map: dict[int, int]


@dataclass(frozen=True)
class InflationResult:
    graph: MultiGraph
    attach_map: dict[int, tuple[int, int]]
    node_images: dict[int, tuple[int, ...]]


def contract_edges(g: MultiGraph, edge_ids: Iterable[int]) -> ContractionResult:
    """Contract every component spanned by `edge_ids` into a single node.

    Surviving edges keep their ids, costs and labels; edges interior to a
    contracted component disappear, parallel edges are retained.  New node ids
    are assigned by the smallest original node in each component.
    """
    ids = set(edge_ids)
    for eid in ids:
        g.edge(eid)
    comps = g.components(ids)
    node_map: dict[int, int] = {}
    for new_id, comp in enumerate(comps):
        for v in comp:
            node_map[v] = new_id
    edges = []
    for e in g.edges:
        nu, nv = node_map[e.u], node_map[e.v]
        if nu == nv:
            continue
        edges.append(Edge(e.eid, nu, nv, e.cost, e.safe))
    return ContractionResult(MultiGraph(len(comps), tuple(edges)), node_map)


def split_parallel(g: MultiGraph, multiplicity: Mapping[int, int]) -> SplitResult:
    """Replace each edge e by multiplicity[e] unit copies sharing cost and label.

    Copy ids are assigned 0.. in edge order; `copy_map` sends copies back to the
    original edge id.  A multiplicity below one is rejected: dropping an edge is
    the caller's decision, not a degenerate split.
    """
    edges = []
    copy_map: dict[int, int] = {}
    next_id = 0
    for e in g.edges:
        if e.eid not in multiplicity:
            raise ValidationError(f"no multiplicity given for edge {e.eid}")
        count = multiplicity[e.eid]
        if count < 1:
            raise ValidationError(f"multiplicity {count} for edge {e.eid} must be >= 1")
        for _ in range(count):
            edges.append(Edge(next_id, e.u, e.v, e.cost, e.safe))
            copy_map[next_id] = e.eid
            next_id += 1
    return SplitResult(MultiGraph(g.n, tuple(edges)), copy_map)


def inflate_safe_nodes(g: MultiGraph, safe_nodes: Iterable[int]) -> InflationResult:
    """Expand each safe node v into a zero-cost complete graph on deg(v) nodes.

    Every edge incident to v re-attaches to a distinct member of v's gadget, so
    path families that were free to reuse v become plain edge-disjoint families
    in the image.  An isolated safe node degenerates to a single image node.
    `attach_map` records the new endpoints of every original edge.
    """
    safe = set(safe_nodes)
    for v in safe:
        if not (0 <= v < g.n):
            raise ValidationError(f"safe node {v} out of range")
    node_images: dict[int, tuple[int, ...]] = {}
    next_node = 0
    for v in range(g.n):
        k = max(1, g.degree(v)) if v in safe else 1
        node_images[v] = tuple(range(next_node, next_node + k))
        next_node += k

    # Each incident edge of a safe node claims the gadget slot matching its
    # rank among that node's incident edges (ordered by edge id).
    slot: dict[tuple[int, int], int] = {}
    for v in range(g.n):
        if v not in safe:
            continue
        for rank, e in enumerate(sorted(g.incident(v), key=lambda e: e.eid)):
            slot[(v, e.eid)] = node_images[v][rank]

    def endpoint(v: int, eid: int) -> int:
        return slot[(v, eid)] if v in safe else node_images[v][0]

    edges = []
    attach_map: dict[int, tuple[int, int]] = {}
    for e in g.edges:
        nu, nv = endpoint(e.u, e.eid), endpoint(e.v, e.eid)
        attach_map[e.eid] = (nu, nv)
        edges.append(Edge(e.eid, nu, nv, e.cost, e.safe))
    next_eid = max((e.eid for e in g.edges), default=-1) + 1
    for v in sorted(safe):
        for a, b in itertools.combinations(node_images[v], 2):
            edges.append(Edge(next_eid, a, b, Fraction(0), True))
            next_eid += 1
    return InflationResult(MultiGraph(next_node, tuple(edges)), attach_map, node_images)


def to_antiparallel_digraph(g: MultiGraph) -> Digraph:
    """Replace every undirected edge by two opposite arcs of the same cost.

    Arc ids 2k and 2k+1 belong to the k-th edge; both record it as `origin`.
    """
    arcs = []
    for k, e in enumerate(g.edges):
        arcs.append(Arc(2 * k, e.u, e.v, e.cost, origin=e.eid))
        arcs.append(Arc(2 * k + 1, e.v, e.u, e.cost, origin=e.eid))
    return Digraph(g.n, tuple(arcs))
