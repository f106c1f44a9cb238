"""Connectivity that survives failures of unsafe nodes.

Here the failure-prone elements are nodes, not edges.  The connectivity
measure between s and t, written q-connectivity, is the largest number of
(s, t)-paths that share no edge and visit each unsafe intermediate node at
most once; it is computed as a max flow after splitting every node into an
in/out pair joined by a capacitated arc.  A solution F is feasible for
requirement p when every node pair has q-connectivity at least p within F.

The solver picks a safe root, directs every edge both ways, and finds a
minimum-cost arc set giving the root p units of q-flow to every other node,
by branch and bound over the cut LP.  Taking both arcs of an optimal
undirected solution is always rooted-feasible, and the underlying edges of a
rooted solution are feasible for the instance, so the edge set returned
costs at most twice the undirected optimum.

Feasibility has a second, definitional reading: for every set of failing
unsafe nodes, the survivors must keep max(0, p - failures) edge-disjoint
paths.  Both readings are implemented and cross-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    GuardExceededError,
    InfeasibleInstanceError,
    InvalidQueryError,
    LpInfeasibleError,
    SolverError,
    UnsupportedInstanceError,
    ValidationError,
)
from .flows import Network, edge_connectivity
from .graphs import Digraph, MultiGraph, inflate_safe_nodes, to_antiparallel_digraph
from .lp import CutRow, solve_cut_lp


@dataclass(frozen=True)
class NcFgcInstance:
    """Uniform requirement p between all node pairs; nodes outside
    `safe_nodes` can fail."""

    graph: MultiGraph
    safe_nodes: frozenset[int]
    requirement: int

    def __post_init__(self):
        object.__setattr__(self, "safe_nodes", frozenset(self.safe_nodes))
        for v in self.safe_nodes:
            if not (0 <= v < self.graph.n):
                raise ValidationError(f"safe node {v} out of range")
        if self.requirement < 0:
            raise ValidationError("negative requirement")

    @classmethod
    def uniform(cls, graph: MultiGraph, safe_nodes, p: int) -> "NcFgcInstance":
        return cls(graph, frozenset(safe_nodes), p)

    def node_caps(self) -> dict[int, int | None]:
        """Path budget per intermediate node; None means unlimited."""
        return {
            v: None if v in self.safe_nodes else 1 for v in range(self.graph.n)
        }

    def unsafe_nodes(self) -> list[int]:
        return [v for v in range(self.graph.n) if v not in self.safe_nodes]


def q_connectivity(
    g: MultiGraph,
    caps,
    s: int,
    t: int,
    edge_ids=None,
    *,
    cutoff: int | None = None,
) -> int:
    """Max (s, t)-flow with unit edges and capacitated intermediate nodes.

    Node v becomes 2v -> 2v+1 with capacity caps[v]; each edge contributes
    one unit arc per direction between the out and in halves.  The endpoints
    themselves are never capacitated.
    """
    if s == t:
        raise InvalidQueryError("s and t must differ")
    net = Network(2 * g.n)
    for v in range(g.n):
        cap = None if v in (s, t) else caps.get(v)
        net.add_pair(2 * v, 2 * v + 1, cap, 0)
    ids = sorted(g.edge_ids) if edge_ids is None else sorted(set(edge_ids))
    for eid in ids:
        e = g.edge(eid)
        net.add_pair(2 * e.u + 1, 2 * e.v, 1, 0)
        net.add_pair(2 * e.v + 1, 2 * e.u, 1, 0)
    return net.max_flow(2 * s + 1, 2 * t, cutoff=cutoff)


@dataclass(frozen=True)
class NcViolation:
    """Pair left short; removed is the failing node set for the definitional
    route and None when measured by capacitated flow."""

    pair: tuple[int, int]
    removed: frozenset[int] | None
    connectivity: int


@dataclass(frozen=True)
class NcReport:
    ok: bool
    violations: tuple[NcViolation, ...] = ()


def _pair_ok_qconn(inst, chosen, i, j):
    p = inst.requirement
    lam = q_connectivity(inst.graph, inst.node_caps(), i, j, chosen, cutoff=p)
    if lam >= p:
        return None
    return NcViolation((i, j), None, lam)


def _pair_ok_enum(inst, chosen, i, j, subset_guard):
    g = inst.graph
    p = inst.requirement
    pool = [v for v in inst.unsafe_nodes() if v not in (i, j)]
    total = sum(comb(len(pool), k) for k in range(min(p, len(pool) + 1)))
    if total > subset_guard:
        raise GuardExceededError(
            f"pair ({i}, {j}) needs {total} failure sets, guard is {subset_guard}"
        )
    for k in range(min(p, len(pool) + 1)):
        need = p - k
        for combo in itertools.combinations(pool, k):
            down = set(combo)
            alive = [
                eid
                for eid in sorted(chosen)
                if down.isdisjoint((g.edge(eid).u, g.edge(eid).v))
            ]
            lam = edge_connectivity(g, i, j, alive, cutoff=need)
            if lam < need:
                return NcViolation((i, j), frozenset(combo), lam)
    return None


def verify_ncfgc(
    inst: NcFgcInstance,
    edge_ids,
    *,
    mode: str = "both",
    subset_guard: int = 10**6,
    find_all: bool = False,
) -> NcReport:
    """Check feasibility by capacitated flow, by failure enumeration, or both.

    In "both" mode the two routes are compared pair by pair and any
    disagreement raises, since it would mean one of them is wrong.
    """
    if mode not in ("qconn", "enumeration", "both"):
        raise ValidationError(f"unknown mode {mode!r}")
    g = inst.graph
    chosen = frozenset(edge_ids)
    for eid in chosen:
        g.edge(eid)
    if inst.requirement == 0:
        return NcReport(True)
    violations: list[NcViolation] = []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            hit_q = hit_e = None
            if mode in ("qconn", "both"):
                hit_q = _pair_ok_qconn(inst, chosen, i, j)
            if mode in ("enumeration", "both"):
                hit_e = _pair_ok_enum(inst, chosen, i, j, subset_guard)
            if mode == "both" and (hit_q is None) != (hit_e is None):
                raise SolverError(
                    f"feasibility routes disagree on pair ({i}, {j}): "
                    f"flow says {hit_q is None}, enumeration says {hit_e is None}"
                )
            hit = hit_e if hit_e is not None else hit_q
            if hit is not None:
                violations.append(hit)
                if not find_all:
                    return NcReport(False, tuple(violations))
    return NcReport(not violations, tuple(violations))


@dataclass(frozen=True)
class InflationReduction:
    """Same problem with every node failure-prone.

    Each safe node becomes a clique of single-use nodes, one per incident
    edge, joined by free safe edges; pairwise q-connectivity is unchanged
    when nodes are looked up through node_map.
    """

    instance: NcFgcInstance
    node_map: dict[int, int]
    node_images: dict[int, tuple[int, ...]]
    attach_map: dict[int, tuple[int, int]]


def reduce_by_inflation(inst: NcFgcInstance) -> InflationReduction:
    inflated = inflate_safe_nodes(inst.graph, inst.safe_nodes)
    node_map = {v: images[0] for v, images in inflated.node_images.items()}
    reduced = NcFgcInstance(inflated.graph, frozenset(), inst.requirement)
    return InflationReduction(
        reduced, node_map, dict(inflated.node_images), dict(inflated.attach_map)
    )


def rooted_q_flow(
    dg: Digraph,
    caps,
    root: int,
    t: int,
    arc_ids=None,
    *,
    cutoff: int | None = None,
) -> int:
    """Max root-to-t flow with unit arcs and capacitated intermediate nodes."""
    if root == t:
        raise InvalidQueryError("root and t must differ")
    net = Network(2 * dg.n)
    for v in range(dg.n):
        cap = None if v in (root, t) else caps.get(v)
        net.add_pair(2 * v, 2 * v + 1, cap, 0)
    ids = sorted(dg.arc_ids) if arc_ids is None else sorted(set(arc_ids))
    for aid in ids:
        a = dg.arc(aid)
        net.add_pair(2 * a.tail + 1, 2 * a.head, 1, 0)
    return net.max_flow(2 * root + 1, 2 * t, cutoff=cutoff)


@dataclass(frozen=True)
class RootedQConnInstance:
    """Buy arcs so the root can push `requirement` units of q-flow to every
    other node."""

    digraph: Digraph
    root: int
    caps: dict[int, int | None]
    requirement: int

    def __post_init__(self):
        if not (0 <= self.root < self.digraph.n):
            raise ValidationError("root out of range")
        if self.requirement < 0:
            raise ValidationError("negative requirement")


def _rooted_cut(dg, caps, root, t, x):
    """Flow network for one sink under fractional arc values, with the
    node-arc and purchasable-arc endpoints kept for cut extraction."""
    net = Network(2 * dg.n)
    node_arcs: list[tuple[int, int, int]] = []
    for v in range(dg.n):
        cap = None if v in (root, t) else caps.get(v)
        net.add_pair(2 * v, 2 * v + 1, cap, 0)
        node_arcs.append((2 * v, 2 * v + 1, v))
    purch: list[tuple[int, int, int]] = []
    for aid in sorted(dg.arc_ids):
        a = dg.arc(aid)
        net.add_pair(2 * a.tail + 1, 2 * a.head, x.get(aid, Fraction(0)), 0)
        purch.append((2 * a.tail + 1, 2 * a.head, aid))
    return net, node_arcs, purch


def _separate_rooted(inst: RootedQConnInstance, x) -> CutRow | None:
    """Most violated rooted cut over all sinks; ties go to the smaller sink."""
    dg = inst.digraph
    p = Fraction(inst.requirement)
    best = None
    for t in range(dg.n):
        if t == inst.root:
            continue
        net, node_arcs, purch = _rooted_cut(dg, inst.caps, inst.root, t, x)
        value = net.max_flow(2 * inst.root + 1, 2 * t)
        viol = p - value
        if viol <= 0:
            continue
        if best is None or viol > best[0]:
            side = net.reachable_from(2 * inst.root + 1)
            crossing = frozenset(
                aid for (u, v, aid) in purch if u in side and v not in side
            )
            node_cost = sum(
                inst.caps[v] or 0
                for (u, w, v) in node_arcs
                if u in side and w not in side
            )
            best = (viol, CutRow(crossing, p - node_cost))
    return None if best is None else best[1]


@dataclass(frozen=True)
class RootedSolveResult:
    arcs: frozenset[int]
    cost: Fraction
    nodes_explored: int


def solve_rooted_qconn(
    inst: RootedQConnInstance, *, max_rows: int = 4000
) -> RootedSolveResult:
    """Exact minimum-cost arc set by branch and bound on the cut LP.

    Cut rows never mention fixed variables' status, so one shared pool
    serves every branch.  Excluding an arc is tried before including it and
    only strictly better solutions replace the incumbent, which pins down
    the returned arc set.
    """
    dg = inst.digraph
    p = inst.requirement
    for t in range(dg.n):
        if t == inst.root:
            continue
        if rooted_q_flow(dg, inst.caps, inst.root, t, cutoff=p) < p:
            raise InfeasibleInstanceError(
                f"the full arc set gives the root only "
                f"{rooted_q_flow(dg, inst.caps, inst.root, t)} units toward {t}",
                pair=(inst.root, t),
            )
    if p == 0 or dg.n <= 1:
        return RootedSolveResult(frozenset(), Fraction(0), 0)
    costs = {aid: dg.arc(aid).cost for aid in dg.arc_ids}
    pool: dict[tuple[frozenset[int], Fraction], CutRow] = {}
    best_arcs = frozenset(dg.arc_ids)
    best_cost = sum(costs.values(), Fraction(0))
    explored = 0

    def oracle(x):
        return _separate_rooted(inst, x)

    def descend(fixed: dict[int, int]):
        nonlocal best_arcs, best_cost, explored
        explored += 1
        try:
            sol = solve_cut_lp(
                costs, fixed, oracle, initial_rows=tuple(pool.values()),
                max_rows=max_rows,
            )
        except LpInfeasibleError:
            return
        for row in sol.rows:
            pool.setdefault((row.edge_ids, row.rhs), row)
        if sol.objective >= best_cost:
            return
        fractional = sol.fractional_ids()
        if not fractional:
            arcs = frozenset(a for a, v in sol.x.items() if v == 1)
            best_arcs, best_cost = arcs, sol.objective
            return
        branch = fractional[0]
        descend({**fixed, branch: 0})
        descend({**fixed, branch: 1})

    descend({})
    for t in range(dg.n):
        if t == inst.root:
            continue
        if rooted_q_flow(dg, inst.caps, inst.root, t, best_arcs, cutoff=p) < p:
            raise SolverError(f"rooted solution leaves sink {t} short")
    return RootedSolveResult(best_arcs, best_cost, explored)


@dataclass(frozen=True)
class NcSolveResult:
    edges: frozenset[int]
    cost: Fraction
    bound: Fraction
    root: int | None
    rooted_cost: Fraction
    nodes_explored: int


def solve_p_ncfgc(inst: NcFgcInstance, *, max_rows: int = 4000) -> NcSolveResult:
    """Orient, solve the rooted problem exactly, keep the touched edges.

    Needs a safe node to serve as root: p paths from i to j can be stitched
    from p paths i-root and root-j only when the root itself cannot fail.
    """
    g = inst.graph
    p = inst.requirement
    if p == 0 or g.n <= 1:
        return NcSolveResult(
            frozenset(), Fraction(0), Fraction(2), None, Fraction(0), 0
        )
    if not inst.safe_nodes:
        raise UnsupportedInstanceError(
            "a node that never fails is needed as the root"
        )
    root = min(inst.safe_nodes)
    dg = to_antiparallel_digraph(g)
    caps = {v: p if v in inst.safe_nodes else 1 for v in range(g.n)}
    rooted = RootedQConnInstance(dg, root, caps, p)
    result = solve_rooted_qconn(rooted, max_rows=max_rows)
    edges = frozenset(dg.arc(aid).origin for aid in result.arcs)
    report = verify_ncfgc(inst, edges, mode="qconn")
    if not report.ok:
        bad = report.violations[0]
        raise SolverError(
            f"rooted solution leaves pair {bad.pair} at {bad.connectivity} < {p}"
        )
    return NcSolveResult(
        edges, g.cost(edges), Fraction(2), root, result.cost, result.nodes_explored
    )
