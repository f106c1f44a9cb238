"""Flexible graph connectivity with per-pair requirements.

A solution F is feasible when, for every pair (i, j) with requirement
(p_ij, q_ij) and every set F' of at most q_ij unsafe edges of F, the graph
(V, F - F') still has p_ij edge-disjoint (i, j)-paths.

Two regimes admit a capacitated reduction solved by iterative rounding:
all q_ij <= 1 (capacities p+1 safe / p unsafe, demand (p+q_ij)*p_ij) and all
p_ij = 1 (capacities q+1 safe / 1 unsafe, demand q_ij + 1), where p and q
are the largest requirement values.  Capacitated instances are solved by
splitting each edge into unit copies and rounding the cut LP.

Feasibility can be checked two independent ways: directly against the
definition (verify_fgc, with sound shortcuts) or through the cut view
(check_cut_characterization): F is feasible iff every cut separating a pair
either carries p_ij safe edges of F or p_ij + q_ij edges of F in total.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    GuardExceededError,
    SolverError,
    UnsupportedInstanceError,
    ValidationError,
    WrongRegimeError,
)
from .flows import edge_connectivity, max_flow_min_cut
from .graphs import MultiGraph, split_parallel
from .jain import SndpInstance, jain_round


@dataclass(frozen=True)
class FgcInstance:
    """Edge-labelled multigraph with (p_ij, q_ij) requirements per pair."""

    graph: MultiGraph
    pairs: dict[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        n = self.graph.n
        out: dict[tuple[int, int], tuple[int, int]] = {}
        for (a, b), (p, q) in self.pairs.items():
            if not (0 <= a < n and 0 <= b < n):
                raise ValidationError(f"pair ({a}, {b}) out of range")
            if a == b:
                raise ValidationError(f"pair ({a}, {b}) joins a node to itself")
            if p < 0 or q < 0:
                raise ValidationError(f"negative requirement for pair ({a}, {b})")
            key = (min(a, b), max(a, b))
            if key in out and out[key] != (p, q):
                raise ValidationError(f"conflicting requirements for pair {key}")
            out[key] = (p, q)
        object.__setattr__(self, "pairs", out)

    @classmethod
    def uniform(cls, graph: MultiGraph, p: int, q: int) -> "FgcInstance":
        """Demand (p, q) between every pair of distinct nodes."""
        pairs = {
            (i, j): (p, q)
            for i in range(graph.n)
            for j in range(i + 1, graph.n)
        }
        return cls(graph, pairs)

    def active_pairs(self) -> list[tuple[tuple[int, int], int, int]]:
        """Pairs with p_ij >= 1; others constrain nothing."""
        return [
            (pair, p, q) for pair, (p, q) in sorted(self.pairs.items()) if p >= 1
        ]

    def is_q1(self) -> bool:
        return all(q <= 1 for _, _, q in self.active_pairs())

    def is_p1(self) -> bool:
        return all(p == 1 for _, p, _ in self.active_pairs())

    def max_p(self) -> int:
        return max((p for _, p, _ in self.active_pairs()), default=1)

    def max_q(self) -> int:
        return max((q for _, _, q in self.active_pairs()), default=1)


@dataclass(frozen=True)
class CapNdpInstance:
    """Integer edge capacities u_e and flow demands D_ij.

    F is feasible when for every pair the max (i, j)-flow through the edges
    of F, capped at u_e, reaches D_ij.
    """

    graph: MultiGraph
    capacities: dict[int, int]
    demands: dict[tuple[int, int], int]

    def __post_init__(self):
        for e in self.graph.edges:
            u = self.capacities.get(e.eid)
            if not isinstance(u, int) or isinstance(u, bool) or u < 0:
                raise ValidationError(f"edge {e.eid} needs an integer capacity >= 0")
        for (a, b), d in self.demands.items():
            if a == b or not (0 <= a < self.graph.n and 0 <= b < self.graph.n):
                raise ValidationError(f"bad demand pair ({a}, {b})")
            if d < 0:
                raise ValidationError(f"negative demand for pair ({a}, {b})")


def build_capndp_q1(inst: FgcInstance) -> CapNdpInstance:
    """Reduction for the regime where every q_ij is 0 or 1.

    A cut with s safe and t unsafe chosen edges gets capacity s(p+1) + tp,
    which reaches (p + q_ij) p_ij exactly when the cut satisfies the pair,
    so the capacitated demands below are equivalent to the original ones.
    """
    active = inst.active_pairs()
    for pair, _, q in active:
        if q > 1:
            raise WrongRegimeError(f"pair {pair} has q = {q}, expected at most 1")
    p = inst.max_p()
    caps = {e.eid: p + 1 if e.safe else p for e in inst.graph.edges}
    demands = {pair: (p + qij) * pij for pair, pij, qij in active}
    return CapNdpInstance(inst.graph, caps, demands)


def build_capndp_p1(inst: FgcInstance) -> CapNdpInstance:
    """Reduction for the all-p_ij = 1 regime."""
    active = inst.active_pairs()
    for pair, p, _ in active:
        if p != 1:
            raise WrongRegimeError(f"pair {pair} has p = {p}, expected 1")
    q = inst.max_q()
    caps = {e.eid: q + 1 if e.safe else 1 for e in inst.graph.edges}
    demands = {pair: qij + 1 for pair, _, qij in active}
    return CapNdpInstance(inst.graph, caps, demands)


@dataclass(frozen=True)
class CapacitatedFailure:
    pair: tuple[int, int]
    flow: int
    demand: int


@dataclass(frozen=True)
class CapacitatedReport:
    ok: bool
    failures: tuple[CapacitatedFailure, ...] = ()


def check_capacitated_cuts(
    inst: CapNdpInstance, edge_ids, *, find_all: bool = False
) -> CapacitatedReport:
    """Check every demand by an exact max flow over the chosen edges."""
    chosen = frozenset(edge_ids)
    for eid in chosen:
        inst.graph.edge(eid)
    caps = {eid: inst.capacities[eid] for eid in chosen}
    failures = []
    for (i, j), d in sorted(inst.demands.items()):
        if d == 0:
            continue
        value, _ = max_flow_min_cut(inst.graph, caps, i, j)
        if value < d:
            failures.append(CapacitatedFailure((i, j), value, d))
            if not find_all:
                break
    return CapacitatedReport(not failures, tuple(failures))


@dataclass(frozen=True)
class CapNdpResult:
    edges: frozenset[int]
    cost: Fraction
    lp_objective: Fraction
    iterations: int


def solve_capndp(inst: CapNdpInstance, *, max_rows: int = 2000) -> CapNdpResult:
    """Split edges into unit copies, round the cut LP, keep touched originals.

    The returned set is re-checked against the capacitated demands; a failure
    there would mean the rounding itself is broken.
    """
    split = split_parallel(inst.graph, inst.capacities)
    requirements = {pair: d for pair, d in inst.demands.items() if d >= 1}
    rounded = jain_round(SndpInstance(split.graph, requirements), max_rows=max_rows)
    edges = frozenset(split.copy_map[sid] for sid in rounded.edges)
    report = check_capacitated_cuts(inst, edges)
    if not report.ok:
        bad = report.failures[0]
        raise SolverError(
            f"rounded solution moves {bad.flow} < {bad.demand} units for pair "
            f"{bad.pair}"
        )
    return CapNdpResult(
        edges, inst.graph.cost(edges), rounded.lp_objective, rounded.iterations
    )


@dataclass(frozen=True)
class FgcViolation:
    """A pair left under-connected after removing `removed` from the solution."""

    pair: tuple[int, int]
    removed: frozenset[int]
    connectivity: int


@dataclass(frozen=True)
class FgcReport:
    ok: bool
    violations: tuple[FgcViolation, ...] = ()


def verify_fgc(
    inst: FgcInstance,
    edge_ids,
    *,
    subset_guard: int = 10**6,
    find_all: bool = False,
) -> FgcReport:
    """Check feasibility against the definition.

    Removing unsafe edges never raises connectivity, so only the largest
    allowed failure sets need checking, and two screens are decisive on
    their own: connectivity p_ij + q_ij within F clears the pair outright,
    while connectivity below p_ij condemns it with no removals at all.
    """
    g = inst.graph
    chosen = frozenset(edge_ids)
    for eid in chosen:
        g.edge(eid)
    unsafe = sorted(eid for eid in chosen if not g.edge(eid).safe)
    violations: list[FgcViolation] = []
    for (i, j), p, q in inst.active_pairs():
        lam = edge_connectivity(g, i, j, chosen, cutoff=p + q)
        if lam >= p + q:
            continue
        if lam < p:
            violations.append(FgcViolation((i, j), frozenset(), lam))
            if not find_all:
                break
            continue
        k = min(q, len(unsafe))
        if k == 0:
            continue
        if comb(len(unsafe), k) > subset_guard:
            raise GuardExceededError(
                f"pair ({i}, {j}) needs {comb(len(unsafe), k)} failure sets, "
                f"guard is {subset_guard}"
            )
        hit = None
        for combo in itertools.combinations(unsafe, k):
            rest = chosen.difference(combo)
            lam_rest = edge_connectivity(g, i, j, rest, cutoff=p)
            if lam_rest < p:
                hit = FgcViolation((i, j), frozenset(combo), lam_rest)
                break
        if hit is not None:
            violations.append(hit)
            if not find_all:
                break
    return FgcReport(not violations, tuple(violations))


@dataclass(frozen=True)
class CutCharViolation:
    """A cut side whose boundary is too weak for a pair it separates."""

    side: frozenset[int]
    pair: tuple[int, int]
    safe_crossing: int
    total_crossing: int


@dataclass(frozen=True)
class CutCharReport:
    ok: bool
    violations: tuple[CutCharViolation, ...] = ()


def check_cut_characterization(
    inst: FgcInstance,
    edge_ids,
    *,
    node_guard: int = 20,
    find_all: bool = False,
) -> CutCharReport:
    """Check feasibility through cuts instead of failure sets.

    F is feasible iff every cut separating a pair (i, j) carries at least
    p_ij safe edges of F or at least p_ij + q_ij edges of F in total.  Each
    cut is enumerated once as its side avoiding node 0.
    """
    g = inst.graph
    chosen = frozenset(edge_ids)
    for eid in chosen:
        g.edge(eid)
    if g.n > node_guard:
        raise GuardExceededError(f"{g.n} nodes, cut guard is {node_guard}")
    active = inst.active_pairs()
    violations: list[CutCharViolation] = []
    others = list(range(1, g.n))
    for bits in range(1, 1 << len(others)):
        side = frozenset(others[t] for t in range(len(others)) if bits >> t & 1)
        total = 0
        safe = 0
        for eid in chosen:
            e = g.edge(eid)
            if (e.u in side) != (e.v in side):
                total += 1
                if e.safe:
                    safe += 1
        for (i, j), p, q in active:
            if (i in side) == (j in side):
                continue
            if safe >= p or total >= p + q:
                continue
            violations.append(CutCharViolation(side, (i, j), safe, total))
            if not find_all:
                return CutCharReport(False, tuple(violations))
    return CutCharReport(not violations, tuple(violations))


@dataclass(frozen=True)
class FgcSolveResult:
    edges: frozenset[int]
    cost: Fraction
    regime: str              # which reduction ran, "q1" or "p1"
    bound: Fraction          # approximation factor of that reduction
    lp_objective: Fraction
    iterations: int


def solve_fgc(inst: FgcInstance, *, max_rows: int = 2000) -> FgcSolveResult:
    """Dispatch to the applicable reduction.

    When both regimes apply the one with the smaller proven factor runs,
    2(p+1) for all-q <= 1 against 2(q+1) for all-p = 1.
    """
    q1 = inst.is_q1()
    p1 = inst.is_p1()
    if not q1 and not p1:
        raise UnsupportedInstanceError(
            "requirements must have every q_ij <= 1 or every p_ij = 1"
        )
    bound_q1 = Fraction(2 * (inst.max_p() + 1))
    bound_p1 = Fraction(2 * (inst.max_q() + 1))
    if q1 and (not p1 or bound_q1 <= bound_p1):
        regime, bound, capndp = "q1", bound_q1, build_capndp_q1(inst)
    else:
        regime, bound, capndp = "p1", bound_p1, build_capndp_p1(inst)
    result = solve_capndp(capndp, max_rows=max_rows)
    return FgcSolveResult(
        result.edges, result.cost, regime, bound, result.lp_objective,
        result.iterations,
    )
