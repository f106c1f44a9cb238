"""Survivable network design by iterative LP rounding.

An instance asks, for each node pair, for a number of edge-disjoint paths;
edge labels play no role here.  The solver repeatedly takes an exact vertex of
the cut LP, moves every edge at value 1/2 or more into the chosen set, and
re-solves with those edges fixed until all requirements are met by the chosen
edges alone.  Every vertex must offer such an edge; a miss is a bug in vertex
recovery, not an instance property, and raises JainProgressError.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InfeasibleInstanceError, JainProgressError, ValidationError
from .flows import edge_connectivity, max_flow_min_cut
from .graphs import MultiGraph
from .lp import EPS_ROUND, CutRow, FractionalSolution, solve_cut_lp


def normalize_pairs(pairs: Mapping[tuple[int, int], int], n: int) -> dict[tuple[int, int], int]:
    """Validate and key every pair as (min, max)."""
    out: dict[tuple[int, int], int] = {}
    for (a, b), r in pairs.items():
        if not (0 <= a < n and 0 <= b < n):
            raise ValidationError(f"pair ({a}, {b}) out of range")
        if a == b:
            raise ValidationError(f"pair ({a}, {b}) joins a node to itself")
        if r < 0:
            raise ValidationError(f"negative requirement {r} for pair ({a}, {b})")
        key = (min(a, b), max(a, b))
        if key in out and out[key] != r:
            raise ValidationError(f"conflicting requirements for pair {key}")
        out[key] = r
    return out


@dataclass(frozen=True)
class SndpInstance:
    """Connectivity requirements r_ij over a multigraph, labels ignored."""

    graph: MultiGraph
    requirements: dict[tuple[int, int], int]

    def __post_init__(self):
        object.__setattr__(
            self, "requirements", normalize_pairs(self.requirements, self.graph.n)
        )

    def active_pairs(self) -> list[tuple[tuple[int, int], int]]:
        return [(p, r) for p, r in sorted(self.requirements.items()) if r >= 1]


@dataclass(frozen=True)
class ResidualRequirement:
    """Base requirements together with the edges already chosen at value one."""

    requirements: Mapping[tuple[int, int], int]
    chosen: frozenset[int]


def check_requirements_satisfiable(inst: SndpInstance) -> None:
    """Raise InfeasibleInstanceError with a witness cut if the graph is too sparse."""
    for (i, j), r in inst.active_pairs():
        caps = {e.eid: 1 for e in inst.graph.edges}
        value, cut = max_flow_min_cut(inst.graph, caps, i, j)
        if value < r:
            raise InfeasibleInstanceError(
                f"pair ({i}, {j}) needs {r} edge-disjoint paths but the graph "
                f"admits only {value}",
                pair=(i, j),
                cut=cut,
            )


def separation(
    graph: MultiGraph,
    x: Mapping[int, Fraction],
    residual: ResidualRequirement,
) -> CutRow | None:
    """Most violated cut under capacities x (chosen edges count as 1).

    Ties break toward the smaller cut side, then lexicographic node order.
    The returned row demands the largest requirement separated by the cut, so
    it is at least as strong as the violated pair's own constraint.
    """
    caps: dict[int, Fraction] = {}
    for e in graph.edges:
        if e.eid in residual.chosen:
            caps[e.eid] = Fraction(1)
        else:
            caps[e.eid] = Fraction(x.get(e.eid, 0))
    best = None
    pairs = sorted((p, r) for p, r in residual.requirements.items() if r >= 1)
    for (i, j), r in pairs:
        value, cut = max_flow_min_cut(graph, caps, i, j)
        viol = Fraction(r) - value
        if viol <= 0:
            continue
        rank = (-viol, len(cut.side), tuple(sorted(cut.side)))
        if best is None or rank < best[0]:
            best = (rank, cut)
    if best is None:
        return None
    cut = best[1]
    rhs = max(
        r
        for (i, j), r in pairs
        if (i in cut.side) != (j in cut.side)
    )
    return CutRow(cut.boundary, Fraction(rhs))


def _met(graph: MultiGraph, requirements, chosen) -> bool:
    for (i, j), r in sorted(requirements.items()):
        if r >= 1 and edge_connectivity(graph, i, j, chosen, cutoff=r) < r:
            return False
    return True


@dataclass(frozen=True)
class JainResult:
    edges: frozenset[int]
    lp_objective: Fraction   # objective of the first LP vertex
    iterations: int


def jain_round(inst: SndpInstance, *, max_rows: int = 2000) -> JainResult:
    """Iteratively round cut-LP vertices; the result costs at most twice the
    first LP objective."""
    graph = inst.graph
    requirements = inst.requirements
    check_requirements_satisfiable(inst)
    costs = {e.eid: e.cost for e in graph.edges}
    chosen: set[int] = set()
    first_objective: Fraction | None = None
    iterations = 0
    threshold = Fraction(1, 2) - EPS_ROUND
    while not _met(graph, requirements, chosen):
        residual = ResidualRequirement(requirements, frozenset(chosen))

        def oracle(x, residual=residual):
            return separation(graph, x, residual)

        sol: FractionalSolution = solve_cut_lp(
            costs, {e: 1 for e in chosen}, oracle, max_rows=max_rows
        )
        if first_objective is None:
            first_objective = sol.objective
        newly = [e for e in costs if e not in chosen and sol.x[e] >= threshold]
        if not newly:
            raise JainProgressError(
                "no undecided edge at or above 1/2 in an LP vertex"
            )
        chosen.update(newly)
        iterations += 1
    if first_objective is None:
        first_objective = Fraction(0)
    return JainResult(frozenset(chosen), first_objective, iterations)
