"""Exhaustive optimum finder and approximation-ratio reporting.

The oracle finds a true minimum-cost feasible edge set by search, so it only
accepts small instances; anything beyond its budget raises
OracleRefusalError rather than returning a guess.  Predicates must be
monotone: supersets of a feasible set stay feasible.  All feasibility
notions in this package are monotone because extra edges never remove paths,
and an extra unsafe edge only widens the adversary's choices by options it
could ignore.

Among equal-cost optima the one with the lexicographically smallest sorted
edge-id tuple is returned, by both search strategies, so results are
reproducible and thread-count independent.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import OracleRefusalError, SolverError, ValidationError
from .fgc import FgcInstance, CapNdpInstance, check_capacitated_cuts, solve_fgc, verify_fgc
from .flows import edge_connectivity
from .fst import FstInstance, solve_fst, verify_fst
from .jain import SndpInstance
from .ncfgc import NcFgcInstance, solve_p_ncfgc, verify_ncfgc

_ENUM_CHUNK = 4096


def worker_count() -> int:
    """Thread pool width, capped by the FLEXCONN_THREADS variable."""
    limit = os.environ.get("FLEXCONN_THREADS")
    if limit is not None:
        try:
            parsed = int(limit)
        except ValueError:
            raise ValidationError(f"FLEXCONN_THREADS must be an integer, got {limit!r}")
        if parsed < 1:
            raise ValidationError("FLEXCONN_THREADS must be at least 1")
        return parsed
    return min(os.cpu_count() or 1, 8)


@dataclass(frozen=True)
class OracleBudget:
    max_checks: int = 1_000_000
    time_limit: float | None = None
    strategy: str = "bnb"

    def __post_init__(self):
        if self.max_checks < 1:
            raise ValidationError("max_checks must be at least 1")
        if self.strategy not in ("bnb", "enumerate"):
            raise ValidationError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class OptResult:
    feasible: bool
    cost: Fraction | None
    edges: frozenset[int] | None


def minimum_cost_subset(
    ids: Iterable[int],
    costs: Mapping[int, Fraction],
    predicate: Callable[[frozenset[int]], bool],
    *,
    budget: OracleBudget | None = None,
) -> OptResult:
    """Cheapest subset of ids satisfying a monotone predicate."""
    budget = budget or OracleBudget()
    order = sorted(set(ids))
    for eid in order:
        if costs[eid] < 0:
            raise ValidationError(f"negative cost for id {eid}")
    if budget.strategy == "enumerate":
        return _enumerate_all(order, costs, predicate, budget)
    return _branch_and_bound(order, costs, predicate, budget)


def _key(cost: Fraction, edges: frozenset[int]):
    return (cost, tuple(sorted(edges)))


class _Meter:
    """Counts predicate calls and watches the clock."""

    def __init__(self, budget: OracleBudget):
        self.budget = budget
        self.checks = 0
        self.started = time.monotonic()

    def tick(self):
        self.checks += 1
        if self.checks > self.budget.max_checks:
            raise OracleRefusalError(
                f"needed more than {self.budget.max_checks} feasibility checks"
            )
        if (
            self.budget.time_limit is not None
            and time.monotonic() - self.started > self.budget.time_limit
        ):
            raise OracleRefusalError(
                f"exceeded the {self.budget.time_limit} second time limit"
            )


def _branch_and_bound(order, costs, predicate, budget) -> OptResult:
    meter = _Meter(budget)
    meter.tick()
    if not predicate(frozenset(order)):
        return OptResult(False, None, None)
    # Expensive ids first so exclusion decisions are made on them early.
    order = sorted(order, key=lambda eid: (-costs[eid], eid))
    best: tuple | None = None

    def descend(idx: int, chosen: frozenset[int], cost: Fraction):
        nonlocal best
        if best is not None and cost > best[0]:
            return
        rest = frozenset(order[idx:])
        meter.tick()
        if not predicate(chosen | rest):
            return
        meter.tick()
        if predicate(chosen):
            key = _key(cost, chosen)
            if best is None or key < best:
                best = key
            # A strictly positive tail cannot tie, let alone improve.
            if all(costs[eid] > 0 for eid in rest):
                return
        if idx == len(order):
            return
        eid = order[idx]
        descend(idx + 1, chosen, cost)
        descend(idx + 1, chosen | {eid}, cost + costs[eid])

    descend(0, frozenset(), Fraction(0))
    if best is None:
        raise SolverError("search missed the feasible full set")
    cost, edges = best[0], frozenset(best[1])
    return OptResult(True, cost, edges)


def _enumerate_all(order, costs, predicate, budget) -> OptResult:
    if 2 ** len(order) > budget.max_checks:
        raise OracleRefusalError(
            f"{2 ** len(order)} subsets exceed the {budget.max_checks} check budget"
        )
    meter = _Meter(budget)

    def chunk_best(start: int, stop: int):
        local = None
        for mask in range(start, stop):
            subset = frozenset(
                order[b] for b in range(len(order)) if mask >> b & 1
            )
            meter.tick()
            if not predicate(subset):
                continue
            key = _key(sum((costs[e] for e in subset), Fraction(0)), subset)
            if local is None or key < local:
                local = key
        return local

    total = 2 ** len(order)
    spans = [
        (lo, min(lo + _ENUM_CHUNK, total)) for lo in range(0, total, _ENUM_CHUNK)
    ]
    if len(spans) <= 1:
        results = [chunk_best(lo, hi) for lo, hi in spans]
    else:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            results = list(pool.map(lambda span: chunk_best(*span), spans))
    keys = [k for k in results if k is not None]
    if not keys:
        return OptResult(False, None, None)
    cost, edges = min(keys)[0], frozenset(min(keys)[1])
    return OptResult(True, cost, edges)


def _sndp_feasible(inst: SndpInstance, subset: frozenset[int]) -> bool:
    return all(
        edge_connectivity(inst.graph, i, j, subset, cutoff=r) >= r
        for (i, j), r in inst.active_pairs()
    )


def exact_opt(instance, *, budget: OracleBudget | None = None) -> OptResult:
    """Dispatch the oracle over any instance kind in this package."""
    if isinstance(instance, FgcInstance):
        predicate = lambda s: verify_fgc(instance, s).ok
    elif isinstance(instance, CapNdpInstance):
        predicate = lambda s: check_capacitated_cuts(instance, s).ok
    elif isinstance(instance, FstInstance):
        predicate = lambda s: verify_fst(instance, s).ok
    elif isinstance(instance, NcFgcInstance):
        predicate = lambda s: verify_ncfgc(instance, s, mode="qconn").ok
    elif isinstance(instance, SndpInstance):
        predicate = lambda s: _sndp_feasible(instance, s)
    else:
        raise ValidationError(f"no oracle for {type(instance).__name__}")
    g = instance.graph
    costs = {eid: g.edge(eid).cost for eid in g.edge_ids}
    return minimum_cost_subset(g.edge_ids, costs, predicate, budget=budget)


@dataclass(frozen=True)
class RatioEntry:
    name: str
    solver_cost: Fraction
    opt_cost: Fraction
    ratio: Fraction
    bound: Fraction
    within: bool


@dataclass(frozen=True)
class RatioReport:
    kind: str
    entries: tuple[RatioEntry, ...]

    def all_within(self) -> bool:
        return all(e.within for e in self.entries)

    def worst(self) -> Fraction:
        return max((e.ratio for e in self.entries), default=Fraction(1))

    def render(self) -> str:
        lines = [f"kind={self.kind} instances={len(self.entries)}"]
        for e in self.entries:
            lines.append(
                f"name={e.name} solver={e.solver_cost} opt={e.opt_cost} "
                f"ratio={e.ratio} bound={e.bound} "
                f"within={'yes' if e.within else 'no'}"
            )
        lines.append(
            f"summary worst={self.worst()} "
            f"all_within={'yes' if self.all_within() else 'no'}"
        )
        return "\n".join(lines) + "\n"


def _solve_for_report(kind: str, instance, stage_one: str):
    if kind.startswith("fgc"):
        result = solve_fgc(instance)
        return result.cost, result.bound
    if kind == "fst":
        result = solve_fst(instance, stage_one=stage_one)
        return result.cost, result.bound
    if kind == "ncfgc":
        result = solve_p_ncfgc(instance)
        return result.cost, result.bound
    raise ValidationError(f"unknown report kind {kind!r}")


def ratio_report(
    kind: str,
    instances: Iterable[tuple[str, object]],
    *,
    budget: OracleBudget | None = None,
    stage_one: str = "approx",
) -> RatioReport:
    """Solve each instance, compare with the oracle optimum, and flag any
    ratio beyond the solver's proven factor."""
    entries = []
    for name, instance in instances:
        solver_cost, bound = _solve_for_report(kind, instance, stage_one)
        opt = exact_opt(instance, budget=budget)
        if not opt.feasible:
            raise SolverError(f"{name}: solver succeeded on an infeasible instance")
        if opt.cost == 0:
            if solver_cost != 0:
                raise SolverError(f"{name}: positive cost where the optimum is free")
            ratio = Fraction(1)
        else:
            ratio = Fraction(solver_cost, 1) / opt.cost
        entries.append(
            RatioEntry(
                name, solver_cost, opt.cost, ratio, bound,
                solver_cost <= bound * opt.cost,
            )
        )
    return RatioReport(kind, tuple(entries))
