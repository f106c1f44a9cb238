"""Seeded random instances, small enough for the exhaustive oracle.

Graphs are connected by construction (random spanning tree plus extra,
possibly parallel, edges) with positive rational costs.  Instance
generators redraw until the full edge set is feasible, so solvers always
have something to find; the redraw loop is part of the seeded stream,
making every instance a pure function of its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import SolverError, ValidationError
from .fgc import FgcInstance, verify_fgc
from .fst import FstInstance, verify_fst
from .graphs import MultiGraph
from .ncfgc import NcFgcInstance, verify_ncfgc

_DENOMINATORS = (1, 1, 1, 1, 2, 4)


@dataclass(frozen=True)
class GenConfig:
    nodes: tuple[int, int] = (3, 6)
    extra_edges: tuple[int, int] = (1, 4)    # on top of the spanning tree
    max_cost: int = 9
    safe_share: float = 0.5
    pairs: tuple[int, int] = (1, 3)
    max_p: int = 3
    max_q: int = 3
    terminals: tuple[int, int] = (2, 4)
    ncfgc_p: tuple[int, int] = (1, 2)
    attempts: int = 2000


def _cost(rng: random.Random, cfg: GenConfig) -> Fraction:
    return Fraction(rng.randint(1, cfg.max_cost), rng.choice(_DENOMINATORS))


def random_multigraph(rng: random.Random, cfg: GenConfig) -> MultiGraph:
    n = rng.randint(*cfg.nodes)
    rows = []
    for v in range(1, n):
        rows.append((rng.randrange(v), v, _cost(rng, cfg), rng.random() < cfg.safe_share))
    for _ in range(rng.randint(*cfg.extra_edges)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        rows.append((u, v, _cost(rng, cfg), rng.random() < cfg.safe_share))
    return MultiGraph.build(n, rows)


def _draw_pairs(rng: random.Random, n: int, count: int) -> list[tuple[int, int]]:
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return sorted(rng.sample(all_pairs, min(count, len(all_pairs))))


def gen_fgc(
    seed: int,
    *,
    regime: str = "q1",
    cfg: GenConfig = GenConfig(),
    ensure_feasible: bool = True,
) -> FgcInstance:
    """Random requirement instance; regime "q1", "p1", or "any"."""
    rng = random.Random(seed)
    for _ in range(cfg.attempts):
        g = random_multigraph(rng, cfg)
        pairs = {}
        for pair in _draw_pairs(rng, g.n, rng.randint(*cfg.pairs)):
            if regime == "q1":
                pairs[pair] = (rng.randint(1, cfg.max_p), 1)
            elif regime == "p1":
                pairs[pair] = (1, rng.randint(1, cfg.max_q))
            else:
                pairs[pair] = (rng.randint(1, cfg.max_p), rng.randint(1, cfg.max_q))
        inst = FgcInstance(g, pairs)
        if not ensure_feasible or verify_fgc(inst, g.edge_ids).ok:
            return inst
    raise SolverError(f"no feasible draw in {cfg.attempts} attempts for seed {seed}")


def gen_fst(
    seed: int, *, cfg: GenConfig = GenConfig(), ensure_feasible: bool = True
) -> FstInstance:
    rng = random.Random(seed)
    for _ in range(cfg.attempts):
        g = random_multigraph(rng, cfg)
        count = rng.randint(cfg.terminals[0], min(cfg.terminals[1], g.n))
        terminals = frozenset(rng.sample(range(g.n), count))
        inst = FstInstance(g, terminals)
        if not ensure_feasible or verify_fst(inst, g.edge_ids).ok:
            return inst
    raise SolverError(f"no feasible draw in {cfg.attempts} attempts for seed {seed}")


def gen_ncfgc(
    seed: int, *, cfg: GenConfig = GenConfig(), ensure_feasible: bool = True
) -> NcFgcInstance:
    """Random node-flexible instance with at least one safe node."""
    rng = random.Random(seed)
    for _ in range(cfg.attempts):
        g = random_multigraph(rng, cfg)
        safe = frozenset(rng.sample(range(g.n), rng.randint(1, max(1, g.n // 2))))
        p = rng.randint(*cfg.ncfgc_p)
        inst = NcFgcInstance(g, safe, p)
        if not ensure_feasible or verify_ncfgc(inst, g.edge_ids, mode="qconn").ok:
            return inst
    raise SolverError(f"no feasible draw in {cfg.attempts} attempts for seed {seed}")


def gen_instance(kind: str, seed: int, *, cfg: GenConfig = GenConfig()):
    """Generator dispatch keyed the same way as instance files."""
    if kind == "fgc-q1":
        return gen_fgc(seed, regime="q1", cfg=cfg)
    if kind == "fgc-p1":
        return gen_fgc(seed, regime="p1", cfg=cfg)
    if kind == "fgc-any":
        return gen_fgc(seed, regime="any", cfg=cfg, ensure_feasible=False)
    if kind == "fst":
        return gen_fst(seed, cfg=cfg)
    if kind == "ncfgc":
        return gen_ncfgc(seed, cfg=cfg)
    raise ValidationError(f"unknown instance kind {kind!r}")


GEN_KINDS = ("fgc-q1", "fgc-p1", "fgc-any", "fst", "ncfgc")
