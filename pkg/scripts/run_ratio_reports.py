"""Solve seeded instance batches and print solver-versus-oracle ratio tables.

One table per kind, in the same format the `flexconn ratio-report`
subcommand prints.  Exits 1 if any instance lands beyond its solver's
proven factor, so the script doubles as a slow self-check.
"""

import argparse
import sys
from dataclasses import dataclass

from flexconn.cli import REPORT_KINDS
from flexconn.generators import gen_instance
from flexconn.oracle import OracleBudget, ratio_report


@dataclass(frozen=True)
class RunConfig:
    kinds: tuple[str, ...] = REPORT_KINDS
    count: int = 25
    seed: int = 0
    strategy: str = "bnb"
    max_checks: int = 1_000_000
    stage_one: str = "approx"


def run(cfg: RunConfig) -> bool:
    budget = OracleBudget(max_checks=cfg.max_checks, strategy=cfg.strategy)
    all_within = True
    for kind in cfg.kinds:
        instances = [
            (f"{kind}-{cfg.seed + i}", gen_instance(kind, cfg.seed + i))
            for i in range(cfg.count)
        ]
        report = ratio_report(
            kind, instances, budget=budget, stage_one=cfg.stage_one
        )
        print(report.render(), end="")
        print()
        all_within = all_within and report.all_within()
    return all_within


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kinds", nargs="+", choices=REPORT_KINDS,
                        default=list(REPORT_KINDS))
    parser.add_argument("--count", type=int, default=25)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--strategy", choices=("bnb", "enumerate"), default="bnb")
    parser.add_argument("--max-checks", type=int, default=1_000_000)
    parser.add_argument("--stage-one", choices=("approx", "exact"), default="approx")
    args = parser.parse_args()
    cfg = RunConfig(
        kinds=tuple(args.kinds),
        count=args.count,
        seed=args.seed,
        strategy=args.strategy,
        max_checks=args.max_checks,
        stage_one=args.stage_one,
    )
    return 0 if run(cfg) else 1


if __name__ == "__main__":
    sys.exit(main())
