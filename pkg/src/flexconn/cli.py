"""Command line front end.

Exit codes: 0 success, 1 a ratio past its proven bound, 2 infeasible,
3 oracle refusal, 64 bad usage, 65 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    GuardExceededError,
    InfeasibleInstanceError,
    InvalidQueryError,
    OracleRefusalError,
    ParseError,
    UnknownEdgeError,
    UnsupportedInstanceError,
    ValidationError,
    WrongRegimeError,
)
from .fgc import solve_fgc, verify_fgc
from .fst import solve_fst, verify_fst
from .generators import GEN_KINDS, gen_instance
from .instance_io import (
    InstanceDoc,
    SolutionDoc,
    kind_of,
    read_instance,
    read_solution,
    render_instance,
    render_solution,
)
from .ncfgc import solve_p_ncfgc, verify_ncfgc
from .oracle import OracleBudget, exact_opt, ratio_report

EX_OK = 0
EX_RATIO = 1
EX_INFEASIBLE = 2
EX_REFUSED = 3
EX_USAGE = 64
EX_DATA = 65

REPORT_KINDS = ("fgc-q1", "fgc-p1", "fst", "ncfgc")

_DATA_ERRORS = (
    ParseError,
    ValidationError,
    UnknownEdgeError,
    InvalidQueryError,
    UnsupportedInstanceError,
    WrongRegimeError,
    GuardExceededError,
)


class _Parser(argparse.ArgumentParser):
    """Usage problems exit with 64 instead of argparse's default 2, which is
    taken by infeasibility."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _parse_edges(spec: str) -> frozenset[int]:
    spec = spec.strip()
    if not spec:
        return frozenset()
    try:
        return frozenset(int(token) for token in spec.split(","))
    except ValueError:
        raise ValidationError(f"bad edge list {spec!r}, expected ids like 0,2,5")


def _emit_solution(args, doc: SolutionDoc) -> None:
    text = render_solution(doc)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        print(text, end="")


def cmd_solve(args) -> int:
    doc = read_instance(args.instance)
    if doc.kind == "fgc":
        result = solve_fgc(doc.instance)
    elif doc.kind == "fst":
        result = solve_fst(doc.instance, stage_one=args.stage_one)
    else:
        result = solve_p_ncfgc(doc.instance)
    _emit_solution(args, SolutionDoc(doc.kind, result.cost, tuple(result.edges)))
    return EX_OK


def _witness_lines(kind: str, report) -> list[str]:
    lines = []
    for v in report.violations:
        if kind == "fgc":
            removed = ",".join(str(e) for e in sorted(v.removed)) or "nothing"
            lines.append(
                f"pair {v.pair[0]},{v.pair[1]}: connectivity {v.connectivity} "
                f"after removing {removed}"
            )
        elif kind == "fst":
            if v.removed is None:
                lines.append("terminals are disconnected")
            else:
                lines.append(
                    f"terminals disconnected after removing unsafe edge {v.removed}"
                )
        else:
            if v.removed is None:
                lines.append(
                    f"pair {v.pair[0]},{v.pair[1]}: capacitated connectivity "
                    f"{v.connectivity}"
                )
            else:
                removed = ",".join(str(x) for x in sorted(v.removed)) or "nothing"
                lines.append(
                    f"pair {v.pair[0]},{v.pair[1]}: connectivity {v.connectivity} "
                    f"after nodes {removed} fail"
                )
    return lines


def cmd_verify(args) -> int:
    doc = read_instance(args.instance)
    if args.solution is not None:
        sol = read_solution(args.solution)
        if sol.kind != doc.kind:
            raise ValidationError(
                f"solution kind {sol.kind!r} does not match instance kind {doc.kind!r}"
            )
        edges = frozenset(sol.edges)
        actual = doc.instance.graph.cost(edges)
        if actual != sol.cost:
            raise ValidationError(
                f"solution says cost {sol.cost} but the edges cost {actual}"
            )
    else:
        edges = _parse_edges(args.edges)
    if doc.kind == "fgc":
        report = verify_fgc(doc.instance, edges)
    elif doc.kind == "fst":
        report = verify_fst(doc.instance, edges)
    else:
        report = verify_ncfgc(doc.instance, edges, mode=args.mode)
    if report.ok:
        print("feasible")
        return EX_OK
    print("infeasible")
    for line in _witness_lines(doc.kind, report):
        print(line)
    return EX_INFEASIBLE


def cmd_oracle(args) -> int:
    doc = read_instance(args.instance)
    budget = OracleBudget(
        max_checks=args.max_checks,
        time_limit=args.time_limit,
        strategy=args.strategy,
    )
    result = exact_opt(doc.instance, budget=budget)
    if not result.feasible:
        print("infeasible")
        return EX_INFEASIBLE
    _emit_solution(args, SolutionDoc(doc.kind, result.cost, tuple(result.edges)))
    return EX_OK


def cmd_gen(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = args.seed + i
        instance = gen_instance(args.kind, seed)
        doc = InstanceDoc(kind_of(instance), instance)
        path = out_dir / f"{args.kind}-{seed}.instance"
        path.write_text(render_instance(doc))
        print(path)
    return EX_OK


def cmd_ratio_report(args) -> int:
    instances = [
        (f"{args.kind}-{args.seed + i}", gen_instance(args.kind, args.seed + i))
        for i in range(args.count)
    ]
    budget = OracleBudget(max_checks=args.max_checks, strategy=args.strategy)
    report = ratio_report(
        args.kind, instances, budget=budget, stage_one=args.stage_one
    )
    print(report.render(), end="")
    if report.all_within():
        return EX_OK
    # a bound past its proof is a finding; keep the evidence reproducible
    by_name = dict(instances)
    for entry in report.entries:
        if not entry.within:
            inst = by_name[entry.name]
            print(f"counterexample {entry.name}:", file=sys.stderr)
            doc = InstanceDoc(kind_of(inst), inst)
            sys.stderr.write(render_instance(doc))
    return EX_RATIO


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="flexconn",
        description="Solvers, verifiers, and exact oracles for flexible "
        "network connectivity design.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("instance", help="instance file")
    solve.add_argument("--output", help="write the solution here instead of stdout")
    solve.add_argument(
        "--stage-one",
        choices=("approx", "exact"),
        default="approx",
        help="tree stage for fst instances",
    )
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="check a solution against an instance")
    verify.add_argument("instance", help="instance file")
    which = verify.add_mutually_exclusive_group(required=True)
    which.add_argument("--solution", help="solution file")
    which.add_argument("--edges", help="comma-separated edge ids, empty for none")
    verify.add_argument(
        "--mode",
        choices=("qconn", "enumeration", "both"),
        default="both",
        help="feasibility route for ncfgc instances",
    )
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="find a true optimum by search")
    oracle.add_argument("instance", help="instance file")
    oracle.add_argument("--output", help="write the solution here instead of stdout")
    oracle.add_argument("--strategy", choices=("bnb", "enumerate"), default="bnb")
    oracle.add_argument("--max-checks", type=int, default=1_000_000)
    oracle.add_argument("--time-limit", type=float, default=None)
    oracle.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("gen", help="write seeded random instance files")
    gen.add_argument("kind", choices=GEN_KINDS)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--out-dir", default=".")
    gen.set_defaults(func=cmd_gen)

    report = sub.add_parser(
        "ratio-report",
        help="solve seeded instances and compare against oracle optima",
    )
    report.add_argument("kind", choices=REPORT_KINDS)
    report.add_argument("--count", type=int, default=20)
    report.add_argument("--seed", type=int, default=0)
    report.add_argument("--strategy", choices=("bnb", "enumerate"), default="bnb")
    report.add_argument("--max-checks", type=int, default=1_000_000)
    report.add_argument(
        "--stage-one",
        choices=("approx", "exact"),
        default="approx",
        help="tree stage for fst instances",
    )
    report.set_defaults(func=cmd_ratio_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}")
        return EX_INFEASIBLE
    except OracleRefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EX_REFUSED
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    raise SystemExit(main())
