# main.py
import argparse
import sys
from typing import List, Optional

from common.config.settings import get_settings
from common.util.app_logger import AppLogger
from controllers import cli_controller as cli

logger = AppLogger.get_logger(__name__)


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return value == "on"


def _methods(value: str) -> List[str]:
    return [m.strip() for m in value.split(",") if m.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="v2vc", description="Vehicle-to-vehicle charging toolkit")
    parser.add_argument("--log-level", default=None, help="overrides V2VC_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a preset scenario")
    p.add_argument("--preset", default="Q1", help="B1..B11 or Q1..Q6")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("build", help="build the integer program and print its size")
    p.add_argument("--scenario", required=True)
    p.add_argument("--objective", default="energy", help="energy or feasibility")

    p = sub.add_parser("export", help="write the integer program as fixed MPS")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--objective", default="energy", help="energy or feasibility")

    p = sub.add_parser("solve-exact", help="solve the integer program exactly")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", help="solution JSON")
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--backend", choices=("auto", "bb", "milp"), default=None)
    p.add_argument("--objective", default="energy", help="energy or feasibility")

    p = sub.add_parser("solve-rv2vc", help="solve the one-action-per-EV restriction")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", help="solution JSON")
    p.add_argument("--g2vc-edges", type=_on_off, default=None)
    p.add_argument("--edges-out", help="action graph CSV")

    p = sub.add_parser("verify", help="check a solution file against a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--trajectory", help="per-EV SOC CSV")

    p = sub.add_parser("reduce", help="reduce a 3SAT formula (DIMACS) to a scenario")
    p.add_argument("--cnf", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--witness", help="also write a witness solution when satisfiable")

    p = sub.add_parser("bench", help="run a benchmark suite into CSV")
    p.add_argument("--suite", choices=("B", "Q", "random"), default=None)
    p.add_argument("--methods", type=_methods, default=["exact", "rv2vc"])
    p.add_argument("--seed", type=int, action="append", default=None)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("plotdata", help="aggregate a bench CSV into plot series")
    p.add_argument("--bench", required=True)
    p.add_argument("--out", required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        AppLogger.set_level(args.log_level)
    logger.debug("command", extra={"command": args.command, "threads": get_settings().threads})

    if args.command == "gen":
        return cli.cmd_gen(args.preset, args.out, seed=args.seed)
    if args.command == "build":
        return cli.cmd_build(args.scenario, objective=args.objective)
    if args.command == "export":
        return cli.cmd_export(args.scenario, args.out, objective=args.objective)
    if args.command == "solve-exact":
        return cli.cmd_solve_exact(args.scenario, args.out, budget_nodes=args.budget_nodes,
                                   backend=args.backend, objective=args.objective)
    if args.command == "solve-rv2vc":
        return cli.cmd_solve_rv2vc(args.scenario, args.out, g2vc_edges=args.g2vc_edges,
                                   edges_out=args.edges_out)
    if args.command == "verify":
        return cli.cmd_verify(args.scenario, args.solution, strict=args.strict,
                              trajectory=args.trajectory)
    if args.command == "reduce":
        return cli.cmd_reduce(args.cnf, args.out, witness=args.witness)
    if args.command == "bench":
        return cli.cmd_bench(args.out, suite_name=args.suite, methods=args.methods, seeds=args.seed,
                             budget_nodes=args.budget_nodes, runs=args.runs,
                             progress=sys.stderr.isatty())
    return cli.cmd_plotdata(args.bench, args.out)


if __name__ == "__main__":
    sys.exit(main())
