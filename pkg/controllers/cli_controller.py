# controllers/cli_controller.py
"""
One function per sub-command. Each returns a process exit code and prints one result
line; every V2vcError becomes a one-line reason with exit code 1.

Exit codes: 0 ok / Optimal / accepted, 1 error, 2 Infeasible or rejected,
3 BudgetExceeded.
"""
from __future__ import annotations

import functools
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from common.config.settings import get_settings
from common.errors import ScenarioError, V2vcError
from common.util.app_logger import AppLogger
from logic.bench.harness import METHODS, run_suite, write_records
from logic.bench.plotdata import plotdata_from_csv
from logic.heuristics.rv2vc.runner import solve_rv2vc
from logic.model.ip_builder import IpInstance, build_ip, predicted_dimensions
from logic.model.mps_io import export_mps
from logic.model.plan import encode_plan
from logic.reduction.cnf import parse_dimacs, solve_by_truth_table
from logic.reduction.reduction import reduce_to_v2vc
from logic.reduction.witness import witness_forward
from logic.scenario.benchmarks import RANDOM_SEEDS, lookup, suite
from logic.scenario.generator import generate
from logic.scenario.models import Scenario, violations_text
from logic.scenario.scenario_io import load_scenario, save_scenario
from logic.scenario.validation import validate
from logic.solvers.exact import solve_exact
from logic.solvers.outcome import SolveOutcome, SolveStats, SolveStatus
from logic.solvers.solution_io import load_solution, save_solution
from logic.verify.trajectory import write_trajectories
from logic.verify.verifier import verify_algebraic, verify_semantic

logger = AppLogger.get_logger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_REJECTED, EXIT_BUDGET = 0, 1, 2, 3

_STATUS_EXIT = {
    SolveStatus.OPTIMAL: EXIT_OK,
    SolveStatus.INFEASIBLE: EXIT_REJECTED,
    SolveStatus.BUDGET_EXCEEDED: EXIT_BUDGET,
}


def _one_line_errors(fn: Callable[..., int]) -> Callable[..., int]:
    @functools.wraps(fn)
    def wrapper(*args, **kwargs) -> int:
        try:
            return fn(*args, **kwargs)
        except V2vcError as ex:
            logger.error("command_failed", extra={"command": fn.__name__, "error": str(ex)})
            print(f"error: {ex}")
            return EXIT_ERROR
    return wrapper


def _require(value, flag: str):
    if value is None:
        raise V2vcError(f"missing {flag}")
    return value


def _scenario(path: Optional[str]) -> Scenario:
    scenario = load_scenario(_require(path, "--scenario"))
    problems = validate(scenario)
    if problems:
        raise ScenarioError(f"invalid scenario: {violations_text(problems)}")
    return scenario


def _report(outcome: SolveOutcome) -> int:
    print(f"{outcome.stats.method}: {outcome.summary()}")
    return _STATUS_EXIT[outcome.status]


@_one_line_errors
def cmd_gen(preset: str, out: Optional[str], seed: int = 0) -> int:
    try:
        config = lookup(preset).with_seed(seed)
    except KeyError:
        raise V2vcError(f"unknown preset {preset!r}") from None
    scenario = generate(config)
    path = save_scenario(scenario, _require(out, "--out"))
    print(f"scenario {preset} seed={seed}: {len(scenario.evs)} EVs, "
          f"{len(scenario.road.nodes)} nodes, T={scenario.T} -> {path}")
    return EXIT_OK


@_one_line_errors
def cmd_build(scenario: Optional[str], objective: str = "energy") -> int:
    sc = _scenario(scenario)
    instance = build_ip(sc, objective=objective)
    rows, cols = instance.shape
    predicted = predicted_dimensions(sc)
    print(f"rows={rows} cols={cols} nnz={instance.A.nnz} predicted={predicted[0]}x{predicted[1]}")
    return EXIT_OK


@_one_line_errors
def cmd_export(scenario: Optional[str], out: Optional[str], objective: str = "energy") -> int:
    instance = build_ip(_scenario(scenario), objective=objective)
    path = export_mps(instance, _require(out, "--out"))
    print(f"exported {instance.shape[0]}x{instance.shape[1]} -> {path}")
    return EXIT_OK


@_one_line_errors
def cmd_solve_exact(scenario: Optional[str], out: Optional[str] = None,
                    budget_nodes: Optional[int] = None, backend: Optional[str] = None,
                    objective: str = "energy") -> int:
    instance = build_ip(_scenario(scenario), objective=objective)
    try:
        outcome = solve_exact(instance, backend=backend, budget=budget_nodes)
    except ValueError as ex:
        raise V2vcError(str(ex)) from ex
    if out:
        save_solution(instance, outcome, out)
    return _report(outcome)


@_one_line_errors
def cmd_solve_rv2vc(scenario: Optional[str], out: Optional[str] = None,
                    g2vc_edges: Optional[bool] = None, edges_out: Optional[str] = None) -> int:
    sc = _scenario(scenario)
    instance: Optional[IpInstance] = None
    if out:
        instance = build_ip(sc)
    run = solve_rv2vc(sc, instance=instance, g2vc_edges=g2vc_edges)
    if edges_out:
        run.graph.write_csv(edges_out)
    if out:
        save_solution(instance, run.outcome, out)
    if not run.selection.feasible:
        print(f"rv2vc: status={run.outcome.status.value} reason={run.selection.reason}")
        return _STATUS_EXIT[run.outcome.status]
    return _report(run.outcome)


@_one_line_errors
def cmd_verify(scenario: Optional[str], solution: Optional[str], strict: bool = False,
               trajectory: Optional[str] = None) -> int:
    sc = _scenario(scenario)
    instance = build_ip(sc)
    x = load_solution(instance, _require(solution, "--solution"))
    algebraic = verify_algebraic(instance, x)
    semantic = verify_semantic(sc, x, strict=strict)
    if trajectory:
        write_trajectories(sc, x, trajectory)
    if algebraic.accepted and semantic.accepted:
        print("accepted")
        return EXIT_OK
    failed = algebraic if not algebraic.accepted else semantic
    print(f"rejected: {failed.reason()}")
    return EXIT_REJECTED


@_one_line_errors
def cmd_reduce(cnf: Optional[str], out: Optional[str], witness: Optional[str] = None) -> int:
    path = Path(_require(cnf, "--cnf"))
    if not path.exists():
        raise V2vcError(f"CNF file not found: {path}")
    formula = parse_dimacs(path.read_text(encoding="utf-8"))
    reduced = reduce_to_v2vc(formula)
    save_scenario(reduced.scenario, _require(out, "--out"))
    sc = reduced.scenario
    print(f"reduced n={formula.n} m={formula.m}: {len(sc.evs)} EVs, "
          f"{len(sc.road.nodes)} nodes, T={sc.T} -> {out}")
    if witness:
        assignment = solve_by_truth_table(formula)
        if assignment is None:
            print("formula is unsatisfiable; no witness written")
            return EXIT_REJECTED
        instance = build_ip(sc)
        plan = witness_forward(reduced, assignment)
        outcome = SolveOutcome(status=SolveStatus.OPTIMAL, x=encode_plan(instance, plan),
                               objective=plan.energy(sc), stats=SolveStats(method="witness"))
        save_solution(instance, outcome, witness)
        print(f"witness for {assignment} -> {witness}")
    return EXIT_OK


@_one_line_errors
def cmd_bench(out: Optional[str], suite_name: Optional[str] = None,
              methods: Sequence[str] = METHODS, seeds: Optional[List[int]] = None,
              budget_nodes: Optional[int] = None, runs: Optional[int] = None,
              progress: bool = True) -> int:
    seeds = seeds or RANDOM_SEEDS
    try:
        if suite_name:
            items = suite(suite_name, seeds)
        else:
            items = suite("Q", seeds) + suite("random", seeds)
        records = write_records(
            run_suite(items, methods=methods, runs=runs, budget=budget_nodes, progress=progress),
            _require(out, "--out"))
    except ValueError as ex:
        raise V2vcError(str(ex)) from ex
    gaps = [r.gap for r in records if r.gap is not None]
    worst = f"{max(gaps):.4f}" if gaps else "-"
    print(f"bench: {len(records)} rows -> {out} (max gap {worst}, "
          f"threads={get_settings().threads})")
    return EXIT_OK


@_one_line_errors
def cmd_plotdata(bench_csv: Optional[str], out: Optional[str]) -> int:
    data = plotdata_from_csv(_require(bench_csv, "--bench"))
    paths = data.write(_require(out, "--out"))
    slope = "nan" if data.slope is None else f"{data.slope:.3f}"
    print(f"plotdata: {len(data.timing)} ids, log-log slope {slope} -> {paths['timing'].parent}")
    return EXIT_OK
