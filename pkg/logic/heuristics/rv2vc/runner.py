# logic/heuristics/rv2vc/runner.py
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from common.util.app_logger import AppLogger
from logic.heuristics.rv2vc.action_graph import ActionGraph
from logic.heuristics.rv2vc.lowering import lower_to_plan, lower_to_solution
from logic.heuristics.rv2vc.pricing import build_action_graph
from logic.heuristics.rv2vc.selection import ActionSelection, EdgeCost, solve_selection
from logic.model.ip_builder import IpInstance, eval_objective
from logic.scenario.models import Scenario
from logic.solvers.outcome import SolveOutcome, SolveStats, SolveStatus

logger = AppLogger.get_logger(__name__)


@dataclass
class Rv2vcRun:
    graph: ActionGraph
    selection: ActionSelection
    outcome: SolveOutcome


def solve_rv2vc(scenario: Scenario, instance: Optional[IpInstance] = None,
                g2vc_edges: Optional[bool] = None, costs: Optional[EdgeCost] = None) -> Rv2vcRun:
    """
    Graph, selection and lowering end to end. The outcome is Optimal for the
    restricted problem only; its objective is an upper bound on the exact optimum.
    Without `instance` a feasible selection is lowered to a verified Plan only and
    `outcome.x` stays None.
    """
    started = time.perf_counter()
    graph = build_action_graph(scenario, g2vc_edges=g2vc_edges)
    selection = solve_selection(graph, costs)
    x = objective = None
    if selection.feasible and instance is not None:
        x = lower_to_solution(scenario, selection, instance)
        objective = eval_objective(instance, x)
    elif selection.feasible:
        objective = lower_to_plan(scenario, selection).energy(scenario)
    elapsed = (time.perf_counter() - started) * 1000.0
    outcome = SolveOutcome(
        status=selection.status if selection.feasible else SolveStatus.INFEASIBLE,
        x=x,
        objective=objective,
        stats=SolveStats(nodes=len(graph.edges), wall_ms=elapsed, method="rv2vc"),
    )
    logger.info("rv2vc_done", extra={"status": outcome.status.value, "objective": objective,
                                     "edges": len(graph.edges), "ms": round(elapsed, 1)})
    return Rv2vcRun(graph=graph, selection=selection, outcome=outcome)
