# logic/heuristics/rv2vc/selection.py
"""One action per EV by minimum-cost assignment."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from common.util.app_logger import AppLogger
from logic.heuristics.rv2vc.action_graph import ActionEdge, ActionGraph
from logic.solvers.outcome import SolveStatus

logger = AppLogger.get_logger(__name__)

EdgeCost = Callable[[ActionEdge], float]


def linear_cost(edge: ActionEdge) -> float:
    return float(edge.cost)


class ConvexPiecewiseCost:
    """
    Convex piecewise-linear cost of an edge's energy: f(0) = 0, slope `slopes[k]`
    on [breakpoints[k], breakpoints[k + 1]). Each chosen edge carries its whole
    energy, so applying f per edge equals the parallel-edge expansion.
    """

    def __init__(self, breakpoints: Sequence[float], slopes: Sequence[float]):
        if len(breakpoints) != len(slopes) or not breakpoints or breakpoints[0] != 0:
            raise ValueError("need one slope per breakpoint, starting at 0")
        if any(b >= a for a, b in zip(breakpoints[1:], breakpoints)):
            raise ValueError("breakpoints must increase")
        if any(s2 < s1 for s1, s2 in zip(slopes, slopes[1:])):
            raise ValueError("slopes must not decrease (convexity)")
        self.breakpoints = [float(b) for b in breakpoints]
        self.slopes = [float(s) for s in slopes]

    def value(self, energy: float) -> float:
        total = 0.0
        ends = self.breakpoints[1:] + [float("inf")]
        for start, end, slope in zip(self.breakpoints, ends, self.slopes):
            if energy <= start:
                break
            total += slope * (min(energy, end) - start)
        return total

    def segments(self, energy: float) -> List[Tuple[float, float]]:
        """(amount, slope) pieces of the parallel-edge expansion of one edge."""
        out = []
        ends = self.breakpoints[1:] + [float("inf")]
        for start, end, slope in zip(self.breakpoints, ends, self.slopes):
            if energy <= start:
                break
            out.append((min(energy, end) - start, slope))
        return out

    def __call__(self, edge: ActionEdge) -> float:
        return self.value(edge.cost)


@dataclass
class ActionSelection:
    status: SolveStatus
    chosen: Dict[str, ActionEdge] = field(default_factory=dict)   # EV id -> its edge
    cost: float = 0.0
    reason: str = ""

    @property
    def feasible(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    @property
    def edges(self) -> List[ActionEdge]:
        seen, out = set(), []
        for edge in self.chosen.values():
            if id(edge) not in seen:
                seen.add(id(edge))
                out.append(edge)
        return out

    @property
    def grid_energy(self) -> int:
        return sum(e.grid_energy for e in self.edges)


def _infeasible(reason: str) -> ActionSelection:
    logger.info("selection_infeasible", extra={"reason": reason})
    return ActionSelection(status=SolveStatus.INFEASIBLE, reason=reason)


def solve_selection(graph: ActionGraph, costs: Optional[EdgeCost] = None) -> ActionSelection:
    """
    Rows are helpers then needy EVs; columns are needy EVs then one "direct" slot per
    helper. A helper takes a needy column (pair) or its own slot (direct); a needy row
    takes its own column (g2vc) or any free slot.
    """
    costs = costs or linear_cost
    helpers, needy = list(graph.helpers), list(graph.needy)
    H, N = len(helpers), len(needy)
    for ev in needy:
        if graph.degree(ev) == 0:
            return _infeasible(f"{ev} has no incident action")

    big = np.full((H + N, N + H), np.inf)
    best: Dict[Tuple[int, int], ActionEdge] = {}

    def offer(row: int, col: int, edge: ActionEdge) -> None:
        value = costs(edge)
        if value < big[row, col]:
            big[row, col] = value
            best[(row, col)] = edge

    h_index = {ev: k for k, ev in enumerate(helpers)}
    n_index = {ev: k for k, ev in enumerate(needy)}
    for edge in graph.edges:
        if edge.kind == "direct":
            offer(h_index[edge.i], N + h_index[edge.i], edge)
        elif edge.kind == "pair":
            offer(h_index[edge.i], n_index[edge.j], edge)
        else:
            offer(H + n_index[edge.i], n_index[edge.i], edge)
    big[H:, N:] = 0.0

    try:
        rows, cols = linear_sum_assignment(big)
    except ValueError:
        return _infeasible("no assignment covers every EV")
    if not np.isfinite(big[rows, cols]).all():
        return _infeasible("no assignment covers every EV")

    chosen: Dict[str, ActionEdge] = {}
    total = 0.0
    for row, col in zip(rows, cols):
        if row >= H and col >= N:
            continue
        edge = best[(int(row), int(col))]
        total += big[row, col]
        for ev in edge.participants:
            chosen[ev] = edge
    logger.info("selection_done", extra={"cost": total, "edges": len(set(map(id, chosen.values())))})
    return ActionSelection(status=SolveStatus.OPTIMAL, chosen=chosen, cost=total)
