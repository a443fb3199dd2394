# logic/solvers/outcome.py
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class SolveStats:
    nodes: int = 0
    wall_ms: float = 0.0
    method: str = ""


@dataclass
class SolveOutcome:
    """
    Result of any exact or heuristic solve.

    `x` and `objective` are set for Optimal, and for BudgetExceeded when an incumbent
    exists; `optimal` is True only for Optimal.
    """

    status: SolveStatus
    x: Optional[np.ndarray] = None
    objective: Optional[int] = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    @property
    def has_solution(self) -> bool:
        return self.x is not None

    def summary(self) -> str:
        obj = "-" if self.objective is None else str(self.objective)
        return (f"status={self.status.value} objective={obj} "
                f"nodes={self.stats.nodes} ms={self.stats.wall_ms:.1f}")
