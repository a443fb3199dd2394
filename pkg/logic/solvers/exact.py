# logic/solvers/exact.py
from __future__ import annotations

from typing import Optional

from common.config.settings import get_settings
from common.util.app_logger import AppLogger
from logic.model.ip_builder import IpInstance
from logic.solvers.branch_and_bound import solve_bb
from logic.solvers.milp_solver import solve_milp
from logic.solvers.outcome import SolveOutcome

logger = AppLogger.get_logger(__name__)

BACKENDS = ("auto", "bb", "milp")


def pick_backend(instance: IpInstance, backend: Optional[str] = None) -> str:
    settings = get_settings()
    backend = backend or settings.exact_backend
    if backend not in BACKENDS:
        raise ValueError(f"unknown exact backend {backend!r}; expected one of {BACKENDS}")
    if backend == "auto":
        return "bb" if len(instance.scenario.evs) <= settings.bb_max_evs else "milp"
    return backend


def solve_exact(instance: IpInstance, backend: Optional[str] = None,
                budget: Optional[int] = None) -> SolveOutcome:
    chosen = pick_backend(instance, backend)
    logger.debug("exact_backend", extra={"backend": chosen, "cols": instance.shape[1]})
    if chosen == "bb":
        return solve_bb(instance, budget=budget)
    return solve_milp(instance)
