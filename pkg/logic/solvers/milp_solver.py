# logic/solvers/milp_solver.py
"""Exact solving through scipy's HiGHS MILP interface."""
from __future__ import annotations

import time
from typing import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from common.config.settings import get_settings
from common.util.app_logger import AppLogger
from logic.model.ip_builder import IpInstance, eval_objective
from logic.network.labels import min_energy_backward, min_energy_forward
from logic.solvers.outcome import SolveOutcome, SolveStats, SolveStatus

logger = AppLogger.get_logger(__name__)


def reachability_upper(instance: IpInstance) -> np.ndarray:
    """
    Upper bounds with every X arc off all (s_i, 0) -> (f_i, T-1) paths fixed to 0,
    and the Y/Z columns tied to such a waiting arc fixed to 0 as well.
    """
    sc, lay, ts = instance.scenario, instance.layout, instance.scenario.ts
    u = instance.u.copy()
    xb = lay.columns["X"]
    usable = np.zeros((lay.V, ts.num_arcs), dtype=bool)
    for i, ev in enumerate(sc.evs):
        fwd = min_energy_forward(ts, ev.s_i).values
        bwd = min_energy_backward(ts, ev.f_i).values
        usable[i] = np.isfinite(fwd[ts.v_tail, ts.t_tail]) & np.isfinite(bwd[ts.v_head, ts.t_head])
    u[xb.offset:xb.stop] = np.where(usable.ravel(), u[xb.offset:xb.stop], 0)

    T1 = lay.T - 1
    steps = np.arange(T1)
    for pk, p in enumerate(lay.parking):
        for i in range(lay.V):
            waits = usable[i, ts.wait_arc[p, :T1]]
            cols = lay.columns["Y"].offset + (i * len(lay.parking) + pk) * T1 + steps
            u[cols[~waits]] = 0
    for mk, m in enumerate(lay.meeting):
        for r in range(lay.V):
            for g in range(lay.V):
                if g == r:
                    continue
                waits = usable[r, ts.wait_arc[m, :T1]] & usable[g, ts.wait_arc[m, :T1]]
                cols = np.array([lay.z(r, g, m, t) for t in steps], dtype=np.int64)
                u[cols[~waits]] = 0
    return u


def solve_milp(instance: IpInstance, time_limit: Optional[float] = None) -> SolveOutcome:
    settings = get_settings()
    time_limit = time_limit or settings.milp_time_limit
    lay = instance.layout
    started = time.perf_counter()
    integrality = np.zeros(lay.num_cols, dtype=np.int8)
    # slacks are integral once the binaries are
    integrality[:lay.binary_stop] = 1
    b = instance.b.astype(float)
    res = milp(
        c=instance.objective.c.astype(float),
        constraints=LinearConstraint(instance.A, b, b),
        integrality=integrality,
        bounds=Bounds(instance.l.astype(float), reachability_upper(instance).astype(float)),
        options={"time_limit": float(time_limit), "disp": False},
    )
    stats = SolveStats(nodes=int(getattr(res, "mip_node_count", 0) or 0),
                       wall_ms=(time.perf_counter() - started) * 1000.0, method="milp")

    x = objective = None
    if res.x is not None:
        x = np.rint(res.x).astype(np.int64)
        x[lay.binary_stop:] = 0
        x[lay.binary_stop:] = (instance.b - instance.A @ x)[lay.path_rows:]
        objective = eval_objective(instance, x)
    if res.status == 0:
        status = SolveStatus.OPTIMAL
    elif res.status == 2:
        status, x, objective = SolveStatus.INFEASIBLE, None, None
    else:
        status = SolveStatus.BUDGET_EXCEEDED
    logger.info("milp_done", extra={"status": status.value, "objective": objective,
                                    "highs_status": int(res.status), "ms": round(stats.wall_ms, 1)})
    return SolveOutcome(status=status, x=x, objective=objective, stats=stats)
