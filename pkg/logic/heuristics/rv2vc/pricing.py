# logic/heuristics/rv2vc/pricing.py
"""Edge pricing from forward/backward energy labels, and the action graph built from it."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from common.config.settings import get_settings
from common.util.app_logger import AppLogger
from logic.heuristics.rv2vc.action_graph import ActionEdge, ActionGraph
from logic.network.labels import can_reach_direct, min_energy_backward, min_energy_forward, warm_labels
from logic.scenario.models import Ev, Scenario

logger = AppLogger.get_logger(__name__)


def _labels(scenario: Scenario, ev: Ev, nodes: List[int]) -> Tuple[np.ndarray, np.ndarray]:
    ts = scenario.ts
    fwd = min_energy_forward(ts, ev.s_i).values[nodes]     # (len(nodes), T)
    bwd = min_energy_backward(ts, ev.f_i).values[nodes]
    return fwd, bwd


def _schedule_grid(T: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All (t0, k) with k >= 1 and t0 + k <= T - 1, t0-major then k."""
    t0, k = np.meshgrid(np.arange(T - 1), np.arange(1, T), indexing="ij")
    keep = t0 + k <= T - 1
    return t0[keep], k[keep], (t0 + k)[keep]


def _first_arrival(label: np.ndarray, t: int) -> int:
    """Earliest step with the same label as t; labels never grow while waiting."""
    return int(np.argmax(label[: t + 1] == label[t]))


def _pair_table(scenario: Scenario, helper: Ev, needy: Ev, nodes: List[int]) -> List[Optional[ActionEdge]]:
    """Cheapest feasible pair schedule per candidate meeting node (None if none)."""
    T = scenario.T
    if T < 2 or not nodes:
        return [None] * len(nodes)
    fh, bh = _labels(scenario, helper, nodes)
    fn, bn = _labels(scenario, needy, nodes)
    t0, k, t1 = _schedule_grid(T)
    rate = helper.e_i

    res_h = helper.SOC_i - fh[:, t0]                   # (nodes, schedules)
    res_n = needy.SOC_i - fn[:, t0]
    given = k * rate
    ok = (
        (res_h >= 0) & (res_n >= 0)
        & (res_h - given >= bh[:, t1])
        & (res_n + given <= needy.MAXSOC_i)
        & (res_n + given >= bn[:, t1])
    )
    cost = np.where(ok, fh[:, t0] + bh[:, t1] + fn[:, t0] + bn[:, t1], np.inf)

    road = scenario.road
    out: List[Optional[ActionEdge]] = []
    for row, v in enumerate(nodes):
        best = int(np.argmin(cost[row]))            # first minimum: smallest t0, then k
        if not np.isfinite(cost[row, best]):
            out.append(None)
            continue
        s0, sk = int(t0[best]), int(k[best])
        out.append(ActionEdge(
            kind="pair", i=helper.id, j=needy.id, node=road.nodes[v].id, cost=int(cost[row, best]),
            t_h=_first_arrival(fh[row], s0), t_n=_first_arrival(fn[row], s0), t0=s0, k=sk,
        ))
    return out


def pair_edge(scenario: Scenario, helper: str, needy: str, m: str) -> Optional[ActionEdge]:
    """
    Cheapest schedule in which `helper` charges `needy` at meeting point `m` for k
    consecutive steps from t0, after which both still reach their destinations.
    None when no (t0, k) works.
    """
    node = scenario.road.index[m]
    return _pair_table(scenario, scenario.ev(helper), scenario.ev(needy), [node])[0]


def direct_edge(scenario: Scenario, ev: str) -> Optional[ActionEdge]:
    e = scenario.ev(ev)
    energy = min_energy_forward(scenario.ts, e.s_i).at(e.f_i, scenario.T - 1)
    if not energy <= e.SOC_i:
        return None
    return ActionEdge(kind="direct", i=e.id, node=e.f_i, cost=int(energy))


def g2vc_edge(scenario: Scenario, ev: str, p: str) -> Optional[ActionEdge]:
    """Needy `ev` charges alone at parking station `p`; cheapest traversal, then least grid energy."""
    e = scenario.ev(ev)
    T = scenario.T
    if T < 2:
        return None
    node = scenario.road.index[p]
    fwd, bwd = _labels(scenario, e, [node])
    fwd, bwd = fwd[0], bwd[0]
    t0, k, t1 = _schedule_grid(T)
    res = e.SOC_i - fwd[t0]
    drawn = k * scenario.e_p[p]
    ok = (res >= 0) & (res + drawn <= e.MAXSOC_i) & (res + drawn >= bwd[t1])
    if not ok.any():
        return None
    travel = np.where(ok, fwd[t0] + bwd[t1], np.inf)
    order = np.lexsort((k, t0, drawn, travel))
    best = int(order[0])
    return ActionEdge(kind="g2vc", i=e.id, node=p, cost=int(travel[best]),
                      t_n=_first_arrival(fwd, int(t0[best])), t0=int(t0[best]), k=int(k[best]),
                      grid_energy=int(drawn[best]))


def build_action_graph(scenario: Scenario, g2vc_edges: Optional[bool] = None,
                       threads: Optional[int] = None) -> ActionGraph:
    """
    Direct edges for EVs that reach their destination unaided; one pair edge per
    (helper, needy, meeting point) whose schedule is feasible; optionally one g2vc
    edge per (needy, parking station).
    """
    settings = get_settings()
    g2vc_edges = settings.g2vc_edges if g2vc_edges is None else g2vc_edges
    threads = threads or settings.threads
    ts = scenario.ts
    warm_labels(ts, [ev.s_i for ev in scenario.evs], [ev.f_i for ev in scenario.evs])

    helpers = [ev for ev in scenario.evs if can_reach_direct(scenario.road, scenario.T, ev, ts=ts)]
    helper_ids = {ev.id for ev in helpers}
    needy = [ev for ev in scenario.evs if ev.id not in helper_ids]
    graph = ActionGraph(evs=tuple(ev.id for ev in scenario.evs),
                        helpers=tuple(ev.id for ev in helpers),
                        needy=tuple(ev.id for ev in needy))

    for ev in helpers:
        graph.edges.append(direct_edge(scenario, ev.id))

    meeting = [scenario.road.index[m] for m in scenario.road.meeting_points]
    jobs = [(h, n) for h in helpers for n in needy]

    def price(job):
        return _pair_table(scenario, job[0], job[1], meeting)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tables = list(pool.map(price, jobs))
    else:
        tables = [price(job) for job in jobs]
    for table in tables:
        graph.edges.extend(e for e in table if e is not None)

    if g2vc_edges:
        for ev in needy:
            for p in scenario.road.parking_stations:
                edge = g2vc_edge(scenario, ev.id, p)
                if edge is not None:
                    graph.edges.append(edge)

    logger.info("action_graph_built", extra={"evs": len(graph.evs), "helpers": len(helpers),
                                             "needy": len(needy), **graph.counts()})
    return graph
