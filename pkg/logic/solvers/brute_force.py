# logic/solvers/brute_force.py
"""
Exhaustive oracle: every combination of per-EV paths, then every charging schedule
the combination's co-locations allow. Meant for tiny scenarios only.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from common.config.settings import get_settings
from common.errors import CapExceededError
from common.util.app_logger import AppLogger
from logic.model.ip_builder import IpInstance, build_ip, eval_objective
from logic.model.plan import Plan, encode_plan
from logic.network.time_space import TRAVEL, WAITING
from logic.scenario.models import Scenario
from logic.solvers.outcome import SolveOutcome, SolveStats, SolveStatus

logger = AppLogger.get_logger(__name__)


@dataclass(frozen=True)
class BruteCaps:
    paths_per_ev: int
    schedules: int

    @classmethod
    def from_settings(cls) -> "BruteCaps":
        s = get_settings()
        return cls(paths_per_ev=s.brute_path_cap, schedules=s.brute_combo_cap)


def _paths(scenario: Scenario, ev_index: int, cap: int) -> List[Tuple[int, ...]]:
    """All TS routes of one EV as arc tuples, parallel arcs expanded."""
    ts = scenario.ts
    ev = scenario.evs[ev_index]
    source = (scenario.road.index[ev.s_i], 0)
    target = (scenario.road.index[ev.f_i], scenario.T - 1)
    graph = ts.to_digraph()
    parallel: Dict[Tuple[int, int], List[int]] = {}
    for a in range(ts.num_arcs):
        parallel.setdefault((int(ts.tail[a]), int(ts.head[a])), []).append(a)

    out: List[Tuple[int, ...]] = []
    for nodes in nx.all_simple_paths(graph, source, target):
        hops = [parallel[(ts.node(*u), ts.node(*w))] for u, w in zip(nodes, nodes[1:])]
        for route in itertools.product(*hops):
            out.append(tuple(route))
            if len(out) > cap:
                raise CapExceededError(f"EV {ev.id} has more than {cap} routes")
    return out


class _Schedules:
    """Enumerates every Y/Z schedule of a fixed path combination, step by step."""

    def __init__(self, instance: IpInstance, routes: Tuple[Tuple[int, ...], ...], budget: List[int]):
        sc = instance.scenario
        self.instance = instance
        self.sc = sc
        self.ts = sc.ts
        self.routes = routes
        self.budget = budget
        self.parking = set(instance.layout.parking)
        self.meeting = set(instance.layout.meeting)
        self.best: Optional[Tuple[int, Plan]] = None
        ts = self.ts
        # per step: EV -> waiting node, and travel energy charged at the next step
        self.waiting: List[Dict[int, int]] = [dict() for _ in range(sc.T - 1)]
        self.spend = np.zeros((len(sc.evs), sc.T - 1), dtype=np.int64)
        for i, route in enumerate(routes):
            for a in route:
                t = int(ts.t_tail[a])
                if ts.kind[a] == WAITING:
                    self.waiting[t][i] = int(ts.v_tail[a])
                elif ts.kind[a] == TRAVEL:
                    self.spend[i, t] += int(ts.energy[a])

    def candidates(self, t: int) -> List[tuple]:
        here = self.waiting[t]
        out: List[tuple] = []
        for i, v in sorted(here.items()):
            if v in self.parking:
                out.append(("y", i, v))
        for r, g in itertools.permutations(sorted(here), 2):
            if here[r] == here[g] and here[r] in self.meeting:
                out.append(("z", r, g, here[r]))
        return out

    @staticmethod
    def admissible(events: Tuple[tuple, ...]) -> bool:
        gives, receives, pairs = set(), set(), set()
        for e in events:
            if e[0] != "z":
                continue
            _, r, g, _ = e
            if g in gives or r in receives or (g, r) in pairs:
                return False
            gives.add(g)
            receives.add(r)
            pairs.add((r, g))
        return True

    def walk(self, t: int, soc: np.ndarray, chosen: List[tuple]) -> None:
        sc = self.sc
        if t == sc.T - 1:
            self.finish(chosen)
            return
        cands = self.candidates(t)
        for size in range(len(cands) + 1):
            for events in itertools.combinations(cands, size):
                self.budget[0] -= 1
                if self.budget[0] < 0:
                    raise CapExceededError("charging schedule enumeration cap reached")
                if not self.admissible(events):
                    continue
                nxt = soc - self.spend[:, t]
                for e in events:
                    if e[0] == "y":
                        nxt[e[1]] += sc.e_p[sc.road.nodes[e[2]].id]
                    else:
                        rate = sc.evs[e[2]].e_i
                        nxt[e[1]] += rate
                        nxt[e[2]] -= rate
                if (nxt < 0).any() or any(nxt[i] > ev.MAXSOC_i for i, ev in enumerate(sc.evs)):
                    continue
                chosen.append((t, events))
                self.walk(t + 1, nxt, chosen)
                chosen.pop()

    def finish(self, chosen: List[tuple]) -> None:
        g2vc, v2vc = set(), set()
        for t, events in chosen:
            for e in events:
                if e[0] == "y":
                    g2vc.add((e[1], e[2], t))
                else:
                    v2vc.add((e[1], e[2], e[3], t))
        plan = Plan(routes=self.routes, g2vc=frozenset(g2vc), v2vc=frozenset(v2vc))
        x = encode_plan(self.instance, plan)
        value = eval_objective(self.instance, x)
        if self.best is None or value < self.best[0]:
            self.best = (value, plan)


def brute_force(scenario: Scenario, caps: Optional[BruteCaps] = None,
                objective: str = "energy") -> SolveOutcome:
    caps = caps or BruteCaps.from_settings()
    started = time.perf_counter()
    instance = build_ip(scenario, objective=objective)
    per_ev = [_paths(scenario, i, caps.paths_per_ev) for i in range(len(scenario.evs))]
    budget = [caps.schedules]
    best: Optional[Tuple[int, Plan]] = None
    start_soc = np.array([ev.SOC_i for ev in scenario.evs], dtype=np.int64)

    for routes in itertools.product(*per_ev):
        sched = _Schedules(instance, tuple(routes), budget)
        sched.walk(0, start_soc.copy(), [])
        if sched.best is not None and (best is None or sched.best[0] < best[0]):
            best = sched.best

    stats = SolveStats(nodes=caps.schedules - budget[0],
                       wall_ms=(time.perf_counter() - started) * 1000.0, method="brute")
    if best is None:
        logger.info("brute_done", extra={"status": "Infeasible", "combos": stats.nodes})
        return SolveOutcome(status=SolveStatus.INFEASIBLE, stats=stats)
    x = encode_plan(instance, best[1])
    logger.info("brute_done", extra={"status": "Optimal", "objective": best[0], "combos": stats.nodes})
    return SolveOutcome(status=SolveStatus.OPTIMAL, x=x, objective=best[0], stats=stats)
