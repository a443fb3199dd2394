# logic/solvers/branch_and_bound.py
"""
Depth-first branch-and-bound over the model's binary columns.

The search walks the time steps in order. At each step it branches on the arc every
EV takes (EVs by id, arcs by column index), then on the Y/Z events the chosen
waiting arcs permit. Slack columns follow from the branch and are never branched on.
Propagation happens on the semantic state (positions and SOCs), which is exactly
what the battery, link and simultaneity rows encode.
"""
from __future__ import annotations

import itertools
import time
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from common.config.settings import get_settings
from common.util.app_logger import AppLogger
from logic.model.ip_builder import IpInstance, eval_objective
from logic.model.plan import Plan, encode_plan
from logic.network.labels import min_energy_backward
from logic.network.time_space import TRAVEL, WAITING
from logic.solvers.outcome import SolveOutcome, SolveStats, SolveStatus

logger = AppLogger.get_logger(__name__)

Position = Tuple[int, int]          # (road node, step at which the EV is next free)
ChargeSet = Tuple[List[Tuple[int, int]], List[Tuple[int, int, int]]]


def give_maps(members: Sequence[int]) -> List[Tuple[Tuple[int, int], ...]]:
    """
    Every set of (receiver, giver) transfers among co-located EVs in which each EV
    gives at most once, receives at most once, and no pair transfers both ways.
    """
    out: List[Tuple[Tuple[int, int], ...]] = []
    receivers: set = set()
    pairs: List[Tuple[int, int]] = []

    def rec(k: int) -> None:
        if k == len(members):
            out.append(tuple(pairs))
            return
        giver = members[k]
        rec(k + 1)
        for receiver in members:
            if receiver == giver or receiver in receivers or (giver, receiver) in pairs:
                continue
            pairs.append((receiver, giver))
            receivers.add(receiver)
            rec(k + 1)
            pairs.pop()
            receivers.discard(receiver)

    rec(0)
    return out


class _Search:
    def __init__(self, instance: IpInstance, budget: int):
        sc = instance.scenario
        self.instance = instance
        self.ts = sc.ts
        self.lay = instance.layout
        self.V, self.T = len(sc.evs), sc.T
        self.c = instance.objective.c
        self.budget = budget
        self.back = np.stack([min_energy_backward(self.ts, ev.f_i).values for ev in sc.evs]) \
            if sc.evs else np.zeros((0, self.ts.n_road, self.T))
        self.maxsoc = [ev.MAXSOC_i for ev in sc.evs]
        self.rate = [ev.e_i for ev in sc.evs]
        self.meeting = set(self.lay.meeting)
        self.rate_at = {p: sc.e_p[sc.road.nodes[p].id] for p in self.lay.parking}
        self.use_labels = instance.objective.tag == "energy"
        self.nonneg = bool((self.c >= 0).all())
        # no grid energy enters the fleet; transfers only move it around
        self.conserving = not self.lay.parking
        self.isolated = not self.lay.parking and not self.lay.meeting

        self.nodes = 0
        self.exhausted = False
        self.memo: Dict[tuple, int] = {}
        self.best_cost: Optional[int] = None
        self.best_plan: Optional[Plan] = None
        self.routes: List[List[int]] = [[] for _ in range(self.V)]
        self.g2vc: List[Tuple[int, int, int]] = []
        self.v2vc: List[Tuple[int, int, int, int]] = []

    # ---- branching ----
    def expand(self, t: int, pos: Tuple[Position, ...], soc: Tuple[int, ...], cost: int) -> None:
        ts = self.ts
        free = [i for i in range(self.V) if pos[i][1] == t]
        options: List[List[int]] = []
        for i in free:
            opts = []
            for a in ts.out_arcs[ts.node(pos[i][0], t)]:
                if not np.isfinite(self.back[i, ts.v_head[a], ts.t_head[a]]):
                    continue
                if ts.kind[a] == TRAVEL and soc[i] < ts.energy[a]:
                    continue
                opts.append(a)
            if not opts:
                return
            options.append(opts)
        for arcs in itertools.product(*options):
            moved = dict(zip(free, arcs))
            for charges in self.charges(moved):
                self.advance(t, pos, soc, cost, moved, charges)
                if self.exhausted:
                    return

    def charges(self, moved: Dict[int, int]) -> Iterator[ChargeSet]:
        ts = self.ts
        waiting = {i: int(ts.v_tail[a]) for i, a in moved.items() if ts.kind[a] == WAITING}
        parked = [i for i, v in waiting.items() if v in self.rate_at]
        groups: Dict[int, List[int]] = {}
        for i, v in waiting.items():
            if v in self.meeting:
                groups.setdefault(v, []).append(i)
        group_nodes = sorted(groups)
        group_opts = [give_maps(groups[m]) for m in group_nodes]
        for ys in itertools.product((False, True), repeat=len(parked)):
            y_events = [(i, waiting[i]) for i, on in zip(parked, ys) if on]
            for zs in itertools.product(*group_opts):
                z_events = [(r, g, m) for m, pairs in zip(group_nodes, zs) for r, g in pairs]
                yield y_events, z_events

    def advance(self, t, pos, soc, cost, moved: Dict[int, int], charges: ChargeSet) -> None:
        ts, lay, c = self.ts, self.lay, self.c
        y_events, z_events = charges
        new_pos = list(pos)
        new_soc = list(soc)
        step_cost = cost
        for i, a in moved.items():
            new_pos[i] = (int(ts.v_head[a]), int(ts.t_head[a]))
            step_cost += int(c[lay.x(i, a)])
            if ts.kind[a] == TRAVEL:
                new_soc[i] -= int(ts.energy[a])
        for i, p in y_events:
            new_soc[i] += self.rate_at[p]
            step_cost += int(c[lay.y(i, p, t)])
        for r, g, m in z_events:
            new_soc[r] += self.rate[g]
            new_soc[g] -= self.rate[g]
            step_cost += int(c[lay.z(r, g, m, t)])
        if any(s < 0 or s > self.maxsoc[i] for i, s in enumerate(new_soc)):
            return

        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return

        need = [float(self.back[i, v, tf]) for i, (v, tf) in enumerate(new_pos)]
        remaining = sum(need)
        if self.best_cost is not None:
            if self.use_labels and step_cost + remaining >= self.best_cost:
                return
            if not self.use_labels and self.nonneg and step_cost >= self.best_cost:
                return
        if self.conserving and sum(new_soc) < remaining:
            return
        if self.isolated and any(s < n for s, n in zip(new_soc, need)):
            return

        key = (t + 1, tuple(new_pos), tuple(new_soc))
        seen = self.memo.get(key)
        if seen is not None and seen <= step_cost:
            return
        self.memo[key] = step_cost

        for i, a in moved.items():
            self.routes[i].append(a)
        self.g2vc.extend((i, p, t) for i, p in y_events)
        self.v2vc.extend((r, g, m, t) for r, g, m in z_events)
        if t + 1 == self.T - 1:
            self.record(step_cost)
        else:
            self.expand(t + 1, tuple(new_pos), tuple(new_soc), step_cost)
        for i in moved:
            self.routes[i].pop()
        del self.g2vc[len(self.g2vc) - len(y_events):]
        del self.v2vc[len(self.v2vc) - len(z_events):]

    def record(self, cost: int) -> None:
        if self.best_cost is not None and cost >= self.best_cost:
            return
        self.best_cost = cost
        self.best_plan = Plan(
            routes=tuple(tuple(r) for r in self.routes),
            g2vc=frozenset(self.g2vc),
            v2vc=frozenset(self.v2vc),
        )
        logger.debug("bb_incumbent", extra={"objective": cost, "nodes": self.nodes})

    def run(self) -> Optional[Plan]:
        sc = self.instance.scenario
        start = [(sc.road.index[ev.s_i], 0) for ev in sc.evs]
        if any(not np.isfinite(self.back[i, v, 0]) for i, (v, _) in enumerate(start)):
            return None
        self.expand(0, tuple(start), tuple(ev.SOC_i for ev in sc.evs), 0)
        return self.best_plan


def solve_bb(instance: IpInstance, budget: Optional[int] = None) -> SolveOutcome:
    budget = budget or get_settings().budget_nodes
    started = time.perf_counter()
    search = _Search(instance, budget)
    logger.info("bb_start", extra={"evs": search.V, "T": search.T, "budget": budget})
    plan = search.run()
    stats = SolveStats(nodes=search.nodes, wall_ms=(time.perf_counter() - started) * 1000.0,
                       method="bb")

    if search.exhausted:
        status = SolveStatus.BUDGET_EXCEEDED
    elif plan is None:
        status = SolveStatus.INFEASIBLE
    else:
        status = SolveStatus.OPTIMAL
    x = objective = None
    if plan is not None:
        x = encode_plan(instance, plan)
        objective = eval_objective(instance, x)
    logger.info("bb_done", extra={"status": status.value, "objective": objective,
                                  "nodes": stats.nodes, "ms": round(stats.wall_ms, 1)})
    return SolveOutcome(status=status, x=x, objective=objective, stats=stats)
