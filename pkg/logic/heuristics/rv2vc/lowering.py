# logic/heuristics/rv2vc/lowering.py
from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np

from common.errors import LoweringError
from logic.heuristics.rv2vc.selection import ActionSelection
from logic.model.ip_builder import IpInstance, build_ip
from logic.model.plan import Plan, encode_plan
from logic.network.labels import min_energy_backward, min_energy_forward
from logic.scenario.models import Ev, Scenario
from logic.verify.verifier import verify_algebraic, verify_semantic


def _route_via(scenario: Scenario, ev: Ev, node: str, t0: int, t1: int) -> Tuple[int, ...]:
    """Cheapest route to (node, t0), wait until t1, cheapest route on to (f_i, T-1)."""
    ts = scenario.ts
    v = scenario.road.index[node]
    head = min_energy_forward(ts, ev.s_i).arcs_to(v, t0)
    stay = [int(ts.wait_arc[v, t]) for t in range(t0, t1)]
    tail = min_energy_backward(ts, ev.f_i).arcs_to(v, t1)
    return tuple(head + stay + tail)


def _direct_route(scenario: Scenario, ev: Ev) -> Tuple[int, ...]:
    ts = scenario.ts
    return tuple(min_energy_forward(ts, ev.s_i).arcs_to(scenario.road.index[ev.f_i], scenario.T - 1))


def selection_plan(scenario: Scenario, selection: ActionSelection) -> Plan:
    routes: List[Optional[Tuple[int, ...]]] = [None] * len(scenario.evs)
    g2vc, v2vc = set(), set()
    index = scenario.ev_index
    for edge in selection.edges:
        if edge.kind == "direct":
            routes[index[edge.i]] = _direct_route(scenario, scenario.ev(edge.i))
            continue
        t1 = edge.t0 + edge.k
        if edge.kind == "pair":
            h, n = scenario.ev(edge.i), scenario.ev(edge.j)
            routes[index[h.id]] = _route_via(scenario, h, edge.node, edge.t0, t1)
            routes[index[n.id]] = _route_via(scenario, n, edge.node, edge.t0, t1)
            m = scenario.road.index[edge.node]
            v2vc.update((index[n.id], index[h.id], m, t) for t in range(edge.t0, t1))
        else:
            n = scenario.ev(edge.i)
            routes[index[n.id]] = _route_via(scenario, n, edge.node, edge.t0, t1)
            p = scenario.road.index[edge.node]
            g2vc.update((index[n.id], p, t) for t in range(edge.t0, t1))
    missing = [scenario.evs[k].id for k, r in enumerate(routes) if r is None]
    if missing:
        raise LoweringError(f"selection leaves {missing} without an action")
    return Plan(routes=tuple(routes), g2vc=frozenset(g2vc), v2vc=frozenset(v2vc))


def lower_to_plan(scenario: Scenario, selection: ActionSelection) -> Plan:
    """Routes and events realizing `selection`, checked by re-simulation."""
    if not selection.feasible:
        raise LoweringError("cannot lower an infeasible selection")
    try:
        plan = selection_plan(scenario, selection)
    except ValueError as ex:
        raise LoweringError(f"edge schedule is not realizable: {ex}") from ex
    report = verify_semantic(scenario, plan)
    if not report.accepted:
        raise LoweringError(f"lowered plan fails verification: {report.reason()}")
    expected = sum(e.cost for e in selection.edges) + selection.grid_energy
    if plan.energy(scenario) != expected:
        raise LoweringError(f"lowered energy {plan.energy(scenario)} != priced {expected}")
    return plan


def lower_to_solution(scenario: Scenario, selection: ActionSelection,
                      instance: Optional[IpInstance] = None) -> np.ndarray:
    """Column vector realizing `selection`; it must pass both verifiers."""
    plan = lower_to_plan(scenario, selection)
    instance = instance or build_ip(scenario)
    x = encode_plan(instance, plan)
    algebraic = verify_algebraic(instance, x)
    semantic = verify_semantic(scenario, x)
    if not (algebraic.accepted and semantic.accepted):
        reason = semantic.reason() if not semantic.accepted else algebraic.reason()
        raise LoweringError(f"lowered solution fails verification: {reason}")
    return x
