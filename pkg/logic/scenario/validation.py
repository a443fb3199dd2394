# logic/scenario/validation.py
from __future__ import annotations

from typing import List

from logic.scenario.models import Scenario, Violation


def validate(scenario: Scenario) -> List[Violation]:
    """Every broken invariant, one Violation each. Empty list means valid."""
    out: List[Violation] = []
    road = scenario.road

    seen = set()
    for node in road.nodes:
        if node.id in seen:
            out.append(Violation(field="nodes", rule="node ids must be unique", subject=node.id))
        seen.add(node.id)

    for k, arc in enumerate(road.arcs):
        label = f"{arc.tail}->{arc.head}#{k}"
        if arc.tail not in seen or arc.head not in seen:
            out.append(Violation(field="arcs", rule="arc endpoints must exist", subject=label))
        if arc.tail == arc.head:
            out.append(Violation(field="arcs", rule="self-loops are not allowed", subject=label))
        if arc.e_a < 0:
            out.append(Violation(field="arcs.e_a", rule="e_a >= 0", subject=label))
        if arc.d_a < 1:
            out.append(Violation(field="arcs.d_a", rule="d_a >= 1", subject=label))

    ev_ids = set()
    for ev in scenario.evs:
        if ev.id in ev_ids:
            out.append(Violation(field="evs", rule="EV ids must be unique", subject=ev.id))
        ev_ids.add(ev.id)
        if ev.s_i not in seen:
            out.append(Violation(field="evs.s_i", rule="start must be a road node", subject=ev.id))
        if ev.f_i not in seen:
            out.append(Violation(field="evs.f_i", rule="destination must be a road node", subject=ev.id))
        if ev.SOC_i < 0:
            out.append(Violation(field="evs.SOC_i", rule="SOC_i >= 0", subject=ev.id))
        if ev.SOC_i > ev.MAXSOC_i:
            out.append(Violation(field="evs.SOC_i", rule="SOC_i <= MAXSOC_i", subject=ev.id))
        if ev.e_i < 0:
            out.append(Violation(field="evs.e_i", rule="e_i >= 0", subject=ev.id))

    # node kinds are single-valued, so P and M can only overlap through e_p
    for node_id, rate in scenario.e_p.items():
        if node_id not in seen:
            out.append(Violation(field="e_p", rule="e_p key must be a road node", subject=node_id))
            continue
        if road.kind_of(node_id) == "meeting":
            out.append(Violation(field="e_p", rule="P ∩ M = ∅: meeting point has a parking rate",
                                 subject=node_id))
        elif road.kind_of(node_id) != "parking":
            out.append(Violation(field="e_p", rule="e_p given for a non-parking node", subject=node_id))
        if rate < 0:
            out.append(Violation(field="e_p", rule="e_p >= 0", subject=node_id))
    for node_id in road.parking_stations:
        if node_id not in scenario.e_p:
            out.append(Violation(field="e_p", rule="every parking node needs an e_p", subject=node_id))

    if scenario.T < 1:
        out.append(Violation(field="T", rule="T >= 1"))
    elif scenario.T < 2 and any(ev.s_i != ev.f_i for ev in scenario.evs):
        out.append(Violation(field="T", rule="T >= 2 whenever an EV must move"))
    return out
