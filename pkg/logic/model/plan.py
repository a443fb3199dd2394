# logic/model/plan.py
"""Semantic view of a model solution: routes plus charging events."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

import numpy as np

from common.errors import ModelError
from logic.model.ip_builder import IpInstance
from logic.model.layout import VariableLayout
from logic.network.time_space import TRAVEL
from logic.scenario.models import Scenario

G2vcEvent = Tuple[int, int, int]            # (ev, parking road node, t)
V2vcEvent = Tuple[int, int, int, int]       # (receiver, giver, meeting road node, t)


@dataclass(frozen=True)
class Plan:
    routes: Tuple[Tuple[int, ...], ...]                 # per EV, TS arc indices in time order
    g2vc: FrozenSet[G2vcEvent] = field(default_factory=frozenset)
    v2vc: FrozenSet[V2vcEvent] = field(default_factory=frozenset)

    def soc_series(self, scenario: Scenario) -> np.ndarray:
        """(V, T) SOC per EV and step; a change at event time t shows from t + 1 on."""
        ts = scenario.ts
        V, T = len(scenario.evs), scenario.T
        delta = np.zeros((V, T + 1), dtype=np.int64)
        for i, route in enumerate(self.routes):
            for a in route:
                if ts.kind[a] == TRAVEL:
                    delta[i, ts.t_tail[a] + 1] -= ts.energy[a]
        road = scenario.road
        for i, p, t in self.g2vc:
            delta[i, t + 1] += scenario.e_p[road.nodes[p].id]
        for r, g, _, t in self.v2vc:
            rate = scenario.evs[g].e_i
            delta[r, t + 1] += rate
            delta[g, t + 1] -= rate
        start = np.array([ev.SOC_i for ev in scenario.evs], dtype=np.int64)
        return start[:, None] + np.cumsum(delta[:, :T], axis=1)

    def energy(self, scenario: Scenario) -> int:
        """Traversal energy plus grid energy drawn, the "energy" objective."""
        ts = scenario.ts
        travel = sum(int(ts.energy[a]) for route in self.routes for a in route if ts.kind[a] == TRAVEL)
        grid = sum(scenario.e_p[scenario.road.nodes[p].id] for _, p, _ in self.g2vc)
        return travel + grid

    def to_dict(self, scenario: Scenario) -> dict:
        """Id-based form stored in solution files."""
        ts, road = scenario.ts, scenario.road
        ids = [ev.id for ev in scenario.evs]

        def step(a: int) -> list:
            return [road.nodes[ts.v_tail[a]].id, int(ts.t_tail[a]),
                    road.nodes[ts.v_head[a]].id, int(ts.t_head[a])]

        return {
            "routes": {ids[i]: [step(a) for a in route] for i, route in enumerate(self.routes)},
            "g2vc": [[ids[i], road.nodes[p].id, t] for i, p, t in sorted(self.g2vc)],
            "v2vc": [[ids[r], ids[g], road.nodes[m].id, t] for r, g, m, t in sorted(self.v2vc)],
        }


def encode_plan(instance: IpInstance, plan: Plan) -> np.ndarray:
    """Full column vector for `plan`; each slack closes its row exactly."""
    lay = instance.layout
    if len(plan.routes) != lay.V:
        raise ModelError(f"plan has {len(plan.routes)} routes for {lay.V} EVs")
    x = np.zeros(lay.num_cols, dtype=np.int64)
    try:
        for i, route in enumerate(plan.routes):
            for a in route:
                x[lay.x(i, a)] = 1
        for i, p, t in plan.g2vc:
            x[lay.y(i, p, t)] = 1
        for r, g, m, t in plan.v2vc:
            x[lay.z(r, g, m, t)] = 1
    except (KeyError, ValueError, IndexError) as ex:
        raise ModelError(f"plan does not fit the layout: {ex}") from ex
    residual = instance.b - instance.A @ x
    x[lay.binary_stop:] = residual[lay.path_rows:]
    return x


def decode_columns(lay: VariableLayout, x) -> Plan:
    """Reads the X/Y/Z blocks of `x`; slack values are ignored."""
    x = np.asarray(x)
    if x.shape != (lay.num_cols,):
        raise ModelError(f"solution length {x.size} != {lay.num_cols} columns")
    xb, yb, zb = lay.columns["X"], lay.columns["Y"], lay.columns["Z"]
    routes: List[List[int]] = [[] for _ in range(lay.V)]
    for col in np.nonzero(x[xb.offset:xb.stop])[0]:
        i, a = xb.key(xb.offset + int(col))
        routes[i].append(a)
    g2vc = set()
    for col in np.nonzero(x[yb.offset:yb.stop])[0]:
        i, pk, t = yb.key(yb.offset + int(col))
        g2vc.add((i, lay.parking[pk], t))
    v2vc = set()
    for col in np.nonzero(x[zb.offset:zb.stop])[0]:
        r, slot, mk, t = zb.key(zb.offset + int(col))
        v2vc.add((r, lay.giver_of_slot(r, slot), lay.meeting[mk], t))
    return Plan(routes=tuple(tuple(sorted(r)) for r in routes),
                g2vc=frozenset(g2vc), v2vc=frozenset(v2vc))


def decode_solution(instance: IpInstance, x) -> Plan:
    return decode_columns(instance.layout, x)
