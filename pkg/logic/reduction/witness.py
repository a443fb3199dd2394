# logic/reduction/witness.py
"""Witness translation between satisfying assignments and reduced-instance solutions."""
from __future__ import annotations

from typing import Dict, List, Set, Tuple, Union

import numpy as np

from common.errors import ReductionError
from logic.model.layout import VariableLayout
from logic.model.plan import Plan, decode_columns
from logic.reduction.cnf import Assignment, satisfies
from logic.reduction.reduction import ReducedInstance, atom_ev, clause_ev
from logic.verify.verifier import verify_semantic


class _Timeline:
    """Per-EV node occupancy, step by step, turned into time-space arcs at the end."""

    def __init__(self, ri: ReducedInstance):
        self.ri = ri
        self.T = ri.scenario.T
        self.where: Dict[str, List[str]] = {}
        self.events: Set[Tuple[str, str, str, int]] = set()     # receiver, giver, node, t

    def start(self, ev: str, node: str) -> None:
        self.where[ev] = [node]

    def stay_until(self, ev: str, t: int) -> None:
        seq = self.where[ev]
        seq.extend([seq[-1]] * (t + 1 - len(seq)))

    def move(self, ev: str, node: str) -> None:
        self.where[ev].append(node)

    def give(self, receiver: str, giver: str, node: str, t: int) -> None:
        self.events.add((receiver, giver, node, t))

    def plan(self) -> Plan:
        sc = self.ri.scenario
        ts, index = sc.ts, sc.road.index
        routes = []
        for ev in sc.evs:
            self.stay_until(ev.id, self.T - 1)
            seq = [index[v] for v in self.where[ev.id]]
            route = []
            for t, (u, w) in enumerate(zip(seq, seq[1:])):
                route.append(int(ts.wait_arc[u, t]) if u == w else ts.pair_arc[(ts.node(u, t), ts.node(w, t + 1))])
            routes.append(tuple(route))
        ev_index = sc.ev_index
        v2vc = frozenset((ev_index[r], ev_index[g], index[v], t) for r, g, v, t in self.events)
        return Plan(routes=tuple(routes), v2vc=v2vc)


def _satisfiers(ri: ReducedInstance, a: Assignment) -> Dict[int, str]:
    """Clause -> the atom EV of its first true literal."""
    out: Dict[int, str] = {}
    for j, clause in enumerate(ri.formula.clauses, start=1):
        lit = next(lit for lit in clause if a[abs(lit)] == (lit > 0))
        o = ri.formula.occurrences(abs(lit)).index((j, lit > 0)) + 1
        out[j] = atom_ev(abs(lit), o)
    return out


def witness_forward(ri: ReducedInstance, a: Assignment) -> Plan:
    """
    Every atom EV drives to the side its atom takes; v_{i,1} then charges the others
    one after another (3 units for a clause's satisfier, 1 otherwise). A satisfier
    detours through sat_j and hands one unit to that clause's EV.
    """
    if len(a) != ri.formula.n or not satisfies(ri.formula, a):
        raise ReductionError(f"assignment ({a}) does not satisfy the formula")
    serving = set(_satisfiers(ri, a).values())
    line = _Timeline(ri)
    for j, (sat, _) in ri.clauses.items():
        line.start(clause_ev(j), sat)

    def leave(ev: str, depart: int) -> None:
        role = ri.roles[ev]
        sat, f = ri.clauses[role[3]]
        line.stay_until(ev, depart)
        if ev not in serving:
            line.move(ev, f)
            return
        line.move(ev, sat)
        line.give(clause_ev(role[3]), ev, sat, depart + 1)
        line.stay_until(ev, depart + 2)
        line.move(ev, f)
        line.stay_until(clause_ev(role[3]), depart + 2)
        line.move(clause_ev(role[3]), f)

    for i in range(1, ri.formula.n + 1):
        evs = ri.atom_evs(i)
        if not evs:
            continue
        s, tru, fal = ri.atoms[i]
        side = tru if a[i] else fal
        for ev in evs:
            line.start(ev, s)
            line.move(ev, side)
        head, clock = evs[0], 1
        for ev in evs[1:]:
            need = 3 if ev in serving else 1
            for t in range(clock, clock + need):
                line.give(ev, head, side, t)
            clock += need
            leave(ev, clock)
        leave(head, clock)
    return line.plan()


def witness_backward(ri: ReducedInstance, solution: Union[np.ndarray, Plan]) -> Assignment:
    """x_i is True iff v_{i,1} leaves s_i towards true_i; atoms without EVs read False."""
    sc = ri.scenario
    report = verify_semantic(sc, solution)
    if not report.accepted:
        raise ReductionError(f"solution does not verify: {report.reason()}")
    plan = solution if isinstance(solution, Plan) else decode_columns(VariableLayout(sc), solution)
    ts = sc.ts
    values = []
    for i in range(1, ri.formula.n + 1):
        if not ri.k[i - 1]:
            values.append(False)
            continue
        route = plan.routes[sc.ev_index[atom_ev(i, 1)]]
        first_move = next(a for a in route if ts.v_tail[a] != ts.v_head[a])
        values.append(sc.road.nodes[ts.v_head[first_move]].id == ri.atoms[i][1])
    assignment = Assignment(values=tuple(values))
    if not satisfies(ri.formula, assignment):
        raise ReductionError(f"extracted assignment ({assignment}) does not satisfy the formula; "
                             "counterexample to the side-of-v_i,1 extraction rule")
    return assignment
