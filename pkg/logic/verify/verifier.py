# logic/verify/verifier.py
"""
Algebraic and semantic checks of a model solution.

The semantic checker never looks at A: it rebuilds routes, SOC series and charging
events from the columns and re-derives every slack. On column vectors both checkers
accept exactly the same inputs.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np

from common.errors import ModelError
from logic.model.ip_builder import IpInstance
from logic.model.layout import SLACK_BLOCKS, VariableLayout
from logic.model.plan import Plan, decode_columns
from logic.network.time_space import TimeSpaceNetwork
from logic.scenario.models import Scenario

POSITION = "position mismatch"
NEGATIVE_SOC = "negative SOC"
ABOVE_MAXSOC = "SOC above MAXSOC"
CONCURRENT = "concurrent-charge violation"
ABSENT = "charging while absent"
WRONG_KIND = "wrong node kind"
SLACK = "slack mismatch"
BOUND = "bound"
STRICT = "strict literal"


@dataclass(frozen=True)
class Finding:
    tag: str
    message: str

    def __str__(self) -> str:
        return f"{self.tag}: {self.message}"


@dataclass
class VerificationReport:
    violated_rows: List[Tuple[int, int, int]] = field(default_factory=list)         # row, lhs, rhs
    bound_violations: List[Tuple[int, int, int, int]] = field(default_factory=list)  # col, value, l, u
    findings: List[Finding] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not (self.violated_rows or self.bound_violations or self.findings)

    def add(self, tag: str, message: str) -> None:
        self.findings.append(Finding(tag, message))

    def tags(self) -> List[str]:
        return [f.tag for f in self.findings]

    def reason(self) -> str:
        if self.accepted:
            return "accepted"
        if self.findings:
            return str(self.findings[0])
        if self.violated_rows:
            row, lhs, rhs = self.violated_rows[0]
            return f"row {row}: {lhs} != {rhs}"
        col, value, lo, hi = self.bound_violations[0]
        return f"column {col}: {value} outside [{lo}, {hi}]"


def _as_vector(x, width: int) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (width,):
        raise ModelError(f"solution length {x.size} != {width} columns")
    if not np.issubdtype(x.dtype, np.integer):
        if not np.all(np.equal(np.mod(x, 1), 0)):
            raise ModelError("solution has fractional entries")
    return x.astype(np.int64)


def verify_algebraic(instance: IpInstance, x) -> VerificationReport:
    """A x = b and l <= x <= u, exactly, in time linear in nnz(A)."""
    x = _as_vector(x, instance.shape[1])
    report = VerificationReport()
    lhs = instance.A @ x
    for row in np.nonzero(lhs != instance.b)[0]:
        report.violated_rows.append((int(row), int(lhs[row]), int(instance.b[row])))
    for col in np.nonzero((x < instance.l) | (x > instance.u))[0]:
        report.bound_violations.append(
            (int(col), int(x[col]), int(instance.l[col]), int(instance.u[col])))
    return report


# ---- semantic ----

def _check_routes(scenario: Scenario, plan: Plan, report: VerificationReport) -> None:
    ts = scenario.ts
    for i, ev in enumerate(scenario.evs):
        used = set(plan.routes[i])
        v, t = scenario.road.index[ev.s_i], 0
        walked = set()
        while t < scenario.T - 1:
            out = [a for a in ts.out_arcs[ts.node(v, t)] if a in used]
            if len(out) != 1:
                report.add(POSITION, f"{ev.id} leaves {scenario.road.nodes[v].id} at t={t} "
                                     f"on {len(out)} arcs")
                break
            walked.add(out[0])
            v, t = int(ts.v_head[out[0]]), int(ts.t_head[out[0]])
        else:
            if v != scenario.road.index[ev.f_i]:
                report.add(POSITION, f"{ev.id} ends at {scenario.road.nodes[v].id}, not {ev.f_i}")
        stray = used - walked
        if stray and t == scenario.T - 1:
            report.add(POSITION, f"{ev.id} uses {len(stray)} arc(s) off its route")


def _check_soc(scenario: Scenario, soc: np.ndarray, report: VerificationReport) -> None:
    for i, ev in enumerate(scenario.evs):
        low = np.nonzero(soc[i] < 0)[0]
        if low.size:
            report.add(NEGATIVE_SOC, f"{ev.id} at t={int(low[0])}: {int(soc[i, low[0]])}")
        high = np.nonzero(soc[i] > ev.MAXSOC_i)[0]
        if high.size:
            report.add(ABOVE_MAXSOC, f"{ev.id} at t={int(high[0])}: {int(soc[i, high[0]])} > {ev.MAXSOC_i}")


def _waiting(ts: TimeSpaceNetwork, plan: Plan, V: int) -> np.ndarray:
    """(V, n_road, T-1) 1 where the EV uses the waiting arc at (v, t)."""
    out = np.zeros((V, ts.n_road, ts.T - 1), dtype=np.int64)
    for i, route in enumerate(plan.routes):
        for a in route:
            if ts.v_tail[a] == ts.v_head[a]:
                out[i, ts.v_tail[a], ts.t_tail[a]] += 1
    return out


def _event_arrays(lay: VariableLayout, plan: Plan):
    V, T1 = lay.V, lay.T - 1
    Y = np.zeros((V, len(lay.parking), T1), dtype=np.int64)
    Z = np.zeros((V, V, len(lay.meeting), T1), dtype=np.int64)    # receiver, giver, m, t
    for i, p, t in plan.g2vc:
        Y[i, lay.parking_slot[p], t] += 1
    for r, g, m, t in plan.v2vc:
        Z[r, g, lay.meeting_slot[m], t] += 1
    return Y, Z


def _implied_slacks(lay: VariableLayout, soc, wait, Y, Z) -> dict:
    V = lay.V
    pw = wait[:, lay.parking, :]                          # (V, P, T1)
    mw = wait[:, lay.meeting, :]                          # (V, M, T1)
    givers = np.array([[lay.giver_of_slot(r, s) for s in range(V - 1)] for r in range(V)],
                      dtype=np.int64).reshape(V, max(V - 1, 0))
    receivers = np.repeat(np.arange(V), max(V - 1, 0)).reshape(V, max(V - 1, 0))
    Zs = Z[receivers, givers]                             # (V, V-1, M, T1) in slot order
    ii = np.array([p[0] for p in lay.pairs], dtype=np.int64)
    jj = np.array([p[1] for p in lay.pairs], dtype=np.int64)
    return {
        "battery": -soc[:, 1:],
        "g2vc": pw - Y,
        "link1": mw[:, None, :, :] - Zs,
        "link2": mw[givers] - Zs,
        "unidir": 1 - Z[ii, jj] - Z[jj, ii],
        "give": -Z.sum(axis=(0, 2)),
        "receive": -Z.sum(axis=(1, 2)),
    }


def _check_events(scenario: Scenario, lay: VariableLayout, implied: dict, report: VerificationReport):
    ids = [ev.id for ev in scenario.evs]
    for name, lo, hi, tag in (("g2vc", 0, 1, ABSENT), ("link1", 0, 1, ABSENT), ("link2", 0, 1, ABSENT),
                              ("unidir", 0, 1, CONCURRENT), ("give", -1, 0, CONCURRENT),
                              ("receive", -1, 0, CONCURRENT)):
        values = implied[name]
        bad = np.argwhere((values < lo) | (values > hi))
        if not bad.size:
            continue
        key = tuple(int(k) for k in bad[0])
        if name in ("give", "receive"):
            what = f"{ids[key[0]]} {name}s {-int(values[key])} times at t={key[1]}"
        elif name == "unidir":
            i, j = lay.pairs[key[0]]
            what = f"{ids[i]} and {ids[j]} charge each other at t={key[2]}"
        else:
            what = f"{name} event {key} without the EV waiting there"
        report.add(tag, f"{what} ({len(bad)} case(s))")


def _check_plan_events(scenario: Scenario, plan: Plan, report: VerificationReport) -> int:
    """Event checks on a Plan without dense arrays; returns the number of distinct transfer slots."""
    ts, road, T1 = scenario.ts, scenario.road, scenario.T - 1
    ids = [ev.id for ev in scenario.evs]
    waits = [
        {(int(ts.v_tail[a]), int(ts.t_tail[a])) for a in route if ts.v_tail[a] == ts.v_head[a]}
        for route in plan.routes
    ]
    for i, p, t in sorted(plan.g2vc):
        if road.nodes[p].kind != "parking":
            report.add(WRONG_KIND, f"G2VC of {ids[i]} at {road.nodes[p].kind} node {road.nodes[p].id}")
        elif not 0 <= t < T1 or (p, t) not in waits[i]:
            report.add(ABSENT, f"G2VC of {ids[i]} at {road.nodes[p].id}, t={t}")
    gives = Counter((g, t) for _, g, _, t in plan.v2vc)
    receives = Counter((r, t) for r, _, _, t in plan.v2vc)
    slots = set()
    for r, g, m, t in sorted(plan.v2vc):
        if road.nodes[m].kind != "meeting" or r == g:
            report.add(WRONG_KIND, f"V2VC {ids[g]}->{ids[r]} at {road.nodes[m].kind} node {road.nodes[m].id}")
            continue
        if not 0 <= t < T1 or (m, t) not in waits[r] or (m, t) not in waits[g]:
            report.add(ABSENT, f"V2VC {ids[g]}->{ids[r]} at {road.nodes[m].id}, t={t}")
        if (g, r, m, t) in plan.v2vc:
            report.add(CONCURRENT, f"{ids[g]} and {ids[r]} charge each other at t={t}")
        slots.add((min(r, g), max(r, g), m, t))
    for (i, t), count in sorted(gives.items()):
        if count > 1:
            report.add(CONCURRENT, f"{ids[i]} gives {count} times at t={t}")
    for (i, t), count in sorted(receives.items()):
        if count > 1:
            report.add(CONCURRENT, f"{ids[i]} receives {count} times at t={t}")
    return len(slots)


def verify_semantic(scenario: Scenario, solution: Union[np.ndarray, Plan, list],
                    strict: bool = False) -> VerificationReport:
    """
    Re-simulates `solution` (a column vector or a Plan): one route per EV from
    (s_i, 0) to (f_i, T-1), SOC within [0, MAXSOC] at every step, charging only where
    the EVs wait at a node of the right kind, one give and one receive per EV and step,
    and, for column vectors, slacks equal to the values the simulation implies.
    `strict` also flags EV pairs and steps with no transfer in either direction.
    """
    if scenario.T < 2:
        raise ModelError("solutions need T >= 2")
    report = VerificationReport()
    V, M, T1 = len(scenario.evs), len(scenario.road.meeting_points), scenario.T - 1
    slots_total = V * (V - 1) // 2 * M * T1

    if isinstance(solution, Plan):
        plan = solution
        if len(plan.routes) != V:
            raise ModelError(f"plan has {len(plan.routes)} routes for {V} EVs")
        _check_routes(scenario, plan, report)
        _check_soc(scenario, plan.soc_series(scenario), report)
        busy = _check_plan_events(scenario, plan, report)
        if strict and slots_total > busy:
            report.add(STRICT, f"{slots_total - busy} pair/meeting point/step entries with no transfer either way")
        return report

    lay = VariableLayout(scenario)
    x = _as_vector(solution, lay.num_cols)
    binary = x[:lay.binary_stop]
    for col in np.nonzero((binary < 0) | (binary > 1))[0]:
        report.add(BOUND, f"{lay.column_name(int(col))} = {int(binary[col])}")
    if report.findings:
        return report
    plan = decode_columns(lay, x)

    _check_routes(scenario, plan, report)
    soc = plan.soc_series(scenario)
    _check_soc(scenario, soc, report)
    Y, Z = _event_arrays(lay, plan)
    implied = _implied_slacks(lay, soc, _waiting(scenario.ts, plan, lay.V), Y, Z)
    _check_events(scenario, lay, implied, report)

    stored = x[lay.binary_stop:]
    expected = np.concatenate([np.asarray(implied[name]).ravel() for name in SLACK_BLOCKS])
    for name in SLACK_BLOCKS:
        blk = lay.columns[name]
        lo, hi = blk.offset - lay.binary_stop, blk.stop - lay.binary_stop
        wrong = np.nonzero(stored[lo:hi] != expected[lo:hi])[0]
        if wrong.size:
            col = blk.offset + int(wrong[0])
            report.add(SLACK, f"{lay.column_name(col)} = {int(x[col])}, expected "
                              f"{int(expected[lo + wrong[0]])} ({wrong.size} column(s))")

    if strict and slots_total:
        idle = int(np.count_nonzero(implied["unidir"] == 1))
        if idle:
            report.add(STRICT, f"{idle} pair/meeting point/step entries with no transfer either way")
    return report
