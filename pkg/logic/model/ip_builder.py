# logic/model/ip_builder.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from common.errors import ModelError
from common.util.app_logger import AppLogger
from logic.model.layout import VariableLayout
from logic.network.time_space import TRAVEL
from logic.scenario.models import Scenario, violations_text
from logic.scenario.validation import validate

logger = AppLogger.get_logger(__name__)


@dataclass(frozen=True)
class ObjectiveSpec:
    c: np.ndarray
    tag: str


@dataclass(frozen=True, eq=False)
class IpInstance:
    """min c.x  s.t.  A x = b,  l <= x <= u,  x integral."""

    A: csr_matrix
    b: np.ndarray
    l: np.ndarray
    u: np.ndarray
    objective: ObjectiveSpec
    layout: VariableLayout
    scenario: Scenario

    @property
    def shape(self) -> Tuple[int, int]:
        return self.A.shape

    def triplets(self) -> List[Tuple[int, int, int]]:
        coo = self.A.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k]), int(coo.data[k])) for k in order]

    def is_integer_column(self, col: int) -> bool:
        return col < self.layout.binary_stop


# ---- objectives ----

ObjectiveFactory = Callable[[Scenario, VariableLayout], np.ndarray]
OBJECTIVES: Dict[str, ObjectiveFactory] = {}


def register_objective(tag: str):
    """Adds a linear objective under `tag` (the CLI's --objective value)."""
    def wrap(fn: ObjectiveFactory) -> ObjectiveFactory:
        OBJECTIVES[tag] = fn
        return fn
    return wrap


@register_objective("energy")
def energy_objective(scenario: Scenario, layout: VariableLayout) -> np.ndarray:
    """Traversal energy plus grid energy drawn; transfers between EVs cost nothing."""
    ts = scenario.ts
    c = np.zeros(layout.num_cols, dtype=np.int64)
    travel = np.where(ts.kind == TRAVEL, ts.energy, 0)
    xb = layout.columns["X"]
    c[xb.offset:xb.stop] = np.tile(travel, layout.V)
    yb = layout.columns["Y"]
    if yb.size:
        rates = np.array([scenario.e_p[scenario.road.nodes[p].id] for p in layout.parking])
        c[yb.offset:yb.stop] = np.broadcast_to(rates[None, :, None], yb.shape).ravel()
    return c


@register_objective("feasibility")
def feasibility_objective(scenario: Scenario, layout: VariableLayout) -> np.ndarray:
    return np.zeros(layout.num_cols, dtype=np.int64)


# ---- dimensions ----

def predicted_dimensions(scenario: Scenario) -> Tuple[int, int]:
    road, T = scenario.road, scenario.T
    V = len(scenario.evs)
    P, M = len(road.parking_stations), len(road.meeting_points)
    N = len(road.nodes) * T
    A = len(road.nodes) * max(T - 1, 0) + sum(max(0, T - arc.d_a) for arc in road.directed_arcs)
    T1 = max(T - 1, 0)
    # V(V-1) is even, so the halves are exact
    rows = V * N + V * T1 * (3 + P) + 5 * V * (V - 1) * M * T1 // 2
    cols = V * A + V * T1 * (3 + 2 * P) + 7 * V * (V - 1) * M * T1 // 2
    return rows, cols


# ---- builder ----

class _Triplets:
    def __init__(self):
        self.rows: List[np.ndarray] = []
        self.cols: List[np.ndarray] = []
        self.vals: List[np.ndarray] = []

    def add(self, rows, cols, vals) -> None:
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.broadcast_to(np.asarray(vals, dtype=np.int64), rows.shape).ravel()
        keep = vals != 0
        self.rows.append(rows[keep])
        self.cols.append(cols[keep])
        self.vals.append(vals[keep])

    def matrix(self, shape) -> csr_matrix:
        if not self.rows:
            return csr_matrix(shape, dtype=np.int64)
        return coo_matrix(
            (np.concatenate(self.vals), (np.concatenate(self.rows), np.concatenate(self.cols))),
            shape=shape,
        ).tocsr()


def build_ip(scenario: Scenario, objective: str = "energy") -> IpInstance:
    problems = validate(scenario)
    if problems:
        raise ModelError(f"invalid scenario: {violations_text(problems)}")
    if scenario.T < 2:
        raise ModelError(f"the model needs T >= 2, got T={scenario.T}")
    if objective not in OBJECTIVES:
        raise ModelError(f"unknown objective {objective!r}; known: {sorted(OBJECTIVES)}")

    ts = scenario.ts
    lay = VariableLayout(scenario)
    V, T, T1 = lay.V, scenario.T, scenario.T - 1
    n_rows, n_cols = lay.num_rows, lay.num_cols
    trip = _Triplets()
    b = np.zeros(n_rows, dtype=np.int64)
    l = np.zeros(n_cols, dtype=np.int64)
    u = np.zeros(n_cols, dtype=np.int64)
    u[:lay.binary_stop] = 1

    arcs = np.arange(ts.num_arcs)
    path = lay.rows["path"]
    bat_rows = lay.rows["battery"]
    rates = np.array([ev.e_i for ev in scenario.evs], dtype=np.int64)

    # path rows: +1 entering, -1 leaving; supply at (s_i, 0), demand at (f_i, T-1)
    for i, ev in enumerate(scenario.evs):
        cols = lay.columns["X"].offset + i * ts.num_arcs + arcs
        trip.add(path.offset + i * ts.num_nodes + ts.head, cols, 1)
        trip.add(path.offset + i * ts.num_nodes + ts.tail, cols, -1)
        b[path.index(i, ts.node_of(ev.s_i, 0))] -= 1
        b[path.index(i, ts.node_of(ev.f_i, T - 1))] += 1

    # battery rows t = 1..T-1 hold every arc whose tail time is < t
    steps = np.arange(1, T)
    travel = arcs[ts.kind == TRAVEL]
    if travel.size:
        later = steps[None, :] > ts.t_tail[travel][:, None]          # (arcs, steps)
        a_idx, s_idx = np.nonzero(later)
        for i in range(V):
            trip.add(bat_rows.offset + i * T1 + s_idx,
                     lay.columns["X"].offset + i * ts.num_arcs + travel[a_idx],
                     -ts.energy[travel[a_idx]])
    events = np.arange(T1)
    ev_idx, st_idx = np.nonzero(steps[None, :] > events[:, None])     # (event t, row step)

    # G2VC: battery gain and Y <= X on the waiting arc at the station
    yb, gb = lay.columns["Y"], lay.rows["g2vc"]
    for i in range(V):
        for pk, p in enumerate(lay.parking):
            rate = scenario.e_p[scenario.road.nodes[p].id]
            ycols = yb.offset + (i * len(lay.parking) + pk) * T1 + events
            trip.add(bat_rows.offset + i * T1 + st_idx, ycols[ev_idx], rate)
            grow = gb.offset + (i * len(lay.parking) + pk) * T1 + events
            trip.add(grow, ycols, 1)
            trip.add(grow, lay.columns["X"].offset + i * ts.num_arcs + ts.wait_arc[p, :T1], -1)

    # V2VC: receiver gains and giver loses the giver's rate; links to both waiting arcs
    zb, l1, l2 = lay.columns["Z"], lay.rows["link1"], lay.rows["link2"]
    for r in range(V):
        for g in range(V):
            if g == r:
                continue
            for mk, m in enumerate(lay.meeting):
                base = ((r * (V - 1) + lay.giver_slot(r, g)) * len(lay.meeting) + mk) * T1
                zcols = zb.offset + base + events
                trip.add(bat_rows.offset + r * T1 + st_idx, zcols[ev_idx], rates[g])
                trip.add(bat_rows.offset + g * T1 + st_idx, zcols[ev_idx], -rates[g])
                wait = ts.wait_arc[m, :T1]
                trip.add(l1.offset + base + events, zcols, 1)
                trip.add(l1.offset + base + events, lay.columns["X"].offset + r * ts.num_arcs + wait, -1)
                trip.add(l2.offset + base + events, zcols, 1)
                trip.add(l2.offset + base + events, lay.columns["X"].offset + g * ts.num_arcs + wait, -1)
                trip.add(lay.rows["give"].offset + g * T1 + events, zcols, 1)
                trip.add(lay.rows["receive"].offset + r * T1 + events, zcols, 1)

    ub = lay.rows["unidir"]
    for k, (i, j) in enumerate(lay.pairs):
        for mk, m in enumerate(lay.meeting):
            rows = ub.offset + (k * len(lay.meeting) + mk) * T1 + events
            trip.add(rows, np.array([lay.z(i, j, m, t) for t in events], dtype=np.int64), 1)
            trip.add(rows, np.array([lay.z(j, i, m, t) for t in events], dtype=np.int64), 1)
            b[rows] = 1

    for i, ev in enumerate(scenario.evs):
        b[bat_rows.offset + i * T1: bat_rows.offset + (i + 1) * T1] = -ev.SOC_i

    # one +1 slack per non-path row
    slack_rows = np.arange(lay.path_rows, n_rows)
    slack_cols = lay.binary_stop + (slack_rows - lay.path_rows)
    trip.add(slack_rows, slack_cols, 1)
    bat_cols = lay.columns["battery"]
    for i, ev in enumerate(scenario.evs):
        l[bat_cols.offset + i * T1: bat_cols.offset + (i + 1) * T1] = -ev.MAXSOC_i
    for name in ("g2vc", "link1", "link2", "unidir"):
        blk = lay.columns[name]
        u[blk.offset:blk.stop] = 1
    for name in ("give", "receive"):
        blk = lay.columns[name]
        l[blk.offset:blk.stop] = -1

    A = trip.matrix((n_rows, n_cols))
    c = OBJECTIVES[objective](scenario, lay)
    logger.info("ip_built", extra={"rows": n_rows, "cols": n_cols, "nnz": int(A.nnz),
                                   "objective": objective})
    return IpInstance(A=A, b=b, l=l, u=u, objective=ObjectiveSpec(c=c, tag=objective),
                      layout=lay, scenario=scenario)


def eval_objective(instance: IpInstance, x) -> int:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (instance.shape[1],):
        raise ModelError(f"solution length {x.shape[0] if x.ndim else 0} != {instance.shape[1]} columns")
    return int(instance.objective.c @ x)
