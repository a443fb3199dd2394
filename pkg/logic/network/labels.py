# logic/network/labels.py
"""Minimum traversal-energy labels over the time-space network."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import dijkstra

from logic.network.road_network import RoadNetwork
from logic.network.time_space import TimeSpaceNetwork, expand_time_space

Direction = Literal["forward", "backward"]


@dataclass(frozen=True, eq=False)
class LabelTable:
    """
    values[v, t]: minimum energy from the origin state (forward) or to the sink state
    (backward); np.inf marks unreachable states.
    """

    ts: TimeSpaceNetwork
    direction: Direction
    anchor: int                      # TS node index of the origin or sink
    values: np.ndarray               # (n_road, T) float
    predecessors: np.ndarray         # (n_road * T,) scipy predecessor array

    def at(self, node_id: str, t: int) -> float:
        return float(self.values[self.ts.road.index[node_id], t])

    def reachable(self, node_id: str, t: int) -> bool:
        return bool(np.isfinite(self.at(node_id, t)))

    def arcs_to(self, v: int, t: int) -> List[int]:
        """
        Arc indices of a minimum-energy path between the anchor and (v, t), in time
        order. Empty when (v, t) is the anchor.
        """
        ts = self.ts
        target = ts.node(v, t)
        if not np.isfinite(self.values[v, t]):
            raise ValueError(f"state ({v}, {t}) is unreachable")
        chain = [target]
        while chain[-1] != self.anchor:
            chain.append(int(self.predecessors[chain[-1]]))
        if self.direction == "forward":
            chain.reverse()
        # backward trees already point from (v, t) towards the sink
        return [ts.pair_arc[(u, w)] for u, w in zip(chain, chain[1:])]


def _run(ts: TimeSpaceNetwork, anchors: Sequence[int], reverse: bool):
    dist, pred = dijkstra(
        ts.shifted_weights(reverse=reverse),
        directed=True,
        indices=list(anchors),
        return_predecessors=True,
    )
    t_of = np.tile(np.arange(ts.T), ts.n_road)
    out = []
    for k, anchor in enumerate(anchors):
        t0 = anchor % ts.T
        shift = (t_of - t0) if not reverse else (t0 - t_of)
        values = (dist[k] - shift).reshape(ts.n_road, ts.T)
        values = np.rint(np.where(np.isfinite(values), values, np.inf))
        out.append((anchor, values, pred[k]))
    return out


def min_energy_forward(ts: TimeSpaceNetwork, origin: str, t: int = 0) -> LabelTable:
    anchor = ts.node_of(origin, t)
    key = ("fwd", anchor)
    if key not in ts._cache:
        (_, values, pred), = _run(ts, [anchor], reverse=False)
        ts._cache[key] = LabelTable(ts, "forward", anchor, values, pred)
    return ts._cache[key]


def min_energy_backward(ts: TimeSpaceNetwork, sink: str, t: Optional[int] = None) -> LabelTable:
    anchor = ts.node_of(sink, ts.T - 1 if t is None else t)
    key = ("bwd", anchor)
    if key not in ts._cache:
        (_, values, pred), = _run(ts, [anchor], reverse=True)
        ts._cache[key] = LabelTable(ts, "backward", anchor, values, pred)
    return ts._cache[key]


def warm_labels(ts: TimeSpaceNetwork, origins: Sequence[str], sinks: Sequence[str]) -> None:
    """Computes many label tables in two batched scipy calls and caches them."""
    fwd = sorted({ts.node_of(o, 0) for o in origins} - {k[1] for k in ts._cache if k[0] == "fwd"})
    bwd = sorted({ts.node_of(s, ts.T - 1) for s in sinks} - {k[1] for k in ts._cache if k[0] == "bwd"})
    if fwd:
        for anchor, values, pred in _run(ts, fwd, reverse=False):
            ts._cache[("fwd", anchor)] = LabelTable(ts, "forward", anchor, values, pred)
    if bwd:
        for anchor, values, pred in _run(ts, bwd, reverse=True):
            ts._cache[("bwd", anchor)] = LabelTable(ts, "backward", anchor, values, pred)


def can_reach_direct(road: RoadNetwork, T: int, ev, ts: Optional[TimeSpaceNetwork] = None) -> bool:
    """True iff ev reaches f_i by T-1 on its starting charge, without any charging."""
    ts = ts or expand_time_space(road, T)
    # waiting is free, so (f_i, T-1) carries the best arrival energy over all t
    best = min_energy_forward(ts, ev.s_i).at(ev.f_i, T - 1)
    return best <= ev.SOC_i
