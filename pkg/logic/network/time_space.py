# logic/network/time_space.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix

from common.errors import ModelError
from logic.network.road_network import DirectedArc, RoadNetwork

WAITING = 0
TRAVEL = 1


def traversal_energy(arc: DirectedArc) -> int:
    """
    Energy of the travel arc built from road arc `arc`.

    Road arc energy is already whole-arc energy, so it is not multiplied by d_a.
    Kept in one place so the alternative reading (e_a * d_a) is a one-line change.
    """
    return arc.e_a


@dataclass(frozen=True, eq=False)
class TimeSpaceNetwork:
    """
    G_TS over steps 0..T-1. Node (v, t) has index v * T + t.

    Arcs are sorted by tail time; at equal time waiting arcs come first, then travel
    arcs in road order. Parallel travel arcs between the same two TS nodes are kept;
    `pair_arc` maps a TS node pair to its cheapest arc.
    """

    road: RoadNetwork
    T: int
    tail: np.ndarray
    head: np.ndarray
    kind: np.ndarray
    energy: np.ndarray
    t_tail: np.ndarray
    t_head: np.ndarray
    v_tail: np.ndarray
    v_head: np.ndarray
    wait_arc: np.ndarray                       # (n_road, T) -> arc index or -1
    pair_arc: Dict[Tuple[int, int], int]
    out_arcs: List[List[int]]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_road(self) -> int:
        return len(self.road.nodes)

    @property
    def num_nodes(self) -> int:
        return self.n_road * self.T

    @property
    def num_arcs(self) -> int:
        return int(self.tail.shape[0])

    def node(self, v: int, t: int) -> int:
        return v * self.T + t

    def split(self, idx: int) -> Tuple[int, int]:
        return divmod(int(idx), self.T)

    def node_of(self, node_id: str, t: int) -> int:
        return self.node(self.road.index[node_id], t)

    def arcs(self):
        """Yields (tail (v, t), head (w, t'), kind, energy) records."""
        for a in range(self.num_arcs):
            yield (
                (int(self.v_tail[a]), int(self.t_tail[a])),
                (int(self.v_head[a]), int(self.t_head[a])),
                "waiting" if self.kind[a] == WAITING else "travel",
                int(self.energy[a]),
            )

    def shifted_weights(self, reverse: bool = False) -> csr_matrix:
        """
        Sparse weights e_TS + (t' - t) for scipy's shortest paths.

        Every path between two fixed TS nodes spans the same number of steps, so the
        shift is a constant per endpoint pair and strictly positive weights keep the
        zero-energy waiting arcs from being dropped as implicit zeros.
        """
        key = ("weights", reverse)
        if key not in self._cache:
            rows, cols, data = [], [], []
            for (u, w), a in self.pair_arc.items():
                rows.append(w if reverse else u)
                cols.append(u if reverse else w)
                data.append(float(self.energy[a] + self.t_head[a] - self.t_tail[a]))
            n = self.num_nodes
            self._cache[key] = csr_matrix((data, (rows, cols)), shape=(n, n))
        return self._cache[key]

    def to_digraph(self) -> nx.DiGraph:
        """The expanded graph as a networkx DiGraph keyed by (v, t); edges carry `arc`."""
        if "digraph" not in self._cache:
            g = nx.DiGraph()
            g.add_nodes_from((v, t) for v in range(self.n_road) for t in range(self.T))
            for (u, w), a in self.pair_arc.items():
                g.add_edge(self.split(u), self.split(w), arc=a, energy=int(self.energy[a]))
            self._cache["digraph"] = g
        return self._cache["digraph"]


def expand_time_space(road: RoadNetwork, T: int) -> TimeSpaceNetwork:
    if T < 1:
        raise ModelError(f"time horizon must be >= 1, got T={T}")

    n = len(road.nodes)
    directed = road.directed_arcs
    records: List[Tuple[int, int, int, int, int, int]] = []  # t, order, v, w, d, e
    for t in range(T - 1):
        for v in range(n):
            records.append((t, 0, v, v, 1, 0))
        for k, arc in enumerate(directed):
            if t + arc.d_a <= T - 1:
                records.append((t, 1 + k, arc.tail, arc.head, arc.d_a, traversal_energy(arc)))

    m = len(records)
    t_tail = np.fromiter((r[0] for r in records), dtype=np.int64, count=m)
    v_tail = np.fromiter((r[2] for r in records), dtype=np.int64, count=m)
    v_head = np.fromiter((r[3] for r in records), dtype=np.int64, count=m)
    dur = np.fromiter((r[4] for r in records), dtype=np.int64, count=m)
    energy = np.fromiter((r[5] for r in records), dtype=np.int64, count=m)
    kind = np.fromiter((WAITING if r[1] == 0 else TRAVEL for r in records), dtype=np.int8, count=m)
    t_head = t_tail + dur
    tail = v_tail * T + t_tail
    head = v_head * T + t_head

    wait_arc = np.full((n, T), -1, dtype=np.int64)
    pair_arc: Dict[Tuple[int, int], int] = {}
    out_arcs: List[List[int]] = [[] for _ in range(n * T)]
    for a in range(m):
        u, w = int(tail[a]), int(head[a])
        out_arcs[u].append(a)
        if kind[a] == WAITING:
            wait_arc[v_tail[a], t_tail[a]] = a
        best = pair_arc.get((u, w))
        if best is None or energy[a] < energy[best]:
            pair_arc[(u, w)] = a

    return TimeSpaceNetwork(
        road=road,
        T=T,
        tail=tail,
        head=head,
        kind=kind,
        energy=energy,
        t_tail=t_tail,
        t_head=t_head,
        v_tail=v_tail,
        v_head=v_head,
        wait_arc=wait_arc,
        pair_arc=pair_arc,
        out_arcs=out_arcs,
    )
