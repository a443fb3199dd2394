# logic/network/road_network.py
from __future__ import annotations

from functools import cached_property
from typing import Dict, List, Literal, NamedTuple, Tuple

from pydantic import BaseModel, ConfigDict

NodeKind = Literal["plain", "meeting", "parking"]


class RoadNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    kind: NodeKind = "plain"


class RoadArc(BaseModel):
    """A road connection. Undirected edges are stored once (directed=False)."""

    model_config = ConfigDict(frozen=True)

    tail: str
    head: str
    e_a: int          # traversal energy units
    d_a: int = 1      # time steps
    directed: bool = False


class DirectedArc(NamedTuple):
    tail: int         # road node index
    head: int
    e_a: int
    d_a: int
    source: int       # index into RoadNetwork.arcs


class RoadNetwork(BaseModel):
    """
    The map G. Field values are not checked here so that broken inputs can still be
    loaded and reported by `logic.scenario.validation.validate`.
    """

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[RoadNode, ...]
    arcs: Tuple[RoadArc, ...] = ()

    @cached_property
    def index(self) -> Dict[str, int]:
        return {node.id: i for i, node in enumerate(self.nodes)}

    @property
    def node_ids(self) -> List[str]:
        return [node.id for node in self.nodes]

    def kind_of(self, node_id: str) -> NodeKind:
        return self.nodes[self.index[node_id]].kind

    @cached_property
    def meeting_points(self) -> Tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.kind == "meeting")

    @cached_property
    def parking_stations(self) -> Tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.kind == "parking")

    @cached_property
    def directed_arcs(self) -> Tuple[DirectedArc, ...]:
        """Undirected edges expand to two directed arcs with the same e_a, d_a."""
        out: List[DirectedArc] = []
        for k, arc in enumerate(self.arcs):
            u, w = self.index[arc.tail], self.index[arc.head]
            out.append(DirectedArc(u, w, arc.e_a, arc.d_a, k))
            if not arc.directed:
                out.append(DirectedArc(w, u, arc.e_a, arc.d_a, k))
        return tuple(out)
