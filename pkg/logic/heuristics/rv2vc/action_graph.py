# logic/heuristics/rv2vc/action_graph.py
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd

EdgeKind = Literal["direct", "pair", "g2vc"]
SINK = "f"


@dataclass(frozen=True)
class ActionEdge:
    """
    One charging action. `i` is the EV acting alone (direct, g2vc) or the helper
    (pair); `j` is the needy EV of a pair. `cost` is traversal energy only; grid
    energy drawn by a g2vc edge is kept in `grid_energy`.
    """

    kind: EdgeKind
    i: str
    node: str
    cost: int
    j: Optional[str] = None
    t_h: Optional[int] = None
    t_n: Optional[int] = None
    t0: Optional[int] = None
    k: Optional[int] = None
    grid_energy: int = 0

    @property
    def participants(self) -> Tuple[str, ...]:
        return (self.i, self.j) if self.j is not None else (self.i,)

    def row(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j or "", "node": self.node,
                "t0": "" if self.t0 is None else self.t0, "k": "" if self.k is None else self.k,
                "cost": self.cost}


@dataclass
class ActionGraph:
    """Bipartite action graph: EV nodes on one side, edges to the shared sink or to a partner EV."""

    evs: Tuple[str, ...]
    helpers: Tuple[str, ...]
    needy: Tuple[str, ...]
    edges: List[ActionEdge] = field(default_factory=list)
    sink: str = SINK

    def incident(self, ev: str) -> List[ActionEdge]:
        return [e for e in self.edges if ev in e.participants]

    def degree(self, ev: str) -> int:
        return len(self.incident(ev))

    def counts(self) -> Dict[str, int]:
        out = {"direct": 0, "pair": 0, "g2vc": 0}
        for e in self.edges:
            out[e.kind] += 1
        return out

    def incidence_matrix(self) -> np.ndarray:
        """EV-by-edge 0/1 matrix of the one-edge-per-EV constraint."""
        index = {ev: k for k, ev in enumerate(self.evs)}
        out = np.zeros((len(self.evs), len(self.edges)), dtype=np.int64)
        for col, e in enumerate(self.edges):
            for ev in e.participants:
                out[index[ev], col] = 1
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([e.row() for e in self.edges],
                            columns=["kind", "i", "j", "node", "t0", "k", "cost"])

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path
