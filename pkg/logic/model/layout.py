# logic/model/layout.py
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from logic.scenario.models import Scenario

BINARY_BLOCKS = ("X", "Y", "Z")
# slack blocks in the same order as the non-path row blocks they close
SLACK_BLOCKS = ("battery", "g2vc", "link1", "link2", "unidir", "give", "receive")


@dataclass(frozen=True)
class Block:
    name: str
    offset: int
    shape: Tuple[int, ...]

    @property
    def size(self) -> int:
        return int(np.prod(self.shape)) if self.shape else 0

    @property
    def stop(self) -> int:
        return self.offset + self.size

    def index(self, *key: int) -> int:
        return self.offset + int(np.ravel_multi_index(key, self.shape))

    def key(self, idx: int) -> Tuple[int, ...]:
        return tuple(int(k) for k in np.unravel_index(idx - self.offset, self.shape))


class VariableLayout:
    """
    Column layout of the integer program and the matching row layout.

    Keys use EV indices, road node positions within P / M, and time steps. Z keys
    are (receiver, giver slot, meeting slot, t) where the giver slot skips the
    receiver itself; use `z()` rather than building keys by hand.
    """

    def __init__(self, scenario: Scenario):
        ts = scenario.ts
        road = scenario.road
        self.V = len(scenario.evs)
        self.T = scenario.T
        self.n_nodes = ts.num_nodes
        self.n_arcs = ts.num_arcs
        self.parking: List[int] = [road.index[p] for p in road.parking_stations]
        self.meeting: List[int] = [road.index[m] for m in road.meeting_points]
        self.parking_slot: Dict[int, int] = {v: k for k, v in enumerate(self.parking)}
        self.meeting_slot: Dict[int, int] = {v: k for k, v in enumerate(self.meeting)}
        self.pairs: List[Tuple[int, int]] = list(combinations(range(self.V), 2))
        self.pair_slot: Dict[Tuple[int, int], int] = {p: k for k, p in enumerate(self.pairs)}

        V, T1 = self.V, max(self.T - 1, 0)
        P, M = len(self.parking), len(self.meeting)
        z_shape = (V, max(V - 1, 0), M, T1)
        col_shapes = [
            ("X", (V, self.n_arcs)),
            ("Y", (V, P, T1)),
            ("Z", z_shape),
            ("battery", (V, T1)),
            ("g2vc", (V, P, T1)),
            ("link1", z_shape),
            ("link2", z_shape),
            ("unidir", (len(self.pairs), M, T1)),
            ("give", (V, T1)),
            ("receive", (V, T1)),
        ]
        self.columns: Dict[str, Block] = self._stack(col_shapes)
        row_shapes = [("path", (V, self.n_nodes))] + [
            (name, self.columns[name].shape) for name in SLACK_BLOCKS
        ]
        self.rows: Dict[str, Block] = self._stack(row_shapes)

    @staticmethod
    def _stack(shapes) -> Dict[str, Block]:
        out, offset = {}, 0
        for name, shape in shapes:
            block = Block(name, offset, shape)
            out[name] = block
            offset = block.stop
        return out

    # ---- sizes ----
    @property
    def num_cols(self) -> int:
        return self.columns["receive"].stop

    @property
    def num_rows(self) -> int:
        return self.rows["receive"].stop

    @property
    def binary_stop(self) -> int:
        return self.columns["Z"].stop

    @property
    def path_rows(self) -> int:
        return self.rows["path"].size

    def slack_col_of_row(self, row: int) -> int:
        return self.binary_stop + (row - self.path_rows)

    # ---- column lookups ----
    def x(self, ev: int, arc: int) -> int:
        return self.columns["X"].index(ev, arc)

    def y(self, ev: int, parking_node: int, t: int) -> int:
        return self.columns["Y"].index(ev, self.parking_slot[parking_node], t)

    def giver_slot(self, receiver: int, giver: int) -> int:
        return giver if giver < receiver else giver - 1

    def giver_of_slot(self, receiver: int, slot: int) -> int:
        return slot if slot < receiver else slot + 1

    def z(self, receiver: int, giver: int, meeting_node: int, t: int) -> int:
        return self.columns["Z"].index(
            receiver, self.giver_slot(receiver, giver), self.meeting_slot[meeting_node], t
        )

    def block_of(self, col: int) -> Block:
        for block in self.columns.values():
            if block.offset <= col < block.stop:
                return block
        raise IndexError(col)

    def row_block_of(self, row: int) -> Block:
        for block in self.rows.values():
            if block.offset <= row < block.stop:
                return block
        raise IndexError(row)

    def column_name(self, col: int) -> str:
        block = self.block_of(col)
        return block.name + "_" + "_".join(str(k) for k in block.key(col))

    def row_name(self, row: int) -> str:
        block = self.row_block_of(row)
        return "r" + block.name + "_" + "_".join(str(k) for k in block.key(row))

    def signature(self) -> str:
        """Short fingerprint stored in solution files to catch layout mismatches."""
        parts = [f"{name}:{block.shape}" for name, block in self.columns.items()]
        return "|".join(parts)
