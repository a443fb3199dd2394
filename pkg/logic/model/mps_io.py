# logic/model/mps_io.py
"""Fixed-format MPS export/import for parity runs with external MILP solvers."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from common.errors import ModelError
from common.util.app_logger import AppLogger
from logic.model.ip_builder import IpInstance

logger = AppLogger.get_logger(__name__)

OBJ_ROW = "OBJ"
QUOTED_MARKER = "'MARKER'"


def _row(k: int) -> str:
    return f"R{k}"


def _col(k: int) -> str:
    return f"C{k}"


def _entry(name: str, row: str, value: int) -> str:
    return f"    {name:<8}  {row:<8}  {value:>12}\n"


def _marker(kind: str) -> str:
    """Marker record: name in field 2, 'MARKER' in field 3, the kind in field 5 (column 40)."""
    return f"    {'MARKER':<8}  {QUOTED_MARKER:<8}  {'':>12}   '{kind}'\n"


@dataclass(frozen=True, eq=False)
class MpsModel:
    name: str
    A: csr_matrix
    b: np.ndarray
    l: np.ndarray
    u: np.ndarray
    c: np.ndarray
    integer: np.ndarray       # bool mask
    row_names: List[str]
    col_names: List[str]

    def triplets(self):
        coo = self.A.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k]), int(coo.data[k])) for k in order]


def export_mps(instance: IpInstance, path: Union[str, Path], name: str = "V2VC") -> Path:
    """Equality rows, MARKER-delimited integer X/Y/Z columns, explicit LO/UP bounds."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    A = instance.A.tocsc()
    c = instance.objective.c
    n_rows, n_cols = A.shape
    binary_stop = instance.layout.binary_stop
    try:
        with path.open("w", encoding="ascii") as out:
            out.write(f"NAME          {name}\n")
            out.write(f"* objective: {instance.objective.tag}; integer columns C0..C{binary_stop - 1}\n")
            out.write("ROWS\n")
            out.write(f" N  {OBJ_ROW}\n")
            for r in range(n_rows):
                out.write(f" E  {_row(r)}\n")
            out.write("COLUMNS\n")
            in_int = False
            for j in range(n_cols):
                is_int = j < binary_stop
                if is_int and not in_int:
                    out.write(_marker("INTORG"))
                elif in_int and not is_int:
                    out.write(_marker("INTEND"))
                in_int = is_int
                if c[j] != 0:
                    out.write(_entry(_col(j), OBJ_ROW, int(c[j])))
                lo, hi = A.indptr[j], A.indptr[j + 1]
                for r, v in zip(A.indices[lo:hi], A.data[lo:hi]):
                    out.write(_entry(_col(j), _row(int(r)), int(v)))
            if in_int:
                out.write(_marker("INTEND"))
            out.write("RHS\n")
            for r in np.nonzero(instance.b)[0]:
                out.write(_entry("RHS", _row(int(r)), int(instance.b[r])))
            out.write("BOUNDS\n")
            for j in range(n_cols):
                out.write(f" LO BND       {_col(j):<8}  {int(instance.l[j]):>12}\n")
                out.write(f" UP BND       {_col(j):<8}  {int(instance.u[j]):>12}\n")
            out.write("ENDATA\n")
    except OSError as ex:
        raise ModelError(f"cannot write MPS file {path}: {ex}") from ex
    logger.info("mps_exported", extra={"path": str(path), "rows": n_rows, "cols": n_cols})
    return path


def import_mps(path: Union[str, Path]) -> MpsModel:
    path = Path(path)
    try:
        lines = path.read_text(encoding="ascii").splitlines()
    except OSError as ex:
        raise ModelError(f"cannot read MPS file {path}: {ex}") from ex

    name = ""
    section = None
    row_index: Dict[str, int] = {}
    col_index: Dict[str, int] = {}
    entries: List[tuple] = []
    obj: Dict[int, int] = {}
    rhs: Dict[int, int] = {}
    lower: Dict[int, int] = {}
    upper: Dict[int, int] = {}
    integer: Dict[int, bool] = {}
    in_int = False

    def col_id(label: str) -> int:
        if label not in col_index:
            col_index[label] = len(col_index)
            integer[col_index[label]] = in_int
        return col_index[label]

    for raw in lines:
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw.startswith(" "):
            head = raw.split()
            section = head[0]
            if section == "NAME" and len(head) > 1:
                name = head[1]
            continue
        parts = raw.split()
        if section == "ROWS":
            kind, label = parts
            if kind == "N":
                continue
            if kind != "E":
                raise ModelError(f"only equality rows are supported, got {kind} {label}")
            row_index[label] = len(row_index)
        elif section == "COLUMNS":
            if len(parts) >= 3 and parts[1] == QUOTED_MARKER:
                in_int = parts[2] == "'INTORG'"
                continue
            j = col_id(parts[0])
            for k in range(1, len(parts), 2):
                label, value = parts[k], int(float(parts[k + 1]))
                if label == OBJ_ROW:
                    obj[j] = value
                else:
                    entries.append((row_index[label], j, value))
        elif section == "RHS":
            for k in range(1, len(parts), 2):
                if parts[k] != OBJ_ROW:
                    rhs[row_index[parts[k]]] = int(float(parts[k + 1]))
        elif section == "BOUNDS":
            kind, _, label, value = parts
            j = col_id(label)
            (lower if kind == "LO" else upper)[j] = int(float(value))
        elif section == "ENDATA":
            break

    n_rows, n_cols = len(row_index), len(col_index)
    A = coo_matrix(
        ([e[2] for e in entries], ([e[0] for e in entries], [e[1] for e in entries])),
        shape=(n_rows, n_cols), dtype=np.int64,
    ).tocsr()
    vec = lambda d, default: np.array([d.get(k, default) for k in range(n_cols)], dtype=np.int64)
    return MpsModel(
        name=name,
        A=A,
        b=np.array([rhs.get(r, 0) for r in range(n_rows)], dtype=np.int64),
        l=vec(lower, 0),
        u=vec(upper, np.iinfo(np.int64).max),
        c=vec(obj, 0),
        integer=np.array([integer[k] for k in range(n_cols)], dtype=bool),
        row_names=list(row_index),
        col_names=list(col_index),
    )
