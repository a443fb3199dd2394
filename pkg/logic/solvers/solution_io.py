# logic/solvers/solution_io.py
from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from common.errors import ModelError
from logic.model.ip_builder import IpInstance
from logic.model.plan import decode_solution
from logic.solvers.outcome import SolveOutcome


class SolutionDocument(BaseModel):
    """On-disk solution; `nonzeros` maps column index (as text) to value."""

    layout_signature: str
    status: str
    method: str = ""
    objective: Optional[int] = None
    nonzeros: Dict[str, int] = {}
    plan: Optional[dict] = None


def to_document(instance: IpInstance, outcome: SolveOutcome) -> SolutionDocument:
    nonzeros: Dict[str, int] = {}
    plan = None
    if outcome.x is not None:
        nonzeros = {str(int(k)): int(outcome.x[k]) for k in np.nonzero(outcome.x)[0]}
        plan = decode_solution(instance, outcome.x).to_dict(instance.scenario)
    return SolutionDocument(
        layout_signature=instance.layout.signature(),
        status=outcome.status.value,
        method=outcome.stats.method,
        objective=outcome.objective,
        nonzeros=nonzeros,
        plan=plan,
    )


def save_solution(instance: IpInstance, outcome: SolveOutcome, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_document(instance, outcome).model_dump_json(indent=2), encoding="utf-8")
    return path


def load_solution(instance: IpInstance, path: Union[str, Path]) -> np.ndarray:
    """Column vector stored in `path`; the layout must match `instance`."""
    path = Path(path)
    if not path.exists():
        raise ModelError(f"solution file not found: {path}")
    try:
        doc = SolutionDocument.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as ex:
        raise ModelError(f"malformed solution document: {ex.errors()[0]['msg']}") from ex
    if doc.layout_signature != instance.layout.signature():
        raise ModelError("solution was produced for a different scenario layout")
    x = np.zeros(instance.shape[1], dtype=np.int64)
    for key, value in doc.nonzeros.items():
        col = int(key)
        if not 0 <= col < x.size:
            raise ModelError(f"column {col} out of range")
        x[col] = value
    return x
