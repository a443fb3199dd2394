# logic/verify/trajectory.py
from __future__ import annotations

from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from common.errors import ModelError
from logic.model.layout import VariableLayout
from logic.model.plan import Plan, decode_columns
from logic.scenario.models import Scenario
from logic.verify.verifier import verify_semantic


def _valid_plan(scenario: Scenario, solution: Union[np.ndarray, Plan]) -> Plan:
    report = verify_semantic(scenario, solution)
    if not report.accepted:
        raise ModelError(f"invalid solution: {report.reason()}")
    if isinstance(solution, Plan):
        return solution
    return decode_columns(VariableLayout(scenario), solution)


def soc_trajectory(scenario: Scenario, solution: Union[np.ndarray, Plan], ev: str) -> List[Tuple[int, int]]:
    """(t, SOC) for t = 0..T-1; the first entry is SOC_i."""
    if ev not in scenario.ev_index:
        raise ModelError(f"unknown EV {ev!r}")
    series = _valid_plan(scenario, solution).soc_series(scenario)[scenario.ev_index[ev]]
    return [(t, int(v)) for t, v in enumerate(series)]


def trajectory_frame(scenario: Scenario, solution: Union[np.ndarray, Plan]) -> pd.DataFrame:
    soc = _valid_plan(scenario, solution).soc_series(scenario)
    return pd.DataFrame(
        [(ev.id, t, int(soc[i, t])) for i, ev in enumerate(scenario.evs) for t in range(scenario.T)],
        columns=["ev", "t", "soc"],
    )


def write_trajectories(scenario: Scenario, solution: Union[np.ndarray, Plan],
                       path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trajectory_frame(scenario, solution).to_csv(path, index=False)
    return path
