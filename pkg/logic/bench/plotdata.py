# logic/bench/plotdata.py
"""Bench CSV -> plot-ready series (variable counts, time vs size, quality band)."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from common.errors import V2vcError
from common.util.app_logger import AppLogger
from logic.bench.harness import COLUMNS
from logic.solvers.outcome import SolveStatus

logger = AppLogger.get_logger(__name__)

OPTIMAL = SolveStatus.OPTIMAL.value


@dataclass
class PlotData:
    variables: pd.DataFrame
    timing: pd.DataFrame
    quality: pd.DataFrame
    slope: Optional[float]

    def write(self, out_dir: Union[str, Path]) -> Dict[str, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {}
        for name in ("variables", "timing", "quality"):
            paths[name] = out_dir / f"{name}.csv"
            getattr(self, name).to_csv(paths[name], index=False)
        paths["slope"] = out_dir / "slope.txt"
        paths["slope"].write_text("nan\n" if self.slope is None else f"{self.slope:.6f}\n",
                                  encoding="utf-8")
        return paths


def loglog_slope(frame: pd.DataFrame, x: str = "rv2vc_edges", y: str = "rv2vc_ms") -> Optional[float]:
    """Least-squares slope of log(y) against log(x) over rows where both are positive."""
    pts = frame[[x, y]].apply(pd.to_numeric, errors="coerce").dropna()
    pts = pts[(pts[x] > 0) & (pts[y] > 0)]
    if pts[x].nunique() < 2:
        return None
    slope, _ = np.polyfit(np.log(pts[x].to_numpy(float)), np.log(pts[y].to_numpy(float)), 1)
    return float(slope)


def aggregate(frame: pd.DataFrame) -> PlotData:
    missing = set(COLUMNS) - set(frame.columns)
    if missing:
        raise V2vcError(f"bench CSV lacks columns {sorted(missing)}")
    order = list(dict.fromkeys(frame["id"]))

    variables = (frame.groupby("id", sort=False)[["rows", "cols", "rv2vc_edges"]]
                 .mean().reindex(order).reset_index())

    timing = (frame.groupby("id", sort=False)
              .agg(edges=("rv2vc_edges", "mean"), cols=("cols", "mean"),
                   rv2vc_ms=("rv2vc_ms", "median"), exact_ms=("exact_ms", "median"),
                   build_ms=("build_ms", "median"))
              .reindex(order).reset_index())

    both = frame[(frame["exact_status"] == OPTIMAL) & (frame["rv2vc_status"] == OPTIMAL)]
    quality = (both.groupby("id", sort=False)
               .agg(samples=("seed", "count"),
                    exact_min=("exact_obj", "min"), exact_max=("exact_obj", "max"),
                    rv2vc_min=("rv2vc_obj", "min"), rv2vc_max=("rv2vc_obj", "max"),
                    gap_mean=("gap", "mean"), gap_max=("gap", "max"))
               .reset_index())

    slope = loglog_slope(frame)
    logger.info("plotdata", extra={"ids": len(order), "quality_ids": len(quality), "slope": slope})
    return PlotData(variables=variables, timing=timing, quality=quality, slope=slope)


def plotdata_from_csv(path: Union[str, Path]) -> PlotData:
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as ex:
        raise V2vcError(f"cannot read bench CSV {path}: {ex}") from ex
    return aggregate(frame)
