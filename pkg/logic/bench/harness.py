# logic/bench/harness.py
from __future__ import annotations

import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import pandas as pd
from pydantic import BaseModel
from tqdm import tqdm

from common.config.settings import get_settings
from common.errors import V2vcError
from common.util.app_logger import AppLogger
from logic.heuristics.rv2vc.runner import solve_rv2vc
from logic.model.ip_builder import build_ip, predicted_dimensions
from logic.scenario.generator import generate
from logic.scenario.models import GeneratorConfig
from logic.solvers.exact import solve_exact
from logic.solvers.outcome import SolveOutcome, SolveStatus

logger = AppLogger.get_logger(__name__)

COLUMNS = ["id", "seed", "rows", "cols", "rv2vc_edges", "build_ms", "exact_ms", "rv2vc_ms",
           "exact_status", "rv2vc_status", "exact_obj", "rv2vc_obj", "gap"]
SKIPPED = "Skipped"
METHODS = ("exact", "rv2vc")


class BenchRecord(BaseModel):
    id: str
    seed: int
    rows: int = 0
    cols: int = 0
    rv2vc_edges: Optional[int] = None
    build_ms: Optional[float] = None
    exact_ms: Optional[float] = None
    rv2vc_ms: Optional[float] = None
    exact_status: str = SKIPPED
    rv2vc_status: str = SKIPPED
    exact_obj: Optional[int] = None
    rv2vc_obj: Optional[int] = None
    gap: Optional[float] = None

    def fill_gap(self) -> None:
        if self.exact_status == SolveStatus.OPTIMAL.value and self.rv2vc_status == SolveStatus.OPTIMAL.value:
            self.gap = (self.rv2vc_obj - self.exact_obj) / max(1, self.exact_obj)


def _median_run(runs: int, fn: Callable[[], SolveOutcome]) -> Tuple[SolveOutcome, float]:
    """Solve-only wall time, median over `runs`; the outcome of the last run is kept."""
    times: List[float] = []
    outcome = None
    for _ in range(runs):
        outcome = fn()
        times.append(outcome.stats.wall_ms)
    return outcome, float(statistics.median(times))


def bench_one(scenario_id: str, config: GeneratorConfig, methods: Sequence[str],
              runs: int, budget: Optional[int] = None, exact_backend: Optional[str] = None) -> BenchRecord:
    settings = get_settings()
    record = BenchRecord(id=scenario_id, seed=config.seed)
    try:
        scenario = generate(config)
    except V2vcError as ex:
        logger.warning("bench_generation_failed", extra={"id": scenario_id, "seed": config.seed,
                                                         "reason": str(ex)})
        record.exact_status = record.rv2vc_status = "GenerationFailed"
        return record
    record.rows, record.cols = predicted_dimensions(scenario)

    if "exact" in methods and record.cols <= settings.exact_max_cols:
        started = time.perf_counter()
        instance = build_ip(scenario)
        record.build_ms = (time.perf_counter() - started) * 1000.0
        outcome, record.exact_ms = _median_run(
            runs, lambda: solve_exact(instance, backend=exact_backend, budget=budget))
        record.exact_status = outcome.status.value
        record.exact_obj = outcome.objective
    elif "exact" in methods:
        logger.info("bench_exact_skipped", extra={"id": scenario_id, "cols": record.cols,
                                                  "limit": settings.exact_max_cols})

    if "rv2vc" in methods:
        outcome, record.rv2vc_ms = _median_run(runs, lambda: _rv2vc_outcome(scenario, record))
        record.rv2vc_status = outcome.status.value
        record.rv2vc_obj = outcome.objective

    record.fill_gap()
    logger.info("bench_row", extra=record.model_dump(exclude={"id"}) | {"scenario": scenario_id})
    return record


def _rv2vc_outcome(scenario, record: BenchRecord) -> SolveOutcome:
    run = solve_rv2vc(scenario)
    record.rv2vc_edges = len(run.graph.edges)
    return run.outcome


def run_suite(items: Iterable[Tuple[str, GeneratorConfig]], methods: Sequence[str] = METHODS,
              runs: Optional[int] = None, budget: Optional[int] = None,
              exact_backend: Optional[str] = None, threads: Optional[int] = None,
              progress: bool = False) -> Iterator[BenchRecord]:
    """Yields records in suite order; scenarios may be benched concurrently."""
    settings = get_settings()
    runs = runs or settings.bench_runs
    threads = threads or settings.threads
    items = list(items)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods {sorted(unknown)}; expected {METHODS}")

    def job(item):
        return bench_one(item[0], item[1], methods, runs, budget, exact_backend)

    bar = tqdm(total=len(items), disable=not progress, desc="bench", unit="scenario")
    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for record in pool.map(job, items):
                    bar.update(1)
                    yield record
        else:
            for item in items:
                record = job(item)
                bar.update(1)
                yield record
    finally:
        bar.close()


def write_records(records: Iterable[BenchRecord], path: Union[str, Path]) -> List[BenchRecord]:
    """Appends each record to the CSV as soon as it exists, header first."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(columns=COLUMNS).to_csv(path, index=False)
    out: List[BenchRecord] = []
    for record in records:
        pd.DataFrame([record.model_dump()], columns=COLUMNS).to_csv(path, mode="a", header=False,
                                                                     index=False)
        out.append(record)
    return out
