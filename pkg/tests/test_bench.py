# tests/test_bench.py
import math

import numpy as np
import pandas as pd
import pytest

from common.errors import V2vcError
from logic.bench.harness import COLUMNS, SKIPPED, bench_one, run_suite, write_records
from logic.bench.plotdata import aggregate, loglog_slope, plotdata_from_csv
from logic.scenario.benchmarks import lookup
from logic.scenario.models import GeneratorConfig


def _items():
    return [("Q1", lookup("Q1").with_seed(s)) for s in (0, 1)] + [("Q2", lookup("Q2"))]


def test_suite_to_csv(tmp_path):
    path = tmp_path / "bench.csv"
    records = write_records(run_suite(_items(), runs=1, threads=1), path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == COLUMNS
    assert len(frame) == len(records) == 3
    assert list(frame["id"]) == ["Q1", "Q1", "Q2"]
    both = frame[(frame["exact_status"] == "Optimal") & (frame["rv2vc_status"] == "Optimal")]
    assert (both["gap"] >= 0).all()
    assert (both["rv2vc_obj"] >= both["exact_obj"]).all()


def test_threads_keep_suite_order():
    seeds = [r.seed for r in run_suite(_items(), methods=("rv2vc",), runs=1, threads=3)]
    assert seeds == [0, 1, 0]


def test_rv2vc_only_leaves_exact_skipped():
    record = bench_one("Q1", lookup("Q1"), methods=("rv2vc",), runs=1)
    assert record.exact_status == SKIPPED
    assert record.build_ms is None and record.gap is None
    assert record.rv2vc_edges is not None and record.rv2vc_ms >= 0


def test_generation_failure_is_a_row():
    config = GeneratorConfig(helpers=1, needy=1, meeting_fraction=0.0, parking=0)
    record = bench_one("bad", config, methods=("exact", "rv2vc"), runs=1)
    assert record.exact_status == record.rv2vc_status == "GenerationFailed"


def test_unknown_method():
    with pytest.raises(ValueError):
        list(run_suite(_items(), methods=("gurobi",), runs=1))


def test_loglog_slope():
    edges = np.array([10, 20, 40, 80, 160])
    frame = pd.DataFrame({"rv2vc_edges": edges, "rv2vc_ms": 0.5 * edges ** 1.5})
    assert loglog_slope(frame) == pytest.approx(1.5)
    assert loglog_slope(frame.iloc[:1]) is None
    frame.loc[0, "rv2vc_ms"] = float("nan")
    assert loglog_slope(frame) == pytest.approx(1.5)


def _frame():
    rows = [
        ("Q1", 0, 184, 252, 2, 1.0, 5.0, 0.5, "Optimal", "Optimal", 2, 2, 0.0),
        ("Q1", 1, 184, 252, 2, 1.0, 7.0, 0.7, "Optimal", "Optimal", 2, 3, 0.5),
        ("R15", 0, 9000, 90000, 40, None, None, 3.0, SKIPPED, "Optimal", None, 50, None),
    ]
    return pd.DataFrame(rows, columns=COLUMNS)


def test_aggregate():
    data = aggregate(_frame())
    assert list(data.variables["id"]) == ["Q1", "R15"]
    timing = data.timing.set_index("id")
    assert timing.loc["Q1", "rv2vc_ms"] == pytest.approx(0.6)
    assert math.isnan(timing.loc["R15", "exact_ms"])
    assert list(data.quality["id"]) == ["Q1"]
    q = data.quality.iloc[0]
    assert (q["samples"], q["rv2vc_max"], q["gap_max"]) == (2, 3, 0.5)
    assert data.slope is not None


def test_plotdata_files(tmp_path):
    path = tmp_path / "bench.csv"
    _frame().to_csv(path, index=False)
    paths = plotdata_from_csv(path).write(tmp_path / "plots")
    assert set(paths) == {"variables", "timing", "quality", "slope"}
    assert float(paths["slope"].read_text(encoding="utf-8")) == pytest.approx(
        loglog_slope(_frame()), abs=1e-6)


def test_plotdata_rejects_foreign_csv(tmp_path):
    path = tmp_path / "other.csv"
    pd.DataFrame({"a": [1]}).to_csv(path, index=False)
    with pytest.raises(V2vcError):
        plotdata_from_csv(path)
    with pytest.raises(V2vcError):
        plotdata_from_csv(tmp_path / "missing.csv")
