# tests/test_ip_model.py
import json
from pathlib import Path

import numpy as np
import pytest

from common.errors import GenerationError, ModelError
from logic.model.ip_builder import OBJECTIVES, build_ip, eval_objective, predicted_dimensions
from logic.model.layout import VariableLayout
from logic.model.mps_io import export_mps, import_mps
from logic.model.plan import Plan, encode_plan
from logic.network.time_space import TRAVEL
from logic.scenario.generator import generate
from logic.scenario.models import Ev, GeneratorConfig, Scenario
from logic.scenario.scenario_io import load_scenario
from tests.conftest import ROOT, line_road, single_ev, star, toy

GOLDENS = json.loads((Path(__file__).parent / "goldens.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("case", GOLDENS, ids=[c["name"] for c in GOLDENS])
def test_golden_dimensions(case):
    sc = load_scenario(ROOT / case["scenario"])
    instance = build_ip(sc)
    assert instance.shape == (case["rows"], case["cols"])
    assert predicted_dimensions(sc) == (case["rows"], case["cols"])


def test_toy_model_is_seven_by_seven():
    instance = build_ip(toy())
    assert instance.shape == (7, 7)
    lay = instance.layout
    assert lay.path_rows == 4
    assert lay.binary_stop == 4
    assert [lay.columns[n].size for n in ("battery", "give", "receive")] == [1, 1, 1]


def test_no_stations_means_no_y_or_z():
    instance = build_ip(single_ev(soc=9, T=4))
    lay = instance.layout
    assert lay.columns["Y"].size == 0 and lay.columns["Z"].size == 0
    bat = lay.rows["battery"]
    block = instance.A[bat.offset:bat.stop].tocoo()
    x_block = lay.columns["X"]
    slack = lay.columns["battery"]
    assert all(x_block.offset <= c < x_block.stop or slack.offset <= c < slack.stop for c in block.col)


def test_battery_row_holds_soc_and_capacity():
    instance = build_ip(single_ev(soc=7, T=3, maxsoc=11))
    lay = instance.layout
    bat_rows = lay.rows["battery"]
    bat_cols = lay.columns["battery"]
    np.testing.assert_array_equal(instance.b[bat_rows.offset:bat_rows.stop], [-7, -7])
    np.testing.assert_array_equal(instance.l[bat_cols.offset:bat_cols.stop], [-11, -11])
    np.testing.assert_array_equal(instance.u[bat_cols.offset:bat_cols.stop], [0, 0])


def test_predicted_dimensions_match_built_on_random_scenarios():
    rng = np.random.default_rng(42)
    checked = 0
    for k in range(100):
        config = GeneratorConfig(helpers=int(rng.integers(1, 4)), needy=int(rng.integers(0, 3)),
                                 nodes=int(rng.integers(2, 7)), T=int(rng.integers(3, 10)),
                                 parking=int(rng.integers(0, 2)),
                                 duration_range=(1, int(rng.integers(1, 3))), seed=k)
        try:
            sc = generate(config)
        except GenerationError:
            continue
        assert build_ip(sc).shape == predicted_dimensions(sc), f"seed {k}"
        checked += 1
    assert checked >= 50


def test_without_stations_formula_reduces():
    sc = single_ev(soc=9, T=5)
    V, N, T = 1, 2 * 5, 5
    A = sc.ts.num_arcs
    assert predicted_dimensions(sc) == (V * N + 3 * V * (T - 1), V * A + 3 * V * (T - 1))


def test_layout_keys_round_trip(q1):
    lay = VariableLayout(q1)
    m = lay.meeting[1]
    col = lay.z(0, 1, m, 4)
    assert lay.column_name(col) == "Z_0_0_1_4"
    assert lay.giver_of_slot(1, lay.giver_slot(1, 0)) == 0
    assert lay.block_of(lay.x(1, 3)).name == "X"
    assert lay.slack_col_of_row(lay.rows["unidir"].offset) == lay.columns["unidir"].offset


def test_eval_objective():
    sc = single_ev(soc=5, T=2, e_a=5)
    instance = build_ip(sc)
    assert eval_objective(instance, np.zeros(instance.shape[1], dtype=int)) == 0
    travel = int(np.nonzero(sc.ts.kind == TRAVEL)[0][0])
    x = encode_plan(instance, Plan(routes=((travel,),)))
    assert eval_objective(instance, x) == 5
    with pytest.raises(ModelError):
        eval_objective(instance, x[:-1])


def test_grid_energy_is_priced():
    instance = build_ip(star())
    lay = instance.layout
    p = lay.parking[0]
    assert instance.objective.c[lay.y(1, p, 2)] == 2
    assert instance.objective.c[lay.z(0, 1, lay.meeting[0], 2)] == 0


def test_objective_registry_and_errors():
    assert {"energy", "feasibility"} <= set(OBJECTIVES)
    assert not build_ip(toy(), objective="feasibility").objective.c.any()
    with pytest.raises(ModelError):
        build_ip(toy(), objective="speed")
    bad = Scenario(road=line_road(), T=3, evs=(Ev(id="a", s_i="A", f_i="Z", SOC_i=1, MAXSOC_i=1),))
    with pytest.raises(ModelError):
        build_ip(bad)


def test_mps_toy_export(tmp_path):
    path = export_mps(build_ip(toy()), tmp_path / "toy.mps")
    lines = path.read_text(encoding="ascii").splitlines()
    rows = lines[lines.index("ROWS") + 1:lines.index("COLUMNS")]
    assert sum(1 for r in rows if r.split()[0] == "E") == 7
    model = import_mps(path)
    assert len(model.col_names) == 7
    assert model.integer.tolist() == [True] * 4 + [False] * 3


def test_mps_records_use_fixed_fields(tmp_path):
    lines = export_mps(build_ip(toy()), tmp_path / "toy.mps").read_text(encoding="ascii").splitlines()
    columns = lines[lines.index("COLUMNS") + 1:lines.index("RHS")]
    markers = [line for line in columns if "'MARKER'" in line]
    assert [line[39:] for line in markers] == ["'INTORG'", "'INTEND'"]
    for line in columns:
        assert line[4:12].strip() and line[14:22].strip()
        assert line[12:14] == "  " and line[22:24] == "  "


@pytest.mark.parametrize("factory", [toy, star], ids=["toy", "star"])
def test_mps_round_trip(tmp_path, factory):
    instance = build_ip(factory())
    model = import_mps(export_mps(instance, tmp_path / "m.mps"))
    assert model.triplets() == instance.triplets()
    np.testing.assert_array_equal(model.b, instance.b)
    np.testing.assert_array_equal(model.l, instance.l)
    np.testing.assert_array_equal(model.u, instance.u)
    np.testing.assert_array_equal(model.c, instance.objective.c)


def test_mps_empty_objective(tmp_path):
    instance = build_ip(toy(), objective="feasibility")
    model = import_mps(export_mps(instance, tmp_path / "f.mps"))
    assert not model.c.any()
