# tests/test_time_space.py
import numpy as np
import pytest

from common.errors import ModelError
from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.network.time_space import TRAVEL, WAITING, expand_time_space
from tests.conftest import line_road, random_road


def test_two_nodes_two_steps():
    ts = expand_time_space(line_road(), T=2)
    assert ts.num_nodes == 4
    assert ts.num_arcs == 4
    assert int((ts.kind == WAITING).sum()) == 2
    assert int((ts.kind == TRAVEL).sum()) == 2


def test_single_step_has_no_arcs():
    ts = expand_time_space(line_road(), T=1)
    assert ts.num_nodes == 2
    assert ts.num_arcs == 0


def test_q1_arc_count():
    ts = expand_time_space(line_road(e_a=1), T=10)
    assert ts.num_arcs == 36
    assert int((ts.kind == WAITING).sum()) == 18


def test_rejects_empty_horizon():
    with pytest.raises(ModelError):
        expand_time_space(line_road(), T=0)


def test_arcs_move_forward_in_time_and_are_time_sorted():
    road = RoadNetwork(
        nodes=tuple(RoadNode(id=c) for c in "ABC"),
        arcs=(RoadArc(tail="A", head="B", e_a=2, d_a=3), RoadArc(tail="B", head="C", e_a=1, d_a=1),
              RoadArc(tail="C", head="A", e_a=4, d_a=2, directed=True)),
    )
    ts = expand_time_space(road, T=7)
    assert (ts.t_head > ts.t_tail).all()
    assert (np.diff(ts.t_tail) >= 0).all()
    # no arc may overrun the horizon
    assert ts.t_head.max() <= 6
    # waiting arcs come first within a tail time
    for t in range(6):
        kinds = ts.kind[ts.t_tail == t]
        assert list(kinds) == sorted(kinds)


def test_long_arc_only_where_it_fits():
    ts = expand_time_space(line_road(d_a=3), T=4)
    travel = np.nonzero(ts.kind == TRAVEL)[0]
    # d=3 fits only from t=0 within steps 0..3, once per direction
    assert len(travel) == 2
    assert set(ts.t_tail[travel]) == {0}


def test_wait_and_pair_lookups():
    ts = expand_time_space(line_road(), T=3)
    a = int(ts.wait_arc[0, 1])
    assert ts.kind[a] == WAITING and ts.t_tail[a] == 1 and ts.v_tail[a] == 0
    assert ts.wait_arc[0, 2] == -1
    travel = ts.pair_arc[(ts.node_of("A", 0), ts.node_of("B", 1))]
    assert ts.kind[travel] == TRAVEL and ts.energy[travel] == 5


def test_parallel_arcs_keep_cheapest_pair():
    road = RoadNetwork(
        nodes=(RoadNode(id="A"), RoadNode(id="B")),
        arcs=(RoadArc(tail="A", head="B", e_a=5), RoadArc(tail="A", head="B", e_a=2, directed=True)),
    )
    ts = expand_time_space(road, T=2)
    assert ts.num_arcs == 2 + 3
    a = ts.pair_arc[(ts.node_of("A", 0), ts.node_of("B", 1))]
    assert ts.energy[a] == 2


def test_digraph_matches_pairs():
    ts = expand_time_space(line_road(), T=4)
    g = ts.to_digraph()
    assert g.number_of_nodes() == ts.num_nodes
    assert g.number_of_edges() == len(ts.pair_arc)
    assert g.edges[(0, 0), (1, 1)]["energy"] == 5


def test_arc_count_formula_on_random_roads():
    rng = np.random.default_rng(7)
    for _ in range(100):
        road = random_road(rng, max_nodes=8)
        T = int(rng.integers(1, 9))
        ts = expand_time_space(road, T)
        travel = sum(max(0, T - arc.d_a) for arc in road.directed_arcs)
        assert int((ts.kind == WAITING).sum()) == len(road.nodes) * (T - 1)
        assert int((ts.kind == TRAVEL).sum()) == travel
        assert (ts.t_head > ts.t_tail).all()
