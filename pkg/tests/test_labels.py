# tests/test_labels.py
import numpy as np

from logic.network.labels import (
    can_reach_direct,
    min_energy_backward,
    min_energy_forward,
    warm_labels,
)
from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.network.time_space import expand_time_space
from logic.reduction.cnf import CnfFormula
from logic.reduction.reduction import reduce_to_v2vc
from logic.scenario.models import Ev
from tests.conftest import line_road, random_road


def test_forward_origin_is_zero_and_single_arc():
    ts = expand_time_space(line_road(e_a=5), T=4)
    fwd = min_energy_forward(ts, "A")
    assert fwd.at("A", 0) == 0
    assert fwd.at("B", 1) == 5
    assert fwd.at("A", 3) == 0
    # B cannot be reached at t=0
    assert not fwd.reachable("B", 0)


def test_backward_sink_and_waiting_at_destination():
    T = 5
    ts = expand_time_space(line_road(e_a=5), T=T)
    bwd = min_energy_backward(ts, "B")
    assert bwd.at("B", T - 1) == 0
    assert all(bwd.at("B", t) == 0 for t in range(T))
    assert bwd.at("A", T - 2) == 5
    assert not bwd.reachable("A", T - 1)


def test_labels_prefer_cheaper_detour():
    road = RoadNetwork(
        nodes=tuple(RoadNode(id=c) for c in "ABC"),
        arcs=(RoadArc(tail="A", head="C", e_a=10), RoadArc(tail="A", head="B", e_a=1),
              RoadArc(tail="B", head="C", e_a=2)),
    )
    ts = expand_time_space(road, T=4)
    fwd = min_energy_forward(ts, "A")
    assert fwd.at("C", 1) == 10
    assert fwd.at("C", 2) == 3


def test_arcs_to_rebuilds_a_min_energy_path_in_time_order():
    road = RoadNetwork(
        nodes=tuple(RoadNode(id=c) for c in "ABC"),
        arcs=(RoadArc(tail="A", head="C", e_a=10), RoadArc(tail="A", head="B", e_a=1),
              RoadArc(tail="B", head="C", e_a=2)),
    )
    ts = expand_time_space(road, T=5)
    c = road.index["C"]
    for table in (min_energy_forward(ts, "A"), min_energy_backward(ts, "C")):
        v, t = (c, 4) if table.direction == "forward" else (road.index["A"], 0)
        arcs = table.arcs_to(v, t)
        assert list(ts.t_tail[arcs]) == sorted(ts.t_tail[arcs])
        assert int(ts.energy[arcs].sum()) == 3
        # consecutive arcs chain head to tail
        assert all(ts.head[a] == ts.tail[b] for a, b in zip(arcs, arcs[1:]))


def test_warm_labels_fill_the_cache():
    ts = expand_time_space(line_road(), T=3)
    warm_labels(ts, ["A", "B"], ["A", "B"])
    assert ("fwd", ts.node_of("A", 0)) in ts._cache
    assert ("bwd", ts.node_of("B", 2)) in ts._cache
    np.testing.assert_array_equal(min_energy_forward(ts, "B").values[1], [0, 0, 0])


def test_can_reach_direct():
    road = line_road(e_a=5)
    assert can_reach_direct(road, 10, Ev(id="x", s_i="A", f_i="A", SOC_i=0, MAXSOC_i=1))
    assert not can_reach_direct(road, 10, Ev(id="x", s_i="A", f_i="B", SOC_i=4, MAXSOC_i=9))
    assert can_reach_direct(road, 2, Ev(id="x", s_i="A", f_i="B", SOC_i=5, MAXSOC_i=9))


def test_reduced_instance_label():
    formula = CnfFormula(n=3, clauses=((1,), (2, 3), (-2, -3), (1, -2, 3)))
    sc = reduce_to_v2vc(formula).scenario
    assert min_energy_forward(sc.ts, "s1").at("true1", 1) == 1


def _path_energies(ts, start):
    """Every time-space path from `start` (the empty one included) as (end node, energy)."""
    stack = [(start, 0)]
    while stack:
        node, energy = stack.pop()
        yield node, energy
        for a in ts.out_arcs[node]:
            stack.append((int(ts.head[a]), energy + int(ts.energy[a])))


def _random_network(seed):
    rng = np.random.default_rng(seed)
    road = random_road(rng, max_nodes=5, max_duration=2)
    return expand_time_space(road, int(rng.integers(2, 6))), rng


def test_labels_match_path_enumeration():
    for seed in range(20):
        ts, rng = _random_network(seed)
        ids = ts.road.node_ids
        origin, sink = ids[int(rng.integers(len(ids)))], ids[int(rng.integers(len(ids)))]

        forward = np.full(ts.num_nodes, np.inf)
        for node, energy in _path_energies(ts, ts.node_of(origin, 0)):
            forward[node] = min(forward[node], energy)
        np.testing.assert_array_equal(min_energy_forward(ts, origin).values.ravel(), forward)

        target = ts.node_of(sink, ts.T - 1)
        backward = np.full(ts.num_nodes, np.inf)
        for start in range(ts.num_nodes):
            for node, energy in _path_energies(ts, start):
                if node == target:
                    backward[start] = min(backward[start], energy)
        np.testing.assert_array_equal(min_energy_backward(ts, sink).values.ravel(), backward)


def test_labels_are_relaxed_on_every_arc():
    for seed in range(50):
        ts, rng = _random_network(100 + seed)
        v = ts.road.node_ids[int(rng.integers(ts.n_road))]
        fwd = min_energy_forward(ts, v).values.ravel()
        bwd = min_energy_backward(ts, v).values.ravel()
        tail, head, energy = ts.tail, ts.head, ts.energy
        reached = np.isfinite(fwd[tail])
        assert (fwd[head][reached] <= fwd[tail][reached] + energy[reached]).all()
        reached = np.isfinite(bwd[head])
        assert (bwd[tail][reached] <= bwd[head][reached] + energy[reached]).all()
