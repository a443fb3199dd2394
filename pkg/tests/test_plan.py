# tests/test_plan.py
import numpy as np
import pytest

from common.errors import ModelError
from logic.model.ip_builder import build_ip
from logic.model.plan import Plan, decode_solution, encode_plan
from logic.verify.verifier import verify_algebraic
from tests.conftest import star


def _star_plan(sc, give_at=(0,)):
    """h gives n one unit per step in `give_at` at M, then both drive to their sinks."""
    ts, index = sc.ts, sc.road.index
    m, h_node, n_node = index["M"], index["H"], index["N"]
    leave = max(give_at) + 1

    def route(dest):
        arcs = [int(ts.wait_arc[m, t]) for t in range(leave)]
        arcs.append(ts.pair_arc[(ts.node(m, leave), ts.node(dest, leave + 1))])
        arcs += [int(ts.wait_arc[dest, t]) for t in range(leave + 1, sc.T - 1)]
        return tuple(arcs)

    return Plan(routes=(route(h_node), route(n_node)),
                v2vc=frozenset((1, 0, m, t) for t in give_at))


def test_encode_closes_every_row():
    sc = star()
    instance = build_ip(sc)
    x = encode_plan(instance, _star_plan(sc))
    assert verify_algebraic(instance, x).accepted


def test_decode_inverts_encode():
    sc = star()
    instance = build_ip(sc)
    plan = _star_plan(sc, give_at=(1, 2))
    assert decode_solution(instance, encode_plan(instance, plan)) == plan


def test_soc_series_and_energy():
    sc = star()
    plan = _star_plan(sc, give_at=(0, 1))
    soc = plan.soc_series(sc)
    # h: 4, gives at t=0 and t=1, drives M->H (1) at t=2
    np.testing.assert_array_equal(soc[0], [4, 3, 2, 1, 1, 1])
    np.testing.assert_array_equal(soc[1], [1, 2, 3, 1, 1, 1])
    assert plan.energy(sc) == 3


def test_to_dict_uses_ids():
    sc = star()
    doc = _star_plan(sc).to_dict(sc)
    assert doc["routes"]["h"][0] == ["M", 0, "M", 1]
    assert doc["v2vc"] == [["n", "h", "M", 0]]
    assert doc["g2vc"] == []


def test_encode_rejects_misfit_plans():
    sc = star()
    instance = build_ip(sc)
    with pytest.raises(ModelError):
        encode_plan(instance, Plan(routes=((),)))
    plan = _star_plan(sc)
    # H is not a meeting point
    bad = Plan(routes=plan.routes, v2vc=frozenset({(1, 0, sc.road.index["H"], 0)}))
    with pytest.raises(ModelError):
        encode_plan(instance, bad)
