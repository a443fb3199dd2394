# tests/test_limitation.py
"""The three-EV chain: exact finds a relay, one action per EV cannot."""
import numpy as np
import pytest

from logic.heuristics.rv2vc.runner import solve_rv2vc
from logic.model.ip_builder import build_ip
from logic.model.plan import decode_solution
from logic.scenario.scenario_io import dumps
from logic.solvers.branch_and_bound import solve_bb
from logic.solvers.brute_force import BruteCaps, brute_force
from logic.solvers.milp_solver import solve_milp
from logic.solvers.outcome import SolveStatus
from tools.make_limitation_fixture import limitation_scenario


def test_tool_writes_the_checked_in_fixture(limitation):
    assert limitation_scenario() == limitation
    assert dumps(limitation_scenario()) == dumps(limitation)


def test_exact_relays_through_b(limitation):
    instance = build_ip(limitation)
    outcome = solve_bb(instance)
    assert outcome.status is SolveStatus.OPTIMAL
    assert outcome.objective == 4
    assert solve_milp(instance).objective == 4

    plan = decode_solution(instance, outcome.x)
    b = limitation.ev_index["B"]
    assert any(r == b for r, _, _, _ in plan.v2vc)
    assert any(g == b for _, g, _, _ in plan.v2vc)

    soc = plan.soc_series(limitation)[b]
    peak = int(np.argmax(soc))
    assert soc[0] == 0 and soc[peak] == 3 and soc[-1] == 0
    assert (np.diff(soc[:peak + 1]) >= 0).all()
    assert (np.diff(soc[peak:]) <= 0).all()


def test_rv2vc_cannot_serve_c(limitation):
    run = solve_rv2vc(limitation, build_ip(limitation))
    assert run.graph.helpers == ("A",)
    assert run.graph.degree("C") == 0
    assert len(run.graph.edges) == 2
    assert run.outcome.status is SolveStatus.INFEASIBLE
    assert "C" in run.selection.reason


@pytest.mark.slow
def test_brute_force_agrees_on_the_relay(limitation):
    outcome = brute_force(limitation, caps=BruteCaps(paths_per_ev=5_000, schedules=20_000_000))
    assert outcome.status is SolveStatus.OPTIMAL
    assert outcome.objective == 4
