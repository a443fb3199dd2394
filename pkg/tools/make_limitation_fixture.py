# tools/make_limitation_fixture.py
"""
Writes input/limitation.json: a three-EV chain that one-action-per-EV cannot solve.

A waits at M1 with spare energy, B must pass M1 and M2, C starts empty at M2.
The only feasible plan has A charge B at M1, then B carry part of it to M2 and
charge C there, so B receives and later gives.
"""
import argparse
from pathlib import Path

from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.scenario.models import Ev, Scenario
from logic.scenario.scenario_io import save_scenario

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "input" / "limitation.json"


def limitation_scenario() -> Scenario:
    nodes = (
        RoadNode(id="M1", kind="meeting"),
        RoadNode(id="M2", kind="meeting"),
        RoadNode(id="FA"),
        RoadNode(id="FB"),
        RoadNode(id="FC"),
    )
    arcs = tuple(
        RoadArc(tail=tail, head=head, e_a=1, d_a=1, directed=True)
        for tail, head in (("M1", "FA"), ("M1", "M2"), ("M2", "FB"), ("M2", "FC"))
    )
    evs = (
        Ev(id="A", s_i="M1", f_i="FA", SOC_i=4, MAXSOC_i=10),
        Ev(id="B", s_i="M1", f_i="FB", SOC_i=0, MAXSOC_i=10),
        Ev(id="C", s_i="M2", f_i="FC", SOC_i=0, MAXSOC_i=10),
    )
    return Scenario(road=RoadNetwork(nodes=nodes, arcs=arcs), evs=evs, T=8)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="write the limitation fixture")
    parser.add_argument("--out", default=str(DEFAULT_OUT))
    args = parser.parse_args()
    print(save_scenario(limitation_scenario(), args.out))
