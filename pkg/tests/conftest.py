# tests/conftest.py
from pathlib import Path
from typing import Sequence

import numpy as np
import pytest

from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.scenario.models import Ev, Scenario
from logic.scenario.scenario_io import load_scenario

ROOT = Path(__file__).resolve().parent.parent
INPUT = ROOT / "input"


def line_road(e_a: int = 5, d_a: int = 1, kinds: Sequence[str] = ("plain", "plain"),
              directed: bool = False) -> RoadNetwork:
    """Two nodes A and B joined by one road."""
    return RoadNetwork(
        nodes=(RoadNode(id="A", kind=kinds[0]), RoadNode(id="B", kind=kinds[1])),
        arcs=(RoadArc(tail="A", head="B", e_a=e_a, d_a=d_a, directed=directed),),
    )


def random_road(rng: np.random.Generator, max_nodes: int = 6, max_duration: int = 3) -> RoadNetwork:
    """Small random map: a mix of directed and undirected arcs, parallel arcs allowed."""
    n = int(rng.integers(2, max_nodes + 1))
    arcs = []
    for _ in range(int(rng.integers(1, 2 * n + 1))):
        u, w = rng.choice(n, size=2, replace=False)
        arcs.append(RoadArc(tail=f"v{u}", head=f"v{w}", e_a=int(rng.integers(0, 5)),
                            d_a=int(rng.integers(1, max_duration + 1)), directed=bool(rng.random() < 0.3)))
    return RoadNetwork(nodes=tuple(RoadNode(id=f"v{v}") for v in range(n)), arcs=tuple(arcs))


def single_ev(soc: int, T: int, e_a: int = 5, maxsoc: int = 20) -> Scenario:
    return Scenario(road=line_road(e_a=e_a), T=T,
                    evs=(Ev(id="a", s_i="A", f_i="B", SOC_i=soc, MAXSOC_i=maxsoc),))


def toy() -> Scenario:
    """1 EV, 2 plain nodes, one unit edge, T=2: the 7 x 7 model."""
    return single_ev(soc=1, T=2, e_a=1)


@pytest.fixture
def q1() -> Scenario:
    return load_scenario(INPUT / "q1.json")


@pytest.fixture
def limitation() -> Scenario:
    return load_scenario(INPUT / "limitation.json")


def star(T: int = 6) -> Scenario:
    """Helper h and needy n meet at hub M; n ends at N, h at H."""
    road = RoadNetwork(
        nodes=(RoadNode(id="M", kind="meeting"), RoadNode(id="H"), RoadNode(id="N"),
               RoadNode(id="P", kind="parking")),
        arcs=(RoadArc(tail="M", head="H", e_a=1), RoadArc(tail="M", head="N", e_a=2),
              RoadArc(tail="M", head="P", e_a=1)),
    )
    evs = (Ev(id="h", s_i="M", f_i="H", SOC_i=4, MAXSOC_i=6),
           Ev(id="n", s_i="M", f_i="N", SOC_i=1, MAXSOC_i=6))
    return Scenario(road=road, evs=evs, e_p={"P": 2}, T=T)
