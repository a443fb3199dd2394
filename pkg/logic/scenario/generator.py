# logic/scenario/generator.py
from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from common.errors import GenerationError
from common.util.app_logger import AppLogger
from logic.network.labels import min_energy_backward, min_energy_forward
from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.network.time_space import TimeSpaceNetwork, expand_time_space
from logic.scenario.models import Ev, GeneratorConfig, Scenario

logger = AppLogger.get_logger(__name__)


def _topology(config: GeneratorConfig, rng: np.random.Generator) -> nx.Graph:
    n = config.nodes
    if config.topology == "complete":
        return nx.complete_graph(n)
    if config.topology == "ring":
        return nx.cycle_graph(n) if n > 2 else nx.path_graph(n)
    if config.topology == "grid":
        cols = max(1, math.ceil(math.sqrt(n)))
        g = nx.grid_2d_graph(math.ceil(n / cols), cols)
        g = nx.convert_node_labels_to_integers(g, ordering="sorted")
        # a row-major prefix of a grid stays connected
        return g.subgraph(range(n)).copy()
    return _bounded_geometric(n, config.max_degree, rng)


def _bounded_geometric(n: int, max_degree: int, rng: np.random.Generator) -> nx.Graph:
    """Shortest-first edges under a degree bound, then bridges between components."""
    pos = rng.random((n, 2))
    g = nx.Graph()
    g.add_nodes_from(range(n))
    pairs = sorted(
        ((float(np.hypot(*(pos[u] - pos[w]))), u, w) for u in range(n) for w in range(u + 1, n))
    )
    radius = math.sqrt(2.0 * max_degree / max(n, 1))
    for dist, u, w in pairs:
        if dist > radius:
            break
        if g.degree(u) < max_degree and g.degree(w) < max_degree:
            g.add_edge(u, w)
    while not nx.is_connected(g):
        comps = [sorted(c) for c in nx.connected_components(g)]
        first = set(comps[0])
        _, u, w = min(
            (d, u, w) for d, u, w in pairs if (u in first) != (w in first)
        )
        g.add_edge(u, w)
    return g


def _road(config: GeneratorConfig, rng: np.random.Generator) -> Tuple[RoadNetwork, Dict[str, int]]:
    g = _topology(config, rng)
    n = config.nodes
    order = rng.permutation(n)
    n_meeting = int(round(config.meeting_fraction * n))
    if config.needy > 0:
        n_meeting = max(1, n_meeting)
    n_meeting = min(n_meeting, n)
    n_parking = min(config.parking, n - n_meeting)
    kinds = ["plain"] * n
    for v in order[:n_meeting]:
        kinds[int(v)] = "meeting"
    for v in order[n_meeting:n_meeting + n_parking]:
        kinds[int(v)] = "parking"

    lo_e, hi_e = config.energy_range
    lo_d, hi_d = config.duration_range
    arcs = [
        RoadArc(
            tail=f"v{u}",
            head=f"v{w}",
            e_a=int(rng.integers(lo_e, hi_e + 1)),
            d_a=int(rng.integers(lo_d, hi_d + 1)),
        )
        for u, w in sorted(tuple(sorted(e)) for e in g.edges())
    ]
    nodes = tuple(RoadNode(id=f"v{v}", kind=kinds[v]) for v in range(n))
    lo_p, hi_p = config.parking_rate
    e_p = {node.id: int(rng.integers(lo_p, hi_p + 1)) for node in nodes if node.kind == "parking"}
    return RoadNetwork(nodes=nodes, arcs=tuple(arcs)), e_p


def _rendezvous(ts: TimeSpaceNetwork, meeting: List[int], helper: Tuple[str, str], needy: Tuple[str, str],
                needy_soc: int, rate: int) -> Optional[Tuple[int, int]]:
    """
    Least helper charge with which `helper` can top up `needy` at some meeting point
    for k steps and both still arrive, as (helper SOC, needy peak SOC). None if no
    meeting point and schedule work at any charge.
    """
    if not meeting or ts.T < 2:
        return None
    fh = min_energy_forward(ts, helper[0]).values[meeting]
    bh = min_energy_backward(ts, helper[1]).values[meeting]
    fn = min_energy_forward(ts, needy[0]).values[meeting]
    bn = min_energy_backward(ts, needy[1]).values[meeting]
    t0, t1 = np.triu_indices(ts.T, k=1)
    given = (t1 - t0) * rate
    res_n = needy_soc - fn[:, t0]
    need_h = fh[:, t0] + given + bh[:, t1]
    ok = (res_n >= 0) & (res_n + given >= bn[:, t1]) & np.isfinite(need_h)
    if not ok.any():
        return None
    need_h = np.where(ok, need_h, np.inf)
    row, col = np.unravel_index(int(np.argmin(need_h)), need_h.shape)
    return int(need_h[row, col]), int(res_n[row, col] + given[col])


def _match(ts: TimeSpaceNetwork, meeting: List[int], helpers: List[dict], order: List[int],
           needy: Tuple[str, str], needy_soc: int) -> Optional[Tuple[int, Tuple[int, int]]]:
    """First helper in `order` that can meet the needy EV, with its rendezvous charges."""
    for h in order:
        partner = helpers[h]
        meet = _rendezvous(ts, meeting, (partner["s_i"], partner["f_i"]), needy, needy_soc, partner["e_i"])
        if meet is not None:
            return h, meet
    return None


def generate(config: GeneratorConfig) -> Scenario:
    """
    Seeded scenario with exactly `helpers` EVs that reach their destination unaided
    and exactly `needy` EVs that do not.

    Each needy EV is paired with a helper, unpaired helpers first: the helper is
    charged enough to meet it at a meeting point and hand over what it lacks. Needy
    draws are retried until some helper can; past the retry bound the last draw is
    kept unpaired.
    """
    if config.needy > 0 and config.meeting_fraction == 0 and config.parking == 0:
        raise GenerationError("needy EVs requested but the configuration allows no meeting point")

    rng = np.random.default_rng(config.seed)
    road, e_p = _road(config, rng)
    ts = expand_time_space(road, config.T)
    ids = road.node_ids
    meeting = [road.index[m] for m in road.meeting_points]

    def draw(needy: bool) -> Tuple[str, str, int]:
        for _ in range(config.max_retries):
            s, f = (rng.choice(len(ids), size=2, replace=False) if len(ids) > 1 else (0, 0))
            cost = min_energy_forward(ts, ids[s]).at(ids[f], config.T - 1)
            if not math.isfinite(cost):
                continue
            if needy and cost < 1:
                continue
            return ids[s], ids[f], int(cost)
        raise GenerationError(
            f"could not place a {'needy' if needy else 'helper'} EV after {config.max_retries} draws"
        )

    lo_r, hi_r = config.charge_rate
    surplus = config.helper_surplus
    helpers: List[dict] = []
    for k in range(config.helpers):
        s, f, cost = draw(needy=False)
        helpers.append(dict(id=f"h{k}", s_i=s, f_i=f, SOC_i=cost + surplus,
                            e_i=int(rng.integers(lo_r, hi_r + 1))))

    needy: List[dict] = []
    paired: set = set()
    for k in range(config.needy):
        order = sorted(range(len(helpers)), key=lambda h: (h in paired, (h - k) % len(helpers)))
        for _ in range(config.max_retries):
            s, f, cost = draw(needy=True)
            soc = int(rng.integers(0, cost))
            peak = cost + 2 * surplus
            match = _match(ts, meeting, helpers, order, (s, f), soc)
            if match is not None:
                h, (helper_soc, needy_peak) = match
                helpers[h]["SOC_i"] = max(helpers[h]["SOC_i"], helper_soc)
                peak = max(peak, needy_peak)
                paired.add(h)
                break
            if not helpers:
                break
        else:
            logger.warning("needy_unpaired", extra={"seed": config.seed, "ev": f"n{k}"})
        needy.append(dict(id=f"n{k}", s_i=s, f_i=f, SOC_i=soc, MAXSOC_i=peak,
                          e_i=int(rng.integers(lo_r, hi_r + 1))))

    evs = tuple(Ev(MAXSOC_i=h["SOC_i"] + surplus, **h) for h in helpers) + tuple(Ev(**n) for n in needy)
    scenario = Scenario(road=road, evs=evs, e_p=e_p, T=config.T)
    logger.debug("scenario_generated", extra={"seed": config.seed, "nodes": config.nodes,
                                              "evs": len(evs), "T": config.T})
    return scenario
