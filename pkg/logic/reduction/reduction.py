# logic/reduction/reduction.py
"""3SAT formula -> V2VC scenario whose feasibility equals satisfiability."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from common.util.app_logger import AppLogger
from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.reduction.cnf import CnfFormula
from logic.scenario.models import Ev, Scenario

logger = AppLogger.get_logger(__name__)


def atom_nodes(i: int) -> Tuple[str, str, str]:
    return f"s{i}", f"true{i}", f"false{i}"


def clause_nodes(j: int) -> Tuple[str, str]:
    return f"sat{j}", f"f{j}"


def atom_ev(i: int, o: int) -> str:
    return f"v{i}_{o}"


def clause_ev(j: int) -> str:
    return f"vsat{j}"


@dataclass(frozen=True)
class ReducedInstance:
    formula: CnfFormula
    scenario: Scenario
    atoms: Dict[int, Tuple[str, str, str]]          # atom -> (s_i, true_i, false_i)
    clauses: Dict[int, Tuple[str, str]]             # clause -> (sat_j, f_j)
    roles: Dict[str, Tuple]                         # EV id -> ("atom", i, o, j, positive) | ("clause", j)
    k: Tuple[int, ...]
    K: int

    def atom_evs(self, i: int) -> List[str]:
        return [atom_ev(i, o) for o in range(1, self.k[i - 1] + 1)]


def reduce_to_v2vc(formula: CnfFormula) -> ReducedInstance:
    n, m = formula.n, formula.m
    occurrences = {i: formula.occurrences(i) for i in range(1, n + 1)}
    k = tuple(len(occurrences[i]) for i in range(1, n + 1))
    K = max(k, default=0)
    T = 3 * K + 6
    maxsoc = max(3 * m + 1, 3 * K + 1)

    nodes: List[RoadNode] = []
    arcs: List[RoadArc] = []
    seen = set()

    def arc(tail: str, head: str) -> None:
        if (tail, head) not in seen:
            seen.add((tail, head))
            arcs.append(RoadArc(tail=tail, head=head, e_a=1, d_a=1, directed=True))

    atoms = {i: atom_nodes(i) for i in range(1, n + 1)}
    clauses = {j: clause_nodes(j) for j in range(1, m + 1)}
    for i, (s, tru, fal) in atoms.items():
        nodes += [RoadNode(id=s), RoadNode(id=tru, kind="meeting"), RoadNode(id=fal, kind="meeting")]
    for j, (sat, f) in clauses.items():
        nodes += [RoadNode(id=sat, kind="meeting"), RoadNode(id=f)]

    for j, (sat, f) in clauses.items():
        arc(sat, f)
    for i, (s, tru, fal) in atoms.items():
        arc(s, tru)
        arc(s, fal)
        for j, positive in occurrences[i]:
            sat, f = clauses[j]
            arc(tru, f)
            arc(fal, f)
            arc(tru if positive else fal, sat)

    evs: List[Ev] = []
    roles: Dict[str, Tuple] = {}
    for i in range(1, n + 1):
        s = atoms[i][0]
        for o, (j, positive) in enumerate(occurrences[i], start=1):
            soc = 3 * k[i - 1] + 1 if o == 1 else 1
            evs.append(Ev(id=atom_ev(i, o), s_i=s, f_i=clauses[j][1], SOC_i=soc, MAXSOC_i=maxsoc, e_i=1))
            roles[atom_ev(i, o)] = ("atom", i, o, j, positive)
    for j, (sat, f) in clauses.items():
        evs.append(Ev(id=clause_ev(j), s_i=sat, f_i=f, SOC_i=0, MAXSOC_i=maxsoc, e_i=1))
        roles[clause_ev(j)] = ("clause", j)

    scenario = Scenario(road=RoadNetwork(nodes=tuple(nodes), arcs=tuple(arcs)), evs=tuple(evs), T=T)
    logger.info("reduced", extra={"atoms": n, "clauses": m, "nodes": len(nodes),
                                  "evs": len(evs), "T": T})
    return ReducedInstance(formula=formula, scenario=scenario, atoms=atoms, clauses=clauses,
                           roles=roles, k=k, K=K)
