# logic/scenario/scenario_io.py
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Union

from pydantic import BaseModel, ValidationError

from common.errors import ScenarioError
from logic.network.road_network import RoadArc, RoadNetwork, RoadNode
from logic.scenario.models import Ev, Scenario


class ScenarioDocument(BaseModel):
    """On-disk layout; see docs/scenario_schema.md."""

    nodes: List[RoadNode]
    arcs: List[RoadArc] = []
    evs: List[Ev]
    e_p: Dict[str, int] = {}
    T: int


def to_document(scenario: Scenario) -> ScenarioDocument:
    return ScenarioDocument(
        nodes=list(scenario.road.nodes),
        arcs=list(scenario.road.arcs),
        evs=list(scenario.evs),
        e_p=dict(sorted(scenario.e_p.items())),
        T=scenario.T,
    )


def from_document(doc: ScenarioDocument) -> Scenario:
    return Scenario(
        road=RoadNetwork(nodes=tuple(doc.nodes), arcs=tuple(doc.arcs)),
        evs=tuple(doc.evs),
        e_p=dict(doc.e_p),
        T=doc.T,
    )


def dumps(scenario: Scenario) -> str:
    return to_document(scenario).model_dump_json(indent=2)


def loads(text: Union[str, bytes]) -> Scenario:
    try:
        return from_document(ScenarioDocument.model_validate_json(text))
    except ValidationError as ex:
        raise ScenarioError(f"malformed scenario document: {ex.error_count()} error(s): "
                            f"{ex.errors()[0]['msg']}") from ex


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(scenario), encoding="utf-8")
    return path


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    return loads(path.read_text(encoding="utf-8"))
