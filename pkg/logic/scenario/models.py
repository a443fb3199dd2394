# logic/scenario/models.py
from __future__ import annotations

from functools import cached_property
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from logic.network.road_network import RoadNetwork
from logic.network.time_space import TimeSpaceNetwork, expand_time_space


class Ev(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    s_i: str
    f_i: str
    SOC_i: int
    MAXSOC_i: int
    e_i: int = 1     # energy handed over per step when this EV charges another


class Scenario(BaseModel):
    """Complete parameter set of one problem instance. Immutable."""

    model_config = ConfigDict(frozen=True)

    road: RoadNetwork
    evs: Tuple[Ev, ...]
    e_p: Dict[str, int] = Field(default_factory=dict)
    T: int

    @cached_property
    def ts(self) -> TimeSpaceNetwork:
        return expand_time_space(self.road, self.T)

    @cached_property
    def ev_index(self) -> Dict[str, int]:
        return {ev.id: i for i, ev in enumerate(self.evs)}

    def ev(self, ev_id: str) -> Ev:
        return self.evs[self.ev_index[ev_id]]


Topology = Literal["complete", "ring", "grid", "geometric"]


class GeneratorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    helpers: int = Field(default=1, ge=0)
    needy: int = Field(default=1, ge=0)
    nodes: int = Field(default=10, ge=1)
    T: int = Field(default=10, ge=1)
    meeting_fraction: float = Field(default=0.3, ge=0.0, le=1.0)
    parking: int = Field(default=0, ge=0)
    topology: Topology = "geometric"
    max_degree: int = Field(default=4, ge=1)
    energy_range: Tuple[int, int] = (1, 3)
    duration_range: Tuple[int, int] = (1, 2)
    helper_surplus: int = Field(default=4, ge=0)
    charge_rate: Tuple[int, int] = (1, 2)
    parking_rate: Tuple[int, int] = (1, 2)
    max_retries: int = Field(default=200, ge=1)
    seed: int = 0

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return self.model_copy(update={"seed": seed})


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    field: str
    rule: str
    subject: Optional[str] = None

    def __str__(self) -> str:
        who = f" [{self.subject}]" if self.subject else ""
        return f"{self.field}{who}: {self.rule}"


def violations_text(items: List[Violation]) -> str:
    return "; ".join(str(v) for v in items)
