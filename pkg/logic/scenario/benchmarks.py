# logic/scenario/benchmarks.py
from __future__ import annotations

from typing import Dict, List, Tuple

from logic.scenario.models import GeneratorConfig

# id: (helpers, needy, nodes, T)
PRESET_SIZES: Dict[str, Tuple[int, int, int, int]] = {
    "B1": (1, 1, 20, 40),
    "B2": (2, 1, 20, 40),
    "B3": (2, 2, 20, 40),
    "B4": (4, 2, 20, 40),
    "B5": (6, 3, 20, 40),
    "B6": (8, 4, 20, 40),
    "B7": (10, 5, 20, 40),
    "B8": (20, 10, 40, 80),
    "B9": (40, 20, 80, 160),
    "B10": (60, 30, 120, 240),
    "B11": (80, 40, 160, 320),
    "Q1": (1, 1, 2, 10),
    "Q2": (2, 1, 3, 10),
    "Q3": (3, 2, 5, 10),
    "Q4": (4, 2, 6, 10),
    "Q5": (5, 3, 8, 10),
    "Q6": (6, 3, 9, 10),
}

RANDOM_SIZES: List[int] = list(range(15, 121, 3))      # 36 fleet sizes
RANDOM_SEEDS: List[int] = [0, 1, 2, 3, 4]
RANDOM_T = 40


def _preset(preset_id: str, seed: int = 0) -> GeneratorConfig:
    helpers, needy, nodes, T = PRESET_SIZES[preset_id]
    if preset_id.startswith("Q"):
        # quality presets: every node is a meeting point, unit durations
        return GeneratorConfig(helpers=helpers, needy=needy, nodes=nodes, T=T,
                               meeting_fraction=1.0, duration_range=(1, 1), seed=seed)
    return GeneratorConfig(helpers=helpers, needy=needy, nodes=nodes, T=T, seed=seed)


def benchmark_suite() -> List[Tuple[str, GeneratorConfig]]:
    """Presets B1-B11 and Q1-Q6 with their published fleet, node and horizon sizes."""
    return [(preset_id, _preset(preset_id)) for preset_id in PRESET_SIZES]


def lookup(preset_id: str) -> GeneratorConfig:
    return dict(benchmark_suite())[preset_id]


def random_suite(seeds: List[int] = RANDOM_SEEDS) -> List[Tuple[str, GeneratorConfig]]:
    """36 fleet sizes from 15 to 120 EVs, helper:needy = 2:1, each under every seed."""
    out: List[Tuple[str, GeneratorConfig]] = []
    for size in RANDOM_SIZES:
        needy = size // 3
        nodes = size // 2 + 10
        for seed in seeds:
            out.append((
                f"R{size}",
                GeneratorConfig(helpers=size - needy, needy=needy, nodes=nodes, T=RANDOM_T,
                                meeting_fraction=0.2, seed=seed),
            ))
    return out


def suite(name: str, seeds: List[int] = RANDOM_SEEDS) -> List[Tuple[str, GeneratorConfig]]:
    if name == "random":
        return random_suite(seeds)
    presets = [(pid, cfg) for pid, cfg in benchmark_suite() if pid.startswith(name)]
    if not presets:
        raise ValueError(f"unknown suite {name!r}; expected B, Q or random")
    return [(pid, cfg.with_seed(seed)) for pid, cfg in presets for seed in seeds]


