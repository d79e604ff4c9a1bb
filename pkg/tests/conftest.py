from __future__ import annotations

import pytest

from officelab.config import WorldConfig, parse_config
from officelab.world import AgentProfile, FloorPlan, StayProbs


def line_plan(n: int, tags: dict[int, str] | None = None, home_of=None) -> FloorPlan:
    edges = frozenset((i, i + 1) for i in range(n - 1))
    return FloorPlan(tuple(range(n)), edges, tags or {}, home_of or {})


def uniform_agent(agent_id: int, home: int, n: int, stay: float = 0.5, delta_p: float = 0.0) -> AgentProfile:
    return AgentProfile(
        id=agent_id,
        home=home,
        stay_prob=StayProbs(default=stay),
        destinations={x: 1.0 / n for x in range(n)},
        delta_p=delta_p,
    )


def minimal_config_doc() -> dict:
    return {
        "floor_plan": {
            "locations": [0, 1],
            "adjacency": [[0, 1]],
            "tags": {"0": "office", "1": "corridor"},
            "home_of": {"0": [0]},
        },
        "agents": [
            {
                "id": 0,
                "home": 0,
                "stay_prob": {"default": 0.5, "by_location": {"0": 0.9}},
                "destinations": {"0": 0.5, "1": 0.5},
                "delta_p": 0.0,
                "schedule": [],
            }
        ],
        "ticks_per_day": 10,
        "days": 1,
        "rng_seed": 123,
    }


@pytest.fixture
def minimal_config() -> WorldConfig:
    return parse_config(minimal_config_doc())
