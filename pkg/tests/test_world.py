from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from officelab.config import dump_config, load_config, parse_config
from officelab.errors import ParseError, ValidationError
from officelab.world import (
    AgentProfile,
    FloorPlan,
    StayProbs,
    _extended_kernel,
    shortest_path,
    stationary_distribution,
)

from conftest import line_plan, minimal_config_doc, uniform_agent

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


# --- config loading ---------------------------------------------------------


def test_minimal_config_round_trips_stated_fields(tmp_path):
    import json

    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(minimal_config_doc()))
    cfg = load_config(path)
    assert cfg.floor_plan.locations == (0, 1)
    assert cfg.floor_plan.adjacency == frozenset({(0, 1)})
    assert cfg.agents[0].home == 0
    assert cfg.agents[0].destinations == {0: 0.5, 1: 0.5}
    assert cfg.ticks_per_day == 10
    assert cfg.days == 1
    assert cfg.rng_seed == 123


def test_unknown_adjacency_location_rejected():
    doc = minimal_config_doc()
    doc["floor_plan"]["adjacency"].append([0, 99])
    with pytest.raises(ValidationError, match="unknown location 99"):
        parse_config(doc)


def test_full_scale_config_loads_with_50_locations():
    cfg = load_config(CONFIGS / "full_scale.json")
    assert cfg.floor_plan.n == 50
    assert len(cfg.sensors) == 120
    assert sum(1 for s in cfg.sensors if s.kind == "camera") == 30
    assert sum(1 for s in cfg.sensors if s.kind == "tag_reader") == 90


def test_malformed_json_is_a_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_config(path)


@pytest.mark.parametrize(
    "mutate,match",
    [
        (lambda d: d["floor_plan"]["adjacency"].append([1, 1]), "self-edge"),
        (lambda d: d["floor_plan"].update(locations=[0, 1, 5]), "dense"),
        (lambda d: d["floor_plan"]["tags"].update({"1": "ballroom"}), "unknown tag"),
        (lambda d: d["agents"][0].update(destinations={"0": 0.5, "1": 0.48}), "sum to 0.98"),
        (lambda d: d["agents"][0].update(destinations={}), "no destination"),
        (lambda d: d["agents"][0].update(delta_p=1.5), "delta_p"),
        (lambda d: d["agents"].append(dict(d["agents"][0])), "duplicate agent id"),
        (lambda d: d.update(ticks_per_day=0), "ticks_per_day"),
        (lambda d: d.update(days=0), "days"),
        (lambda d: d["floor_plan"]["home_of"].update({"1": [7]}), "unknown agent 7"),
        (lambda d: d["agents"][0]["schedule"].append({"window": [5, 5], "target": 0, "probability": 1}), "start < end"),
        (lambda d: d["agents"][0]["stay_prob"].update(by_location={"0": 0.2}, default=0.5), "below the default"),
    ],
)
def test_invariant_violations_are_named(mutate, match):
    doc = minimal_config_doc()
    mutate(doc)
    with pytest.raises(ValidationError, match=match):
        parse_config(doc)


def test_disconnected_plan_rejected():
    doc = minimal_config_doc()
    doc["floor_plan"]["locations"] = [0, 1, 2]
    with pytest.raises(ValidationError, match="not connected"):
        parse_config(doc)


def test_agent_owning_two_homes_rejected():
    doc = minimal_config_doc()
    doc["floor_plan"]["home_of"] = {"0": [0], "1": [0]}
    with pytest.raises(ValidationError, match="more than one home"):
        parse_config(doc)


def test_accepted_config_reserializes_identically(tmp_path):
    for name in ("demo.json", "full_scale.json"):
        cfg = load_config(CONFIGS / name)
        assert parse_config(dump_config(cfg)) == cfg


@st.composite
def config_docs(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    perm = draw(st.permutations(range(n)))
    edges = sorted({tuple(sorted((a, b))) for a, b in zip(perm, perm[1:])})
    n_agents = draw(st.integers(min_value=1, max_value=3))
    tag_pool = ["office", "meeting_room", "printer", "corridor", "lunch_area", "other"]
    tags = {str(x): tag_pool[draw(st.integers(0, 5))] for x in range(n) if draw(st.booleans())}
    agents = []
    homes: dict[int, list[int]] = {}
    for aid in range(n_agents):
        home = draw(st.integers(0, n - 1))
        weights = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
        total = sum(weights)
        default = draw(st.floats(0.1, 0.7))
        schedule = []
        if draw(st.booleans()):
            start = draw(st.integers(0, 5))
            schedule.append(
                {
                    "window": [start, start + draw(st.integers(1, 5))],
                    "target": draw(st.integers(0, n - 1)),
                    "probability": draw(st.floats(0.0, 1.0)),
                    "label": "m",
                    "days": [0] if draw(st.booleans()) else None,
                }
            )
        agents.append(
            {
                "id": aid,
                "home": home,
                "department": draw(st.sampled_from(["Research", "Development", "other"])),
                "stay_prob": {
                    "default": default,
                    "by_location": {str(home): draw(st.floats(default, 1.0))},
                },
                "destinations": {str(x): w / total for x, w in enumerate(weights)},
                "delta_p": draw(st.floats(0.0, 0.5)),
                "schedule": schedule,
            }
        )
        homes.setdefault(home, []).append(aid)
    return {
        "floor_plan": {
            "locations": list(range(n)),
            "adjacency": [list(e) for e in edges],
            "tags": tags,
            "home_of": {str(loc): owners for loc, owners in homes.items()},
        },
        "agents": agents,
        "ticks_per_day": draw(st.integers(1, 50)),
        "days": draw(st.integers(1, 4)),
        "rng_seed": draw(st.integers(0, 2**63 - 1)),
        "fluctuation_rate": draw(st.floats(0.0, 0.3)),
    }


@given(config_docs())
@settings(max_examples=100, deadline=None)
def test_random_accepted_configs_round_trip(doc):
    cfg = parse_config(doc)
    assert parse_config(dump_config(cfg)) == cfg


# --- shortest paths ---------------------------------------------------------


def test_line_graph_unique_path():
    assert shortest_path(line_plan(3), 0, 2) == [0, 1, 2]


def test_identity_path():
    assert shortest_path(line_plan(3), 1, 1) == [1]


def _all_shortest_paths(plan: FloorPlan, src: int, dst: int) -> list[list[int]]:
    """Breadth-first enumeration of every minimum-hop path."""
    frontier = [[src]]
    while frontier:
        done = [p for p in frontier if p[-1] == dst]
        if done:
            return done
        frontier = [p + [y] for p in frontier for y in plan.neighbors[p[-1]] if y not in p]
    return []


def test_cycle_tie_breaks_to_lowest_next_id():
    plan = FloorPlan((0, 1, 2, 3), frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))
    candidates = _all_shortest_paths(plan, 0, 2)
    assert sorted(candidates) == [[0, 1, 2], [0, 3, 2]]
    assert shortest_path(plan, 0, 2) == min(candidates)


@st.composite
def connected_plans(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    perm = draw(st.permutations(range(n)))
    edges = {(min(a, b), max(a, b)) for a, b in zip(perm, perm[1:])}  # spanning path
    extra = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return FloorPlan(tuple(range(n)), frozenset(edges))


@given(connected_plans(), st.data())
@settings(max_examples=150, deadline=None)
def test_shortest_path_is_minimal_against_exhaustive_search(plan, data):
    src = data.draw(st.integers(0, plan.n - 1))
    dst = data.draw(st.integers(0, plan.n - 1))
    path = shortest_path(plan, src, dst)
    assert path[0] == src and path[-1] == dst
    for a, b in zip(path, path[1:]):
        assert (min(a, b), max(a, b)) in plan.adjacency
    # exhaustive simple-path search cannot find anything shorter
    best = min(len(p) for p in _exhaustive_simple_paths(plan, src, dst))
    assert len(path) == best


def _exhaustive_simple_paths(plan, src, dst):
    stack = [[src]]
    out = []
    while stack:
        p = stack.pop()
        if p[-1] == dst:
            out.append(p)
            continue
        for y in plan.neighbors[p[-1]]:
            if y not in p:
                stack.append(p + [y])
    return out


# --- stationary occupancy oracle --------------------------------------------


def test_stationary_absorbing_point_mass():
    plan = line_plan(3)
    prof = uniform_agent(0, 1, 3, stay=1.0)
    pi = stationary_distribution(plan, prof)
    assert np.allclose(pi, [0.0, 1.0, 0.0], atol=1e-12)


def test_stationary_two_symmetric_locations():
    plan = line_plan(2)
    prof = AgentProfile(0, 0, StayProbs(default=0.5), {0: 0.5, 1: 0.5})
    pi = stationary_distribution(plan, prof)
    assert np.allclose(pi, [0.5, 0.5], atol=1e-9)


def _stationary_by_linear_solve(plan, prof, fluctuation_rate=0.0):
    """Independent oracle: solve pi K = pi on the extended chain directly."""
    K, states = _extended_kernel(plan, prof, fluctuation_rate)
    m = len(states)
    A = np.vstack([K.T - np.eye(m), np.ones(m)])
    b = np.zeros(m + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    occ = np.zeros(plan.n)
    for (x, _), mass in zip(states, pi):
        occ[x] += mass
    return occ / occ.sum()


def test_stationary_three_location_chain_matches_linear_solve():
    plan = line_plan(3)
    prof = AgentProfile(
        0, 0, StayProbs(default=0.6, by_location={0: 0.8}), {0: 0.5, 1: 0.2, 2: 0.3}
    )
    pi = stationary_distribution(plan, prof)
    ref = _stationary_by_linear_solve(plan, prof)
    assert np.abs(pi - ref).sum() < 1e-8


def test_stationary_is_a_fixed_point_distribution():
    plan = FloorPlan((0, 1, 2, 3), frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))
    prof = AgentProfile(0, 0, StayProbs(default=0.4), {0: 0.4, 2: 0.6})
    for fluct in (0.0, 0.1):
        K, states = _extended_kernel(plan, prof, fluct)
        # recover the extended fixed point, then check pi K = pi and the projection
        m = len(states)
        A = np.vstack([K.T - np.eye(m), np.ones(m)])
        b = np.zeros(m + 1)
        b[-1] = 1.0
        pi_ext, *_ = np.linalg.lstsq(A, b, rcond=None)
        assert np.abs(pi_ext @ K - pi_ext).sum() < 1e-8
        pi = stationary_distribution(plan, prof, fluctuation_rate=fluct)
        assert abs(pi.sum() - 1.0) < 1e-9
        assert np.abs(pi - _stationary_by_linear_solve(plan, prof, fluct)).sum() < 1e-8
