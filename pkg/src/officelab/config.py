"""World configuration document: schema, validation, round-trip serialization.

One JSON document holds the whole scenario. Required top-level keys:
floor_plan, agents, ticks_per_day, days, rng_seed. Optional keys carry
pipeline settings: fluctuation_rate, sensors, contact_rule, motion_model,
analytics. Ticks are abstract; configs may note a suggested mapping
(1 tick ~ 5 s) but nothing depends on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .contacts import ContactRule
from .errors import ParseError, ValidationError
from .sensors import SENSOR_KINDS, SensorSpec
from .world import LOCATION_TAGS, AgentProfile, FloorPlan, ScheduleEvent, StayProbs

DEST_SUM_TOL = 1e-9


@dataclass(frozen=True)
class AnalyticsSettings:
    baseline_alpha: float = 1.0
    day_alpha: float = 0.0
    min_support: int = 3
    min_len: int = 2
    max_len: int = 5


@dataclass(frozen=True)
class WorldConfig:
    floor_plan: FloorPlan
    agents: tuple[AgentProfile, ...]
    ticks_per_day: int
    days: int
    rng_seed: int
    fluctuation_rate: float = 0.05
    sensors: tuple[SensorSpec, ...] = ()
    contact_rule: ContactRule = field(default_factory=ContactRule)
    motion_model: str = "simulator"
    analytics: AnalyticsSettings = field(default_factory=AnalyticsSettings)


def _prob(value: Any, what: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0.0 <= value <= 1.0:
        raise ValidationError(f"{what} must be a probability in [0,1], got {value!r}")
    return float(value)


def _int_keyed(mapping: dict, what: str) -> dict[int, Any]:
    out = {}
    for k, v in mapping.items():
        try:
            out[int(k)] = v
        except (TypeError, ValueError):
            raise ValidationError(f"{what} has non-integer key {k!r}") from None
    return out


def _parse_floor_plan(doc: dict) -> FloorPlan:
    locations = doc.get("locations")
    if not isinstance(locations, list) or not locations:
        raise ValidationError("floor_plan.locations must be a nonempty list")
    locs = sorted(int(x) for x in locations)
    if locs != list(range(len(locs))):
        raise ValidationError(f"locations must be dense integer ids 0..{len(locs) - 1}")
    known = set(locs)

    edges = set()
    for pair in doc.get("adjacency", []):
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise ValidationError(f"adjacency contains self-edge at location {u}")
        if u not in known or v not in known:
            raise ValidationError(f"adjacency references unknown location {u if u not in known else v}")
        edges.add((min(u, v), max(u, v)))

    tags = {}
    for loc, tag in _int_keyed(doc.get("tags", {}), "floor_plan.tags").items():
        if loc not in known:
            raise ValidationError(f"tags references unknown location {loc}")
        if tag not in LOCATION_TAGS:
            raise ValidationError(f"unknown tag {tag!r} at location {loc}")
        tags[loc] = tag

    home_of = {}
    for loc, owners in _int_keyed(doc.get("home_of", {}), "floor_plan.home_of").items():
        if loc not in known:
            raise ValidationError(f"home_of references unknown location {loc}")
        owner_ids = owners if isinstance(owners, list) else [owners]
        home_of[loc] = tuple(int(a) for a in owner_ids)

    plan = FloorPlan(tuple(locs), frozenset(edges), tags, home_of)
    if plan.n > 1:
        seen = {locs[0]}
        frontier = [locs[0]]
        while frontier:
            x = frontier.pop()
            for y in plan.neighbors[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        if len(seen) != plan.n:
            missing = min(known - seen)
            raise ValidationError(f"floor plan is not connected (location {missing} unreachable)")
    return plan


def _parse_agent(doc: dict, plan: FloorPlan) -> AgentProfile:
    agent_id = int(doc["id"])
    home = int(doc["home"])
    if home not in plan.neighbors:
        raise ValidationError(f"home {home} of agent {agent_id} is not a known location")

    sp = doc.get("stay_prob", {})
    if isinstance(sp, (int, float)):
        sp = {"default": sp}
    by_tag = {}
    for tag, p in sp.get("by_tag", {}).items():
        if tag not in LOCATION_TAGS:
            raise ValidationError(f"stay_prob of agent {agent_id} names unknown tag {tag!r}")
        by_tag[tag] = _prob(p, f"stay_prob.by_tag[{tag}] of agent {agent_id}")
    by_location = {}
    for loc, p in _int_keyed(sp.get("by_location", {}), f"stay_prob.by_location of agent {agent_id}").items():
        if loc not in plan.neighbors:
            raise ValidationError(f"stay_prob of agent {agent_id} references unknown location {loc}")
        by_location[loc] = _prob(p, f"stay_prob.by_location[{loc}] of agent {agent_id}")
    stay = StayProbs(
        default=_prob(sp.get("default", 0.5), f"stay_prob.default of agent {agent_id}"),
        by_tag=by_tag,
        by_location=by_location,
    )

    destinations = {}
    for loc, p in _int_keyed(doc.get("destinations", {}), f"destinations of agent {agent_id}").items():
        if loc not in plan.neighbors:
            raise ValidationError(f"destinations of agent {agent_id} reference unknown location {loc}")
        destinations[loc] = _prob(p, f"destinations[{loc}] of agent {agent_id}")
    if not destinations:
        raise ValidationError(f"agent {agent_id} has no destination distribution")
    total = sum(destinations.values())
    if abs(total - 1.0) > DEST_SUM_TOL:
        raise ValidationError(f"destinations of agent {agent_id} sum to {total:g}")

    schedule = []
    for ev in doc.get("schedule", []):
        window = tuple(int(t) for t in ev["window"])
        if len(window) != 2 or window[0] >= window[1]:
            raise ValidationError(f"schedule window {window} of agent {agent_id} must satisfy start < end")
        if window[0] < 0:
            raise ValidationError(f"schedule window {window} of agent {agent_id} has negative start")
        target = int(ev["target"])
        if target not in plan.neighbors:
            raise ValidationError(f"schedule of agent {agent_id} targets unknown location {target}")
        schedule.append(
            ScheduleEvent(
                window=window,
                target=target,
                probability=_prob(ev.get("probability", 1.0), f"schedule probability of agent {agent_id}"),
                label=str(ev.get("label", "")),
                days=tuple(int(d) for d in ev["days"]) if ev.get("days") is not None else None,
            )
        )

    profile = AgentProfile(
        id=agent_id,
        home=home,
        stay_prob=stay,
        destinations=destinations,
        delta_p=_prob(doc.get("delta_p", 0.0), f"delta_p of agent {agent_id}"),
        schedule=tuple(schedule),
        department=str(doc.get("department", "other")),
    )
    if profile.stay_at(home, plan) < stay.default:
        raise ValidationError(
            f"stay_prob at home of agent {agent_id} ({profile.stay_at(home, plan):g}) "
            f"is below the default ({stay.default:g})"
        )
    return profile


def _parse_sensor(doc: dict, plan: FloorPlan) -> SensorSpec:
    sensor_id = str(doc["id"])
    kind = doc.get("kind", "camera")
    if kind not in SENSOR_KINDS:
        raise ValidationError(f"sensor {sensor_id} has unknown kind {kind!r}")
    coverage = sorted(int(x) for x in doc.get("coverage", []))
    if not coverage:
        raise ValidationError(f"sensor {sensor_id} has empty coverage")
    for loc in coverage:
        if loc not in plan.neighbors:
            raise ValidationError(f"sensor {sensor_id} covers unknown location {loc}")
    return SensorSpec(
        id=sensor_id,
        kind=kind,
        coverage=tuple(coverage),
        p_detect=_prob(doc.get("p_detect", 0.9), f"p_detect of sensor {sensor_id}"),
        p_false_positive=_prob(doc.get("p_false_positive", 0.01), f"p_false_positive of sensor {sensor_id}"),
        p_confuse=_prob(doc.get("p_confuse", 0.05), f"p_confuse of sensor {sensor_id}"),
    )


def parse_config(doc: dict) -> WorldConfig:
    """Validate a config tree; raise ValidationError naming the first violation."""
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a JSON object")
    for key in ("floor_plan", "agents", "ticks_per_day", "days", "rng_seed"):
        if key not in doc:
            raise ValidationError(f"config is missing required key {key!r}")

    plan = _parse_floor_plan(doc["floor_plan"])

    agents = tuple(_parse_agent(a, plan) for a in doc["agents"])
    ids = [a.id for a in agents]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise ValidationError(f"duplicate agent id {dup}")

    by_id = {a.id: a for a in agents}
    owned: dict[int, int] = {}
    for loc, owners in plan.home_of.items():
        for owner in owners:
            if owner not in by_id:
                raise ValidationError(f"home_of[{loc}] names unknown agent {owner}")
            if owner in owned:
                raise ValidationError(f"agent {owner} owns more than one home location")
            owned[owner] = loc
            if by_id[owner].home != loc:
                raise ValidationError(
                    f"home_of[{loc}] names agent {owner} whose home is {by_id[owner].home}"
                )

    ticks_per_day = int(doc["ticks_per_day"])
    days = int(doc["days"])
    if ticks_per_day < 1:
        raise ValidationError(f"ticks_per_day must be >= 1, got {ticks_per_day}")
    if days < 1:
        raise ValidationError(f"days must be >= 1, got {days}")

    sensors = tuple(_parse_sensor(s, plan) for s in doc.get("sensors", []))
    sensor_ids = [s.id for s in sensors]
    if len(set(sensor_ids)) != len(sensor_ids):
        dup = next(s for s in sensor_ids if sensor_ids.count(s) > 1)
        raise ValidationError(f"duplicate sensor id {dup!r}")

    rule_doc = doc.get("contact_rule", {})
    rule = ContactRule(
        min_consecutive_ticks=int(rule_doc.get("min_consecutive_ticks", 10)),
        excluded_tags=frozenset(rule_doc.get("excluded_tags", ("printer",))),
        officemate_exclusion=bool(rule_doc.get("officemate_exclusion", True)),
    )
    if rule.min_consecutive_ticks < 1:
        raise ValidationError("contact_rule.min_consecutive_ticks must be >= 1")
    for tag in rule.excluded_tags:
        if tag not in LOCATION_TAGS:
            raise ValidationError(f"contact_rule excludes unknown tag {tag!r}")

    motion_model = doc.get("motion_model", "simulator")
    if motion_model not in ("simulator", "uniform_adjacent"):
        raise ValidationError(f"unknown motion_model {motion_model!r}")

    an = doc.get("analytics", {})
    analytics = AnalyticsSettings(
        baseline_alpha=float(an.get("baseline_alpha", 1.0)),
        day_alpha=float(an.get("day_alpha", 0.0)),
        min_support=int(an.get("min_support", 3)),
        min_len=int(an.get("min_len", 2)),
        max_len=int(an.get("max_len", 5)),
    )
    if analytics.baseline_alpha < 0 or analytics.day_alpha < 0:
        raise ValidationError("analytics smoothing alphas must be nonnegative")
    if not 2 <= analytics.min_len <= analytics.max_len:
        raise ValidationError("analytics pattern lengths must satisfy 2 <= min_len <= max_len")

    return WorldConfig(
        floor_plan=plan,
        agents=agents,
        ticks_per_day=ticks_per_day,
        days=days,
        rng_seed=int(doc["rng_seed"]),
        fluctuation_rate=_prob(doc.get("fluctuation_rate", 0.05), "fluctuation_rate"),
        sensors=sensors,
        contact_rule=rule,
        motion_model=str(motion_model),
        analytics=analytics,
    )


def load_config(path: str | Path) -> WorldConfig:
    """Load and validate a config file. ParseError on malformed JSON."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed config {path}: {exc}") from exc
    try:
        return parse_config(doc)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"config {path} is structurally invalid: {exc!r}") from exc


def dump_config(config: WorldConfig) -> dict:
    """Config tree that parse_config maps back to an equal WorldConfig."""
    plan = config.floor_plan
    return {
        "floor_plan": {
            "locations": list(plan.locations),
            "adjacency": sorted([u, v] for u, v in plan.adjacency),
            "tags": {str(k): v for k, v in sorted(plan.tags.items())},
            "home_of": {str(k): list(v) for k, v in sorted(plan.home_of.items())},
        },
        "agents": [
            {
                "id": a.id,
                "home": a.home,
                "department": a.department,
                "stay_prob": {
                    "default": a.stay_prob.default,
                    "by_tag": dict(sorted(a.stay_prob.by_tag.items())),
                    "by_location": {str(k): v for k, v in sorted(a.stay_prob.by_location.items())},
                },
                "destinations": {str(k): v for k, v in sorted(a.destinations.items())},
                "delta_p": a.delta_p,
                "schedule": [
                    {
                        "window": list(ev.window),
                        "target": ev.target,
                        "probability": ev.probability,
                        "label": ev.label,
                        "days": list(ev.days) if ev.days is not None else None,
                    }
                    for ev in a.schedule
                ],
            }
            for a in config.agents
        ],
        "ticks_per_day": config.ticks_per_day,
        "days": config.days,
        "rng_seed": config.rng_seed,
        "fluctuation_rate": config.fluctuation_rate,
        "sensors": [
            {
                "id": s.id,
                "kind": s.kind,
                "coverage": list(s.coverage),
                "p_detect": s.p_detect,
                "p_false_positive": s.p_false_positive,
                "p_confuse": s.p_confuse,
            }
            for s in config.sensors
        ],
        "contact_rule": {
            "min_consecutive_ticks": config.contact_rule.min_consecutive_ticks,
            "excluded_tags": sorted(config.contact_rule.excluded_tags),
            "officemate_exclusion": config.contact_rule.officemate_exclusion,
        },
        "motion_model": config.motion_model,
        "analytics": {
            "baseline_alpha": config.analytics.baseline_alpha,
            "day_alpha": config.analytics.day_alpha,
            "min_support": config.analytics.min_support,
            "min_len": config.analytics.min_len,
            "max_len": config.analytics.max_len,
        },
    }


def save_config(config: WorldConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(dump_config(config), indent=2) + "\n")
