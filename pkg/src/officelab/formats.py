"""On-disk formats for stage handoffs.

Line-delimited JSON for event-like streams, CSV for tabular reports. Field
order and float rendering (shortest round-trip repr) are fixed so identical
runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .analytics import OccupancyDistribution, PatternReport, SurpriseScore
from .contacts import GraphMetrics
from .fusion import BeliefMatrix
from .sensors import ObservationEvent
from .simulate import TrajectoryRecord

BELIEF_WRITE_FLOOR = 1e-6  # rows below this are omitted from the belief CSV


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trajectories_jsonl(records: Iterable[TrajectoryRecord], path: Path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps({"agent": r.agent, "day": r.day, "tick": r.tick, "location": r.location}))
            fh.write("\n")


def read_trajectories_jsonl(path: Path) -> list[TrajectoryRecord]:
    records = []
    with open(path) as fh:
        for line in fh:
            d = json.loads(line)
            records.append(TrajectoryRecord(d["agent"], d["day"], d["tick"], d["location"]))
    return records


def write_trajectories_csv(records: Iterable[TrajectoryRecord], path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("agent,day,tick,location\n")
        for r in records:
            fh.write(f"{r.agent},{r.day},{r.tick},{r.location}\n")


def write_events_jsonl(events: Iterable[ObservationEvent], path: Path) -> None:
    with open(path, "w") as fh:
        for e in events:
            fh.write(
                json.dumps(
                    {
                        "sensor": e.sensor,
                        "day": e.day,
                        "tick": e.tick,
                        "reported_agent": e.reported_agent,
                        "location": e.location,
                    }
                )
            )
            fh.write("\n")


def read_events_jsonl(path: Path) -> list[ObservationEvent]:
    events = []
    with open(path) as fh:
        for line in fh:
            d = json.loads(line)
            events.append(ObservationEvent(d["sensor"], d["day"], d["tick"], d["reported_agent"], d["location"]))
    return events


def write_beliefs_csv(beliefs: Sequence[BeliefMatrix], path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("day,tick,agent,location,probability\n")
        for m in beliefs:
            for i, agent in enumerate(m.agents):
                for loc, p in enumerate(m.probs[i]):
                    if p >= BELIEF_WRITE_FLOOR:
                        fh.write(f"{m.day},{m.tick},{agent},{loc},{_fmt(p)}\n")


def write_paths_csv(paths: dict[int, dict[int, Sequence[int]]], path: Path) -> None:
    """agent -> day -> location sequence, one row per (agent, day, tick)."""
    with open(path, "w") as fh:
        fh.write("agent,day,tick,location\n")
        for agent in sorted(paths):
            for day in sorted(paths[agent]):
                for tick, loc in enumerate(paths[agent][day]):
                    fh.write(f"{agent},{day},{tick},{loc}\n")


def read_paths_csv(path: Path) -> dict[int, dict[int, list[int]]]:
    paths: dict[int, dict[int, list[int]]] = {}
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        idx = {name: i for i, name in enumerate(header)}
        for line in fh:
            parts = line.strip().split(",")
            agent, day, tick, loc = (int(parts[idx[k]]) for k in ("agent", "day", "tick", "location"))
            paths.setdefault(agent, {}).setdefault(day, []).append(loc)
    return paths


def write_decode_scores_csv(scores: dict[tuple[int, int], float], path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("agent,day,log_score\n")
        for agent, day in sorted(scores):
            fh.write(f"{agent},{day},{_fmt(scores[(agent, day)])}\n")


def trajectories_to_paths(records: Iterable[TrajectoryRecord]) -> dict[int, dict[int, list[int]]]:
    """Group trajectory records into agent -> day -> tick-ordered sequence."""
    keyed: dict[int, dict[int, list[tuple[int, int]]]] = {}
    for r in records:
        keyed.setdefault(r.agent, {}).setdefault(r.day, []).append((r.tick, r.location))
    return {
        agent: {day: [loc for _, loc in sorted(ticks)] for day, ticks in days.items()}
        for agent, days in keyed.items()
    }


def write_occupancy_csv(
    dists: Sequence[OccupancyDistribution], path: Path, source: str
) -> None:
    with open(path, "w") as fh:
        fh.write(f"# source={source}\n")
        fh.write("agent,scope,location,probability\n")
        for dist in dists:
            for loc, p in enumerate(dist.probs):
                fh.write(f"{dist.agent},{dist.scope},{loc},{_fmt(p)}\n")


def write_surprise_csv(scores: Sequence[SurpriseScore], path: Path, source: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# source={source}\n")
        fh.write("agent,day,bits\n")
        for s in sorted(scores, key=lambda s: (s.agent, s.day)):
            fh.write(f"{s.agent},{s.day},{_fmt(s.bits)}\n")


def write_patterns_csv(reports: Sequence[PatternReport], path: Path, source: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# source={source}\n")
        fh.write("agent,pattern,support\n")
        for report in sorted(reports, key=lambda r: r.agent):
            for pattern, support, _ in report.patterns:
                fh.write(f"{report.agent},{'-'.join(str(x) for x in pattern)},{support}\n")


def write_fig_panels_csv(
    baselines: dict[int, OccupancyDistribution],
    day_dists: dict[int, dict[int, OccupancyDistribution]],
    scores: dict[int, dict[int, SurpriseScore]],
    path: Path,
    source: str,
) -> None:
    """Plot-ready long table with three panels: (a) pooled occupancy per
    location, (b) per-day occupancy, (c) per-day surprise."""
    with open(path, "w") as fh:
        fh.write(f"# source={source}\n")
        fh.write("panel,agent,day,location,value\n")
        for agent in sorted(baselines):
            for loc, p in enumerate(baselines[agent].probs):
                fh.write(f"a,{agent},,{loc},{_fmt(p)}\n")
        for agent in sorted(day_dists):
            for day in sorted(day_dists[agent]):
                for loc, p in enumerate(day_dists[agent][day].probs):
                    fh.write(f"b,{agent},{day},{loc},{_fmt(p)}\n")
        for agent in sorted(scores):
            for day in sorted(scores[agent]):
                fh.write(f"c,{agent},{day},,{_fmt(scores[agent][day].bits)}\n")


def write_node_metrics_csv(metrics: GraphMetrics, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("agent,in_degree,out_degree,weighted_degree\n")
        for agent in sorted(metrics.node_metrics):
            m = metrics.node_metrics[agent]
            fh.write(f"{agent},{m['in_degree']},{m['out_degree']},{m['weighted_degree']}\n")


def write_department_matrix_csv(metrics: GraphMetrics, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("from_department,to_department,weight\n")
        for (src, dst), w in sorted(metrics.department_matrix.items()):
            fh.write(f"{src},{dst},{w}\n")
