"""File-based pipeline: simulate -> observe -> fuse -> decode -> analyze -> graph.

Stages hand off through files in one output directory and a manifest that
names them, so every stage can be rerun in isolation with identical results.
All randomness flows from the config seed through named substreams.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import mine_frequent_patterns, surprise_by_day
from .config import WorldConfig
from .contacts import export_graph, extract_contacts, graph_metrics
from .decoding import viterbi_decode
from .errors import AllPathsZeroError, OfficeLabError
from .formats import (
    read_events_jsonl,
    read_paths_csv,
    read_trajectories_jsonl,
    trajectories_to_paths,
    write_beliefs_csv,
    write_decode_scores_csv,
    write_department_matrix_csv,
    write_events_jsonl,
    write_fig_panels_csv,
    write_node_metrics_csv,
    write_occupancy_csv,
    write_paths_csv,
    write_patterns_csv,
    write_surprise_csv,
    write_trajectories_csv,
    write_trajectories_jsonl,
)
from .fusion import LikelihoodModel, argmax_paths, fuse_run, motion_model_for
from .sensors import generate_event_log
from .simulate import run_simulation

log = logging.getLogger("officelab.pipeline")

MANIFEST_NAME = "manifest.json"


class StageError(OfficeLabError):
    """A pipeline stage failed; message names the stage."""


@dataclass
class RunManifest:
    config_path: str
    seed: int
    tool_version: str = __version__
    created_at: str = ""
    updated_at: str = ""
    outputs: dict[str, dict[str, str]] = field(default_factory=dict)

    def record(self, stage: str, **files: str) -> None:
        self.outputs.setdefault(stage, {}).update(files)
        self.updated_at = _now()

    def path_of(self, stage: str, name: str, out_dir: Path) -> Path:
        try:
            return out_dir / self.outputs[stage][name]
        except KeyError:
            raise StageError(f"manifest lists no {name!r} output for stage {stage!r}; run it first") from None

    def save(self, out_dir: Path) -> None:
        doc = {
            "config_path": self.config_path,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "outputs": self.outputs,
        }
        (out_dir / MANIFEST_NAME).write_text(json.dumps(doc, indent=2) + "\n")

    @staticmethod
    def load(out_dir: Path) -> RunManifest:
        doc = json.loads((out_dir / MANIFEST_NAME).read_text())
        return RunManifest(
            config_path=doc["config_path"],
            seed=doc["seed"],
            tool_version=doc["tool_version"],
            created_at=doc["created_at"],
            updated_at=doc["updated_at"],
            outputs=doc["outputs"],
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def open_manifest(config: WorldConfig, config_path: str, out_dir: Path) -> RunManifest:
    out_dir.mkdir(parents=True, exist_ok=True)
    if (out_dir / MANIFEST_NAME).exists():
        manifest = RunManifest.load(out_dir)
        if manifest.seed != config.rng_seed:
            log.info("seed changed from %d to %d; starting a fresh manifest", manifest.seed, config.rng_seed)
            manifest = RunManifest(config_path=config_path, seed=config.rng_seed, created_at=_now())
        return manifest
    return RunManifest(config_path=config_path, seed=config.rng_seed, created_at=_now())


def stage_simulate(config: WorldConfig, out_dir: Path, manifest: RunManifest) -> None:
    records = run_simulation(config)
    write_trajectories_jsonl(records, out_dir / "trajectories.jsonl")
    write_trajectories_csv(records, out_dir / "trajectories.csv")
    manifest.record("simulate", trajectories="trajectories.jsonl", trajectories_csv="trajectories.csv")
    manifest.save(out_dir)
    log.info("simulate: %d records", len(records))


def stage_observe(config: WorldConfig, out_dir: Path, manifest: RunManifest) -> None:
    records = read_trajectories_jsonl(manifest.path_of("simulate", "trajectories", out_dir))
    events = generate_event_log(records, config.sensors, config.rng_seed)
    write_events_jsonl(events, out_dir / "events.jsonl")
    manifest.record("observe", events="events.jsonl")
    manifest.save(out_dir)
    log.info("observe: %d events from %d sensors", len(events), len(config.sensors))


def stage_fuse(config: WorldConfig, out_dir: Path, manifest: RunManifest) -> None:
    events = read_events_jsonl(manifest.path_of("observe", "events", out_dir))
    beliefs = fuse_run(events, config, motion_model_for(config))
    write_beliefs_csv(beliefs, out_dir / "beliefs.csv")
    write_paths_csv(argmax_paths(beliefs), out_dir / "argmax_paths.csv")
    manifest.record("fuse", beliefs="beliefs.csv", argmax_paths="argmax_paths.csv")
    manifest.save(out_dir)
    log.info("fuse: %d belief matrices", len(beliefs))


def decode_day(initial, kernel, evidence, agent: int, day: int):
    """Decode one agent-day, degrading gracefully on contradictory evidence.

    The per-agent likelihood does not model reports produced by confusing
    other agents, so real event logs can pin the evidence to locations no
    feasible path reaches. On AllPathsZeroError the day is re-decoded with a
    tiny uniform leak added per tick (mirroring fuse_run's predict-only
    fallback); the leak preserves each tick's argmax ordering.
    """
    try:
        return viterbi_decode(initial, kernel, evidence, agent=agent, day=day)
    except AllPathsZeroError:
        log.info("decode: contradictory evidence for agent %d day %d; adding uniform leak", agent, day)
        leak = evidence.mean(axis=1, keepdims=True) * 1e-6
        leak[leak == 0.0] = 1.0  # an all-zero tick becomes uninformative
        return viterbi_decode(initial, kernel, evidence + leak, agent=agent, day=day)


def stage_decode(config: WorldConfig, out_dir: Path, manifest: RunManifest) -> None:
    events = read_events_jsonl(manifest.path_of("observe", "events", out_dir))
    plan = config.floor_plan
    motion = motion_model_for(config)
    reports: dict[tuple[int, int, int], dict[str, list[int]]] = {}
    for ev in events:
        reports.setdefault((ev.day, ev.tick, ev.reported_agent), {}).setdefault(ev.sensor, []).append(ev.location)

    paths: dict[int, dict[int, list[int]]] = {}
    scores: dict[tuple[int, int], float] = {}
    model = LikelihoodModel(config.sensors, plan, n_agents=len(config.agents))
    for profile in config.agents:
        initial = np.zeros(plan.n)
        initial[profile.home] = 1.0
        for day in range(config.days):
            evidence = np.stack(
                [
                    model.tick_likelihood(reports.get((day, tick, profile.id), {}))
                    for tick in range(config.ticks_per_day)
                ]
            )
            decoded = decode_day(initial, motion.kernel(profile.id), evidence, profile.id, day)
            paths.setdefault(profile.id, {})[day] = list(decoded.path)
            scores[(profile.id, day)] = decoded.log_score
    write_paths_csv(paths, out_dir / "decoded_paths.csv")
    write_decode_scores_csv(scores, out_dir / "decode_scores.csv")
    manifest.record("decode", decoded_paths="decoded_paths.csv", decode_scores="decode_scores.csv")
    manifest.save(out_dir)
    log.info("decode: %d agent-days", len(scores))


def _paths_for_source(config: WorldConfig, out_dir: Path, manifest: RunManifest, source: str):
    if source == "truth":
        records = read_trajectories_jsonl(manifest.path_of("simulate", "trajectories", out_dir))
        return trajectories_to_paths(records)
    if source == "decoded":
        return read_paths_csv(manifest.path_of("decode", "decoded_paths", out_dir))
    raise StageError(f"unknown analytics source {source!r}")


def stage_analyze(config: WorldConfig, out_dir: Path, manifest: RunManifest, source: str = "truth") -> None:
    paths = _paths_for_source(config, out_dir, manifest, source)
    settings = config.analytics
    baselines = {}
    day_dists = {}
    all_scores = {}
    reports = []
    for profile in config.agents:
        agent_paths = paths.get(profile.id, {})
        if not agent_paths:
            continue
        baseline, dists, scores = surprise_by_day(
            profile.id,
            agent_paths,
            config.floor_plan,
            baseline_alpha=settings.baseline_alpha,
            day_alpha=settings.day_alpha,
        )
        baselines[profile.id] = baseline
        day_dists[profile.id] = dists
        all_scores[profile.id] = scores
        reports.append(
            mine_frequent_patterns(
                profile.id, agent_paths, settings.min_support, settings.min_len, settings.max_len
            )
        )
    occ = [baselines[a] for a in sorted(baselines)]
    occ += [day_dists[a][d] for a in sorted(day_dists) for d in sorted(day_dists[a])]
    write_occupancy_csv(occ, out_dir / "occupancy.csv", source)
    write_surprise_csv([s for a in sorted(all_scores) for s in all_scores[a].values()], out_dir / "surprise.csv", source)
    write_patterns_csv(reports, out_dir / "patterns.csv", source)
    write_fig_panels_csv(baselines, day_dists, all_scores, out_dir / "fig_panels.csv", source)
    manifest.record(
        "analyze",
        occupancy="occupancy.csv",
        surprise="surprise.csv",
        patterns="patterns.csv",
        fig_panels="fig_panels.csv",
    )
    manifest.save(out_dir)
    log.info("analyze: %d agents from %s paths", len(baselines), source)


def stage_graph(config: WorldConfig, out_dir: Path, manifest: RunManifest, source: str = "truth") -> None:
    paths = _paths_for_source(config, out_dir, manifest, source)
    departments = {a.id: a.department for a in config.agents}
    graph = extract_contacts(paths, config.floor_plan, config.contact_rule, departments)
    (out_dir / "contacts.dot").write_text(export_graph(graph, "dot"))
    (out_dir / "contact_edges.csv").write_text(export_graph(graph, "edge_csv"))
    metrics = graph_metrics(graph)
    write_node_metrics_csv(metrics, out_dir / "node_metrics.csv")
    write_department_matrix_csv(metrics, out_dir / "department_matrix.csv")
    manifest.record(
        "graph",
        dot="contacts.dot",
        edges="contact_edges.csv",
        node_metrics="node_metrics.csv",
        department_matrix="department_matrix.csv",
    )
    manifest.save(out_dir)
    log.info("graph: %d nodes, %d edges", len(graph.nodes), len(graph.edges))


STAGES = {
    "simulate": stage_simulate,
    "observe": stage_observe,
    "fuse": stage_fuse,
    "decode": stage_decode,
    "analyze": stage_analyze,
    "graph": stage_graph,
}


def run_stage(name: str, config: WorldConfig, out_dir: Path, manifest: RunManifest, source: str = "truth") -> None:
    stage = STAGES[name]
    try:
        if name in ("analyze", "graph"):
            stage(config, out_dir, manifest, source=source)
        else:
            stage(config, out_dir, manifest)
    except StageError:
        raise
    except OfficeLabError as exc:
        raise StageError(f"stage {name} failed: {exc}") from exc


def run_pipeline(
    config: WorldConfig, config_path: str, out_dir: Path, source: str = "truth"
) -> RunManifest:
    manifest = open_manifest(config, config_path, out_dir)
    for name in STAGES:
        run_stage(name, config, out_dir, manifest, source=source)
    return manifest
