"""Bayesian location tracking: per-agent predict/update over sensor events.

Beliefs are per-agent categorical distributions over location bins, advanced
each tick by a motion kernel (predict) and reweighted by the likelihood of
that tick's sensor reports (update). Each day starts from a point mass at
the agent's home; tick 0 is update-only, prediction applies from tick 1.

The per-agent likelihood treats only reports naming the agent as evidence
and explains them as true detections or false positives; reports produced by
confusing some other agent are not modeled (beliefs are independent across
agents), which is exactly the mismatch the belief floor absorbs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import WorldConfig
from .errors import DegenerateEvidenceError, ValidationError
from .sensors import ObservationEvent, SensorSpec
from .world import FloorPlan

log = logging.getLogger("officelab.fusion")

BELIEF_FLOOR = 1e-12
# Minimum weight of the uniform self+neighbors component in the default
# kernel: keeps every physically possible move (planning-tick stays, detours,
# walks to schedule targets) at positive probability even when the config has
# fluctuation_rate = 0.
KERNEL_SUPPORT_FLOOR = 0.01


@dataclass(frozen=True)
class MotionModel:
    """Per-agent location transition kernels (rows sum to 1, support self+adjacent)."""

    kernels: dict[int, np.ndarray]

    def kernel(self, agent: int) -> np.ndarray:
        return self.kernels[agent]

    def validate(self, plan: FloorPlan) -> None:
        for agent, K in self.kernels.items():
            if K.shape != (plan.n, plan.n):
                raise ValidationError(f"kernel of agent {agent} has shape {K.shape}")
            if np.abs(K.sum(axis=1) - 1.0).max() > 1e-9:
                raise ValidationError(f"kernel rows of agent {agent} do not sum to 1")
            for x in plan.locations:
                allowed = {x, *plan.neighbors[x]}
                support = np.nonzero(K[x] > 0)[0]
                if not set(int(j) for j in support) <= allowed:
                    raise ValidationError(f"kernel of agent {agent} leaves adjacency at {x}")


def _uniform_adjacent_rows(plan: FloorPlan, include_self: bool) -> np.ndarray:
    U = np.zeros((plan.n, plan.n))
    for x in plan.locations:
        ns = plan.neighbors[x]
        if not ns:
            U[x, x] = 1.0
            continue
        if include_self:
            for y in (x, *ns):
                U[x, y] = 1.0 / (len(ns) + 1)
        else:
            for y in ns:
                U[x, y] = 1.0 / len(ns)
    return U


def simulator_motion_model(config: WorldConfig) -> MotionModel:
    """Location-level Markovization of the simulator dynamics.

    From an idle tick at x the agent keeps mass stay(x) in place and sends
    the rest one hop toward each destination; a uniform slice over self plus
    neighbors (the detour rate, floored at KERNEL_SUPPORT_FLOOR) covers
    fluctuations, planning delays, and off-distribution targets, so every
    physically possible move keeps positive probability. Transit memory is
    deliberately folded away; this is the tracker's prior, not the truth.
    """
    plan = config.floor_plan
    detour = _uniform_adjacent_rows(plan, include_self=True)
    mix = max(config.fluctuation_rate, KERNEL_SUPPORT_FLOOR)
    kernels = {}
    for profile in config.agents:
        K = np.zeros((plan.n, plan.n))
        for x in plan.locations:
            s = profile.stay_at(x, plan)
            K[x, x] += s
            move = 1.0 - s
            for d, p in sorted(profile.destinations.items()):
                hop = x if d == x else plan.first_hop(x, d)
                K[x, hop] += move * p
        kernels[profile.id] = (1.0 - mix) * K + mix * detour
    return MotionModel(kernels)


def uniform_adjacent_motion_model(plan: FloorPlan, agent_ids: Iterable[int]) -> MotionModel:
    """Mismatched-model mode: uniform over self plus neighbors, same for all."""
    U = _uniform_adjacent_rows(plan, include_self=True)
    return MotionModel({a: U for a in agent_ids})


def motion_model_for(config: WorldConfig) -> MotionModel:
    if config.motion_model == "uniform_adjacent":
        return uniform_adjacent_motion_model(config.floor_plan, [a.id for a in config.agents])
    return simulator_motion_model(config)


def predict(belief_row: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Diffuse a belief through the motion kernel: b'[j] = sum_i b[i] K[i,j]."""
    return belief_row @ kernel


def update(belief_row: np.ndarray, likelihood: np.ndarray) -> np.ndarray:
    """Bayes reweighting; raises DegenerateEvidenceError if all products vanish."""
    post = belief_row * likelihood
    total = post.sum()
    if total <= 0.0:
        raise DegenerateEvidenceError("likelihood contradicts the belief's support")
    return post / total


class LikelihoodModel:
    """Per-tick evidence likelihoods for one agent under the sensor network.

    For each sensor the report pattern (locations of reports naming the
    agent) is explained by: true detection with rate p_detect*(1-p_confuse)
    at the agent's location, plus at most one false positive naming the
    agent with rate p_false_positive/n_agents, uniform over the coverage.
    """

    def __init__(self, sensors: Sequence[SensorSpec], plan: FloorPlan, n_agents: int | None = None):
        self.plan = plan
        self.sensor_ids = [s.id for s in sensors]
        self._index = {s.id: i for i, s in enumerate(sensors)}
        n = plan.n
        self._detect = []  # (n,) true-detection rate per location
        self._q = []  # false positive naming this agent, per tick
        self._fp_at = []  # (n,) false-positive density over locations
        self._silent = []  # (n,) no-report likelihood
        for s in sensors:
            mask = np.zeros(n)
            mask[list(s.coverage)] = 1.0
            d = s.p_detect * (1.0 - s.p_confuse) * mask
            q = s.p_false_positive / n_agents if n_agents else s.p_false_positive
            fp_at = mask * (q / len(s.coverage))
            self._detect.append(d)
            self._q.append(q)
            self._fp_at.append(fp_at)
            self._silent.append((1.0 - d) * (1.0 - q))
        self._silent_product = np.prod(np.stack(self._silent), axis=0) if sensors else np.ones(n)
        self._fast = bool(sensors) and all(
            float(d.max(initial=0.0)) < 1.0 and q < 1.0 for d, q in zip(self._detect, self._q)
        )

    def _sensor_factor(self, idx: int, report_locs: list[int]) -> np.ndarray:
        d = self._detect[idx]
        q = self._q[idx]
        fp_at = self._fp_at[idx]
        if len(report_locs) == 1:
            y = report_locs[0]
            f = (1.0 - d) * fp_at[y]
            f[y] += d[y] * (1.0 - q)
            return f
        if len(report_locs) == 2:
            f = np.zeros_like(d)
            for y in set(report_locs):
                f[y] = d[y] * fp_at[report_locs[0] if report_locs[1] == y else report_locs[1]]
            return f
        # three or more reports naming one agent cannot come from one sensor
        # under this model (one true + one false positive at most)
        return np.zeros_like(d)

    def tick_likelihood(self, reports: dict[str, list[int]]) -> np.ndarray:
        """Likelihood over locations given this tick's reports naming the agent.

        ``reports`` maps sensor id -> report locations (empty dict = silence).
        """
        if self._fast:
            L = self._silent_product.copy()
            for sensor_id, locs in reports.items():
                idx = self._index[sensor_id]
                L *= self._sensor_factor(idx, locs) / self._silent[idx]
            return L
        L = np.ones(self.plan.n)
        active = {self._index[sid]: locs for sid, locs in reports.items()}
        for idx in range(len(self.sensor_ids)):
            L *= self._sensor_factor(idx, active[idx]) if idx in active else self._silent[idx]
        return L


def likelihood_of_events(
    events: Iterable[ObservationEvent],
    agent: int,
    sensors: Sequence[SensorSpec],
    plan: FloorPlan,
    n_agents: int | None = None,
) -> np.ndarray:
    """Per-location evidence weights for one agent from one tick's events."""
    model = LikelihoodModel(sensors, plan, n_agents=n_agents)
    reports: dict[str, list[int]] = {}
    events = list(events)
    ticks = {(ev.day, ev.tick) for ev in events}
    if len(ticks) > 1:
        raise ValidationError(f"events span several ticks: {sorted(ticks)}")
    for ev in events:
        if ev.reported_agent == agent:
            reports.setdefault(ev.sensor, []).append(ev.location)
    return model.tick_likelihood(reports)


@dataclass(frozen=True)
class BeliefMatrix:
    """One tick's agent-by-location probability table (rows sum to 1)."""

    day: int
    tick: int
    agents: tuple[int, ...]
    probs: np.ndarray  # shape (n_agents, n_locations)

    def row(self, agent: int) -> np.ndarray:
        return self.probs[self.agents.index(agent)]


def _floor_and_normalize(row: np.ndarray) -> np.ndarray:
    floored = np.maximum(row, BELIEF_FLOOR)
    return floored / floored.sum()


def fuse_run(
    events: Iterable[ObservationEvent],
    config: WorldConfig,
    motion: MotionModel | None = None,
) -> list[BeliefMatrix]:
    """Filtered beliefs for every (day, tick) of the configured run.

    Degenerate evidence (all posterior products zero) falls back to the
    predicted belief for that tick and is logged.
    """
    plan = config.floor_plan
    motion = motion or motion_model_for(config)
    agent_ids = tuple(a.id for a in config.agents)
    model = LikelihoodModel(config.sensors, plan, n_agents=len(agent_ids))

    reports: dict[tuple[int, int, int], dict[str, list[int]]] = {}
    for ev in events:
        key = (ev.day, ev.tick, ev.reported_agent)
        reports.setdefault(key, {}).setdefault(ev.sensor, []).append(ev.location)

    out: list[BeliefMatrix] = []
    for day in range(config.days):
        rows = {}
        for profile in config.agents:
            row = np.zeros(plan.n)
            row[profile.home] = 1.0
            rows[profile.id] = row
        for tick in range(config.ticks_per_day):
            probs = np.zeros((len(agent_ids), plan.n))
            for i, profile in enumerate(config.agents):
                row = rows[profile.id]
                if tick > 0:
                    row = predict(row, motion.kernel(profile.id))
                L = model.tick_likelihood(reports.get((day, tick, profile.id), {}))
                try:
                    row = update(row, L)
                except DegenerateEvidenceError:
                    log.debug(
                        "degenerate evidence for agent %d at day %d tick %d; predict-only",
                        profile.id, day, tick,
                    )
                row = _floor_and_normalize(row)
                rows[profile.id] = row
                probs[i] = row
            out.append(BeliefMatrix(day=day, tick=tick, agents=agent_ids, probs=probs))
    return out


def argmax_paths(beliefs: Sequence[BeliefMatrix]) -> dict[int, dict[int, list[int]]]:
    """Per-tick most probable location per agent: agent -> day -> sequence."""
    paths: dict[int, dict[int, list[int]]] = {}
    for matrix in sorted(beliefs, key=lambda m: (m.day, m.tick)):
        for i, agent in enumerate(matrix.agents):
            paths.setdefault(agent, {}).setdefault(matrix.day, []).append(int(matrix.probs[i].argmax()))
    return paths
