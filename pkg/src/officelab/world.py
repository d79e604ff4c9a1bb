"""Office world: discrete location graph, agent profiles, movement kernels.

Locations are abstract bins with dense integer ids 0..n-1; there is no
geometry. Adjacency is an undirected, irreflexive, connected graph. All
types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConvergenceError, NoPathError, ValidationError

LOCATION_TAGS = ("office", "meeting_room", "printer", "corridor", "lunch_area", "other")


@dataclass(frozen=True)
class FloorPlan:
    """Discrete location graph with semantic tags and office ownership.

    ``home_of`` maps a location to the agents whose office it is; shared
    offices list several owners, most locations list none.
    """

    locations: tuple[int, ...]
    adjacency: frozenset[tuple[int, int]]  # normalized (u, v) with u < v
    tags: dict[int, str] = field(default_factory=dict)
    home_of: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.locations)

    def tag(self, location: int) -> str:
        return self.tags.get(location, "other")

    def owners(self, location: int) -> tuple[int, ...]:
        return self.home_of.get(location, ())

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {x: [] for x in self.locations}
        for u, v in self.adjacency:
            adj[u].append(v)
            adj[v].append(u)
        return {x: tuple(sorted(ns)) for x, ns in adj.items()}

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs hop distances (n x n int array; -1 = unreachable)."""
        n = self.n
        dist = np.full((n, n), -1, dtype=np.int64)
        for src in self.locations:
            dist[src, src] = 0
            frontier = [src]
            d = 0
            while frontier:
                d += 1
                nxt = []
                for x in frontier:
                    for y in self.neighbors[x]:
                        if dist[src, y] < 0:
                            dist[src, y] = d
                            nxt.append(y)
                frontier = nxt
        return dist

    def first_hop(self, src: int, dst: int) -> int:
        """Next location on the canonical shortest path src -> dst.

        Ties broken by lowest next location id; neighbors are pre-sorted.
        """
        if src == dst:
            return src
        dist = self.distances
        if dist[src, dst] < 0:
            raise NoPathError(f"no path from {src} to {dst}")
        target = dist[src, dst] - 1
        for y in self.neighbors[src]:
            if dist[y, dst] == target:
                return y
        raise NoPathError(f"no path from {src} to {dst}")  # unreachable on valid plans


@dataclass(frozen=True)
class StayProbs:
    """Stay probability lookup: per-location override > per-tag > default."""

    default: float = 0.5
    by_tag: dict[str, float] = field(default_factory=dict)
    by_location: dict[int, float] = field(default_factory=dict)

    def resolve(self, location: int, tag: str) -> float:
        if location in self.by_location:
            return self.by_location[location]
        return self.by_tag.get(tag, self.default)


@dataclass(frozen=True)
class ScheduleEvent:
    """A recurring or day-specific appointment.

    ``window`` is [start_tick, end_tick) in within-day ticks; ``days`` limits
    the event to specific day indices (None = every day). While active, the
    event preempts ordinary destination sampling with the given probability.
    """

    window: tuple[int, int]
    target: int
    probability: float
    label: str = ""
    days: tuple[int, ...] | None = None

    def active(self, tick: int, day: int) -> bool:
        if self.days is not None and day not in self.days:
            return False
        return self.window[0] <= tick < self.window[1]


@dataclass(frozen=True)
class AgentProfile:
    id: int
    home: int
    stay_prob: StayProbs = field(default_factory=StayProbs)
    destinations: dict[int, float] = field(default_factory=dict)
    delta_p: float = 0.0
    schedule: tuple[ScheduleEvent, ...] = ()
    department: str = "other"

    def stay_at(self, location: int, plan: FloorPlan) -> float:
        return self.stay_prob.resolve(location, plan.tag(location))

    @cached_property
    def destination_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        locs = np.array(sorted(self.destinations), dtype=np.int64)
        probs = np.array([self.destinations[int(d)] for d in locs], dtype=np.float64)
        return locs, probs


def shortest_path(plan: FloorPlan, src: int, dst: int) -> list[int]:
    """Minimum-hop path inclusive of endpoints, lowest-next-id tie-break."""
    if src not in plan.neighbors or dst not in plan.neighbors:
        raise ValidationError(f"unknown location in shortest_path({src}, {dst})")
    path = [src]
    cur = src
    while cur != dst:
        cur = plan.first_hop(cur, dst)
        path.append(cur)
    return path


# --- stationary occupancy oracle -------------------------------------------
#
# The location process alone is not Markov: an agent in transit carries its
# destination, and deciding to move costs one planning tick. The exact chain
# lives on states (location, destination), destination == location meaning
# idle. We power-iterate that chain and project onto locations.


def _extended_kernel(plan: FloorPlan, agent: AgentProfile, fluctuation_rate: float) -> tuple[np.ndarray, list[tuple[int, int]]]:
    states = [(x, d) for x in plan.locations for d in plan.locations]
    index = {s: i for i, s in enumerate(states)}
    m = len(states)
    K = np.zeros((m, m))
    for x, d in states:
        i = index[(x, d)]
        if x == d:  # idle
            s = agent.stay_at(x, plan)
            K[i, index[(x, x)]] += s
            for dest, p in agent.destinations.items():
                K[i, index[(x, dest)]] += (1.0 - s) * p  # planning tick, stays put
        else:  # in transit toward d
            w = plan.first_hop(x, d)
            K[i, index[(w, d if w != d else w)]] += 1.0 - fluctuation_rate
            ns = plan.neighbors[x]
            for u in ns:
                K[i, index[(u, d if u != d else u)]] += fluctuation_rate / len(ns)
    return K, states


def stationary_distribution(
    plan: FloorPlan,
    agent: AgentProfile,
    fluctuation_rate: float = 0.0,
    tol: float = 1e-10,
    max_iter: int = 200_000,
) -> np.ndarray:
    """Long-run occupancy of the agent's movement chain (no schedule, delta_p=0).

    Power iteration on the lazy extended chain, started from the agent's home,
    until the L1 change per step drops below ``tol``; result projected onto
    locations. Raises ConvergenceError past ``max_iter``.
    """
    K, states = _extended_kernel(plan, agent, fluctuation_rate)
    lazy = 0.5 * (K + np.eye(len(states)))  # same fixed point, kills periodicity
    pi = np.zeros(len(states))
    pi[states.index((agent.home, agent.home))] = 1.0
    for _ in range(max_iter):
        nxt = pi @ lazy
        if np.abs(nxt - pi).sum() < tol:
            pi = nxt
            break
        pi = nxt
    else:
        raise ConvergenceError(f"stationary distribution did not converge in {max_iter} iterations")
    occupancy = np.zeros(plan.n)
    for (x, _), mass in zip(states, pi):
        occupancy[x] += mass
    return occupancy / occupancy.sum()
