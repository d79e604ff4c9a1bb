"""Social network inference from co-location.

Two agents sharing a location bin for at least min_consecutive_ticks form a
contact. Direction runs visitor -> host when the bin is someone's office;
neutral ground credits both directions. Context exclusions drop bins where
co-presence says nothing (printer queues, shared offices when the
officemate_exclusion flag is set).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import ValidationError
from .world import FloorPlan

# Node shapes for DOT rendering, one per department; unknown departments
# fall back to "other".
DEPARTMENT_SHAPES = {
    "research": "square",
    "development": "diamond",
    "workshops": "oval",
    "other": "hexagon",
}


@dataclass(frozen=True)
class ContactRule:
    min_consecutive_ticks: int = 10
    excluded_tags: frozenset[str] = frozenset({"printer"})
    officemate_exclusion: bool = True


@dataclass(frozen=True)
class ContactGraph:
    """Directed weighted contact graph; edge (a, b) means a visited b."""

    nodes: dict[int, str]  # agent id -> department label
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    def weight(self, src: int, dst: int) -> int:
        return self.edges.get((src, dst), 0)

    def undirected_weights(self) -> dict[tuple[int, int], int]:
        """Collapse direction for display parity with undirected renderings."""
        merged: Counter[tuple[int, int]] = Counter()
        for (a, b), w in self.edges.items():
            merged[(min(a, b), max(a, b))] += w
        return dict(merged)


def _colocation_intervals(seq_a, seq_b):
    """Maximal runs where both sequences sit at the same location.

    Yields (location, run_length). A change of shared location ends the run
    even when the agents stay together.
    """
    run_loc = None
    run_len = 0
    for la, lb in zip(seq_a, seq_b):
        here = la if la == lb else None
        if here is not None and here == run_loc:
            run_len += 1
            continue
        if run_loc is not None:
            yield run_loc, run_len
        run_loc, run_len = here, 1 if here is not None else 0
    if run_loc is not None:
        yield run_loc, run_len


def extract_contacts(
    paths: dict[int, dict[int, list[int]]],
    plan: FloorPlan,
    rule: ContactRule,
    departments: dict[int, str] | None = None,
) -> ContactGraph:
    """Contact graph from per-agent, per-day location sequences.

    ``paths`` maps agent -> day -> location sequence; all sequences within a
    day must have equal length. Interval attribution: host's office gets
    visitor->host; a bin owned by both (shared office) or by neither credits
    both directions.
    """
    agents = sorted(paths)
    days = sorted({d for seqs in paths.values() for d in seqs})
    for day in days:
        lengths = {len(paths[a][day]) for a in agents if day in paths[a]}
        if len(lengths) > 1:
            raise ValidationError(f"day {day} paths have mismatched lengths {sorted(lengths)}")

    departments = departments or {}
    edges: Counter[tuple[int, int]] = Counter()
    for i, a in enumerate(agents):
        for b in agents[i + 1 :]:
            for day in days:
                if day not in paths[a] or day not in paths[b]:
                    continue
                for loc, length in _colocation_intervals(paths[a][day], paths[b][day]):
                    if length < rule.min_consecutive_ticks:
                        continue
                    if plan.tag(loc) in rule.excluded_tags:
                        continue
                    owners = plan.owners(loc)
                    a_home = a in owners
                    b_home = b in owners
                    if rule.officemate_exclusion and a_home and b_home:
                        continue
                    if b_home and not a_home:
                        edges[(a, b)] += length
                    elif a_home and not b_home:
                        edges[(b, a)] += length
                    else:  # neutral ground or shared office: both directions
                        edges[(a, b)] += length
                        edges[(b, a)] += length

    nodes = {a: departments.get(a, "other") for a in agents}
    return ContactGraph(nodes=nodes, edges=dict(edges))


@dataclass(frozen=True)
class GraphMetrics:
    node_metrics: dict[int, dict[str, int]]  # in_degree, out_degree, weighted_degree
    degree_histogram: dict[int, int]  # total degree -> node count
    top_hubs: list[tuple[int, int]]  # (agent, weighted total degree), best first
    department_matrix: dict[tuple[str, str], int]


def graph_metrics(graph: ContactGraph, top_k: int = 5) -> GraphMetrics:
    node_metrics = {
        a: {"in_degree": 0, "out_degree": 0, "weighted_degree": 0} for a in graph.nodes
    }
    dept_matrix: Counter[tuple[str, str]] = Counter()
    for (a, b), w in graph.edges.items():
        node_metrics[a]["out_degree"] += 1
        node_metrics[b]["in_degree"] += 1
        node_metrics[a]["weighted_degree"] += w
        node_metrics[b]["weighted_degree"] += w
        dept_matrix[(graph.nodes[a], graph.nodes[b])] += w

    histogram: Counter[int] = Counter()
    for m in node_metrics.values():
        histogram[m["in_degree"] + m["out_degree"]] += 1

    hubs = sorted(
        ((a, m["weighted_degree"]) for a, m in node_metrics.items()),
        key=lambda item: (-item[1], item[0]),
    )[:top_k]
    return GraphMetrics(
        node_metrics=node_metrics,
        degree_histogram=dict(histogram),
        top_hubs=hubs,
        department_matrix=dict(dept_matrix),
    )


def export_graph(graph: ContactGraph, format: str = "dot") -> str:
    """Byte-stable DOT or edge-CSV rendering of the graph."""
    if format == "dot":
        lines = ["digraph contacts {"]
        for a in sorted(graph.nodes):
            shape = DEPARTMENT_SHAPES.get(graph.nodes[a].lower(), DEPARTMENT_SHAPES["other"])
            lines.append(f'  "A{a}" [label="A{a}", shape={shape}];')
        for (a, b), w in sorted(graph.edges.items()):
            lines.append(f'  "A{a}" -> "A{b}" [label="{w}", weight={w}];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if format == "edge_csv":
        lines = ["from,to,weight"]
        for (a, b), w in sorted(graph.edges.items()):
            lines.append(f"{a},{b},{w}")
        return "\n".join(lines) + "\n"
    raise ValidationError(f"unknown export format {format!r}")
