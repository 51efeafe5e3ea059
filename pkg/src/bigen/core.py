"""Concrete data model for bigraph agents.

A bigraph pairs a place graph (a forest over indexed roots, encoding
nesting) with a link graph (a hypergraph wiring node ports to closed edges
or named open links) over one shared node set.  Only ground agents are
representable: no sites and no inner names.

Identifiers are generation-order integers.  Nodes are plain ints; roots,
edges and outer names carry small wrapper types so the three id spaces
cannot be confused.  Rendered labels are ``v0, v1, ...`` for nodes,
``r0, ...`` for roots, ``e0, ...`` for edges and ``y0, ...`` for names.

All structures are treated as immutable after construction and are safe to
share between threads for reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

NodeId = int
Port = tuple[NodeId, int]


@dataclass(frozen=True)
class Root:
    """Index of a place-graph root (region)."""

    index: int

    def __str__(self) -> str:
        return f"r{self.index}"


@dataclass(frozen=True)
class Edge:
    """A closed link: connects ports, invisible to the outer interface."""

    index: int

    def __str__(self) -> str:
        return f"e{self.index}"


@dataclass(frozen=True)
class Name:
    """An open link: an outer name, part of the outer interface."""

    index: int

    def __str__(self) -> str:
        return f"y{self.index}"


Place = Union[NodeId, Root]
Link = Union[Edge, Name]


def node_label(node: NodeId) -> str:
    return f"v{node}"


def place_label(place: Place) -> str:
    return str(place) if isinstance(place, Root) else node_label(place)


@dataclass(frozen=True)
class Control:
    """A node kind: a label plus the number of ports its nodes carry."""

    label: str
    arity: int

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError(f"control {self.label!r} has negative arity {self.arity}")


@dataclass(frozen=True)
class Signature:
    """Ordered alphabet of controls with unique labels."""

    controls: tuple[Control, ...]

    def __post_init__(self) -> None:
        labels = [c.label for c in self.controls]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate control labels: {dupes}")

    def __len__(self) -> int:
        return len(self.controls)

    def __getitem__(self, index: int) -> Control:
        return self.controls[index]

    def by_label(self, label: str) -> Control:
        for control in self.controls:
            if control.label == label:
                return control
        raise KeyError(f"unknown control {label!r}")

    @property
    def positive_fraction(self) -> float:
        """Fraction of controls with at least one port."""
        if not self.controls:
            return 0.0
        return sum(1 for c in self.controls if c.arity >= 1) / len(self.controls)


def split_arity_signature(count: int, positive: int, arity: int = 1) -> Signature:
    """Signature whose first `positive` of `count` controls have the given
    positive arity and the rest have arity 0."""
    if not 0 <= positive <= count:
        raise ValueError(f"positive must be in [0, {count}], got {positive}")
    if arity < 1:
        raise ValueError("positive controls need arity >= 1")
    return Signature(
        tuple(
            Control(f"C{i}", arity if i < positive else 0) for i in range(count)
        )
    )


def cycled_arity_signature(count: int, lo: int, hi: int) -> Signature:
    """Signature of `count` controls with arities cycling through lo..hi.

    With count == hi - lo + 1 every arity in the range occurs exactly once,
    so uniform control selection yields uniformly distributed arities.
    """
    if lo > hi:
        raise ValueError(f"empty arity range {lo}..{hi}")
    span = hi - lo + 1
    return Signature(
        tuple(Control(f"C{i}", lo + i % span) for i in range(count))
    )


@dataclass(frozen=True)
class PlaceGraph:
    """Forest over `root_count` roots; every node has exactly one parent."""

    root_count: int
    nodes: frozenset[NodeId]
    control_map: Mapping[NodeId, Control]
    parent_map: Mapping[NodeId, Place]

    @property
    def place_count(self) -> int:
        return self.root_count + len(self.nodes)


@dataclass(frozen=True)
class LinkGraph:
    """Hypergraph wiring node ports to edges or outer names.

    Only connected ports appear in `link_map`; idle ports are implicit,
    which keeps free-port queries cheap for the generators.
    """

    nodes: frozenset[NodeId]
    control_map: Mapping[NodeId, Control]
    edges: frozenset[Edge]
    outer_names: frozenset[Name]
    link_map: Mapping[Port, Link]


@dataclass(frozen=True)
class Bigraph:
    """A place graph and a link graph over the same node set."""

    place: PlaceGraph
    link: LinkGraph


def empty_link_graph(pg: PlaceGraph) -> LinkGraph:
    """Link graph over pg's nodes with no links at all."""
    return LinkGraph(
        nodes=pg.nodes,
        control_map=pg.control_map,
        edges=frozenset(),
        outer_names=frozenset(),
        link_map={},
    )


def pair_with_wiring(pg: PlaceGraph, wiring: LinkGraph) -> Bigraph:
    """Combine a place graph with a link graph built over a subset of its
    nodes (typically the positive-arity ones) into one agent."""
    if not wiring.nodes <= pg.nodes:
        extra = sorted(wiring.nodes - pg.nodes)
        raise ValueError(f"wiring references unknown nodes: {extra}")
    link = LinkGraph(
        nodes=pg.nodes,
        control_map=pg.control_map,
        edges=wiring.edges,
        outer_names=wiring.outer_names,
        link_map=dict(wiring.link_map),
    )
    return Bigraph(place=pg, link=link)


# ---------------------------------------------------------------------------
# Structural validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    subject: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, message: str, subject: str) -> None:
        self.violations.append(Violation(rule, message, subject))

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(
            f"{v.rule}: {v.message} [{v.subject}]" for v in self.violations
        )


def validate(b: Bigraph) -> ValidationReport:
    """Check every structural invariant; violations are data, not failures.

    An empty report means the structure is a well-formed agent.
    """
    report = ValidationReport()
    _validate_place(b.place, report)
    _validate_link(b.link, report)

    if b.place.nodes != b.link.nodes:
        only_place = sorted(b.place.nodes - b.link.nodes)
        only_link = sorted(b.link.nodes - b.place.nodes)
        report.add(
            "node-set-mismatch",
            f"place/link node sets differ (place-only {only_place}, link-only {only_link})",
            "bigraph",
        )
    else:
        for v in sorted(b.place.nodes):
            cp = b.place.control_map.get(v)
            cl = b.link.control_map.get(v)
            if cp is not None and cl is not None and cp != cl:
                report.add(
                    "control-mismatch",
                    f"place assigns {cp.label}:{cp.arity}, link assigns {cl.label}:{cl.arity}",
                    node_label(v),
                )
    return report


def _validate_place(pg: PlaceGraph, report: ValidationReport) -> None:
    if pg.root_count < 0:
        report.add("root-count", f"negative root count {pg.root_count}", "place graph")

    for v in sorted(pg.nodes):
        if v not in pg.control_map:
            report.add("control-missing", "node has no control", node_label(v))
        if v not in pg.parent_map:
            report.add("parent-missing", "node has no parent", node_label(v))
    for v in sorted(set(pg.control_map) - pg.nodes):
        report.add("control-extra", "control assigned to unknown node", node_label(v))
    for v in sorted(set(pg.parent_map) - pg.nodes):
        report.add("parent-extra", "parent assigned to unknown node", node_label(v))

    broken: set[NodeId] = set()
    for v in sorted(pg.nodes):
        parent = pg.parent_map.get(v)
        if parent is None:
            broken.add(v)
        elif isinstance(parent, Root):
            if not 0 <= parent.index < pg.root_count:
                report.add(
                    "parent-root-range",
                    f"parent root index {parent.index} outside 0..{pg.root_count - 1}",
                    node_label(v),
                )
        elif parent not in pg.nodes:
            report.add(
                "parent-unknown",
                f"parent {node_label(parent)} is not a node",
                node_label(v),
            )
            broken.add(v)

    # Acyclicity: every parent chain must reach a root in <= |nodes| steps.
    # Chains that dead-end on a missing/unknown parent are already reported.
    status: dict[NodeId, bool] = {}
    for v in sorted(pg.nodes):
        if v in status:
            continue
        chain: list[NodeId] = []
        seen = set()
        current: Place = v
        verdict: bool | None = None
        while True:
            if isinstance(current, Root):
                verdict = True
                break
            if current in status:
                verdict = status[current]
                break
            if current in broken or current not in pg.nodes:
                verdict = None  # broken chain, reported elsewhere
                break
            if current in seen:
                verdict = False
                break
            seen.add(current)
            chain.append(current)
            current = pg.parent_map[current]
        for u in chain:
            status[u] = bool(verdict)
        if verdict is False:
            report.add(
                "place-cycle",
                "parent chain never reaches a root",
                node_label(v),
            )


def _validate_link(lg: LinkGraph, report: ValidationReport) -> None:
    for v in sorted(lg.nodes):
        if v not in lg.control_map:
            report.add("control-missing", "node has no control", node_label(v))
    for (v, i), link in sorted(lg.link_map.items(), key=lambda kv: kv[0]):
        port = f"({node_label(v)}, {i})"
        if v not in lg.nodes:
            report.add("port-node-unknown", "port on unknown node", port)
            continue
        control = lg.control_map.get(v)
        if control is not None and not 0 <= i < control.arity:
            report.add(
                "port-index-range",
                f"port index {i} outside arity {control.arity} of {control.label}",
                port,
            )
        if isinstance(link, Edge):
            if link not in lg.edges:
                report.add("link-unknown", f"port wired to undeclared {link}", port)
        elif link not in lg.outer_names:
            report.add("link-unknown", f"port wired to undeclared {link}", port)


# ---------------------------------------------------------------------------
# Elementary accessors
# ---------------------------------------------------------------------------

def children(pg: PlaceGraph, place: Place) -> set[NodeId]:
    """Nodes whose parent is the given place."""
    _require_place(pg, place)
    return {v for v, parent in pg.parent_map.items() if parent == place}


def place_degree(pg: PlaceGraph, place: Place) -> int:
    """Parent count plus child count: 1 + children for a node, children
    for a root."""
    kids = len(children(pg, place))
    return kids if isinstance(place, Root) else kids + 1


def connected_ports(lg: LinkGraph, v: NodeId) -> set[Port]:
    """Ports of v that are wired to some link."""
    _require_node(lg, v)
    return {port for port in lg.link_map if port[0] == v}


def free_port_count(lg: LinkGraph, v: NodeId) -> int:
    """Number of ports of v not yet wired."""
    _require_node(lg, v)
    return lg.control_map[v].arity - len(connected_ports(lg, v))


def _require_place(pg: PlaceGraph, place: Place) -> None:
    if isinstance(place, Root):
        if not 0 <= place.index < pg.root_count:
            raise KeyError(f"unknown root {place}")
    elif place not in pg.nodes:
        raise KeyError(f"unknown node {node_label(place)}")


def _require_node(lg: LinkGraph, v: NodeId) -> None:
    if v not in lg.nodes:
        raise KeyError(f"unknown node {node_label(v)}")


def positive_arity_nodes(graph: PlaceGraph | LinkGraph) -> dict[NodeId, Control]:
    """Controls of the nodes that can participate in linking (arity >= 1)."""
    return {
        v: c for v, c in graph.control_map.items()
        if v in graph.nodes and c.arity >= 1
    }


def signature_of(controls: Iterable[Control]) -> Signature:
    """Signature formed from the distinct controls, in label order."""
    unique = {c.label: c for c in controls}
    return Signature(tuple(unique[label] for label in sorted(unique)))
