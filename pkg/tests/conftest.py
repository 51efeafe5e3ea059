from __future__ import annotations

import pytest

from bigen.core import (
    Bigraph,
    Control,
    Edge,
    LinkGraph,
    Name,
    PlaceGraph,
    Root,
)

T3 = Control("T3", 3)
T1 = Control("T1", 1)


def make_place_graph(roots, parents, controls) -> PlaceGraph:
    """Hand-built place graph from {node: parent} and {node: control}."""
    return PlaceGraph(
        root_count=roots,
        nodes=frozenset(parents),
        control_map=dict(controls),
        parent_map=dict(parents),
    )


def make_link_graph(controls, edge_ports=(), name_ports=()) -> LinkGraph:
    """Hand-built link graph from per-link port lists.

    edge_ports / name_ports are sequences of port lists; the k-th list
    becomes edge e<k> / name y<k>.
    """
    link_map = {}
    edges = []
    names = []
    for k, ports in enumerate(edge_ports):
        edge = Edge(k)
        edges.append(edge)
        for port in ports:
            link_map[port] = edge
    for k, ports in enumerate(name_ports):
        name = Name(k)
        names.append(name)
        for port in ports:
            link_map[port] = name
    return LinkGraph(
        nodes=frozenset(controls),
        control_map=dict(controls),
        edges=frozenset(edges),
        outer_names=frozenset(names),
        link_map=link_map,
    )


def make_bigraph(pg: PlaceGraph, lg: LinkGraph) -> Bigraph:
    return Bigraph(place=pg, link=lg)


@pytest.fixture
def hub_link_graph() -> LinkGraph:
    """Four nodes, two edges, two outer names.

    v0 (arity 3) is wired to e0, e1 and y0; v1 (arity 1) shares e0;
    v2 (arity 3) is on e1, y0 and its own y1; v3 (arity 1) is on y0.
    Link degrees: d0 = 3, d1 = 1, d2 = 3, d3 = 1, so the average neighbor
    difference of v0 is (2 + 0 + 2) / 3 = 4/3.
    """
    controls = {0: T3, 1: T1, 2: T3, 3: T1}
    return make_link_graph(
        controls,
        edge_ports=[[(0, 0), (1, 0)], [(0, 1), (2, 0)]],
        name_ports=[[(0, 2), (2, 1), (3, 0)], [(2, 2)]],
    )


@pytest.fixture
def hub_bigraph(hub_link_graph) -> Bigraph:
    controls = dict(hub_link_graph.control_map)
    pg = make_place_graph(
        roots=1,
        parents={v: Root(0) for v in range(4)},
        controls=controls,
    )
    return make_bigraph(pg, hub_link_graph)
