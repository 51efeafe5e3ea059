"""Link-graph synthesis over a given set of positive-arity nodes.

Two wiring strategies:

* pairwise wiring (`mppl`): creates exactly floor(p * m / 2) links, each
  joining the first port of two distinct nodes drawn uniformly from a
  shrinking pool, so every node carries at most one link.  Each link is an
  edge or an outer name according to the (p_o, p_e) weights.
* degree-correlated wiring (`mdc`): repeatedly draws four nodes with free
  ports and wires them pairwise with an assortative or disassortative
  preference until fewer than four candidates remain, producing a nearly
  saturated link graph of two-point edges.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from bigen import _backend
from bigen.core import Control, Edge, Link, LinkGraph, Name, NodeId, Port
from bigen.rng import Uint64Stream

ASSORTATIVE = "assortative"
DISASSORTATIVE = "disassortative"


class LinkKind(Enum):
    OUTER_NAME = 0
    EDGE = 1


@dataclass(frozen=True)
class MpplParams:
    """Pairwise wiring parameters: link fraction p plus kind weights."""

    p: float
    p_outer: float = 0.5
    p_edge: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 1:
            raise ValueError(f"link fraction p must be in [0, 1], got {self.p}")
        if self.p_outer < 0 or self.p_edge < 0:
            raise ValueError("kind weights must be non-negative")
        if self.p_outer + self.p_edge <= 0:
            raise ValueError("at least one kind weight must be positive")


@dataclass(frozen=True)
class MdcParams:
    """Degree-correlated wiring parameters."""

    mode: str = ASSORTATIVE
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in (ASSORTATIVE, DISASSORTATIVE):
            raise ValueError(
                f"mode must be {ASSORTATIVE!r} or {DISASSORTATIVE!r}, got {self.mode!r}"
            )


def max_pairwise_links(p, m: int) -> int:
    """floor(p * m / 2): the number of pairwise links for fraction p of m
    linkable nodes.

    Accepts exact `fractions.Fraction` values for p as well as floats; with
    floats the result is the floor of the rounded product.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"link fraction p must be in [0, 1], got {p}")
    if m < 0:
        raise ValueError(f"node count must be non-negative, got {m}")
    return math.floor(p * m / 2)


def weighted_link_kind(p_outer: float, p_edge: float, stream: Uint64Stream) -> LinkKind:
    """Draw a link kind with probabilities proportional to the two weights."""
    if p_outer < 0 or p_edge < 0 or p_outer + p_edge <= 0:
        raise ValueError("weights must be non-negative with a positive sum")
    threshold = p_outer / (p_outer + p_edge)
    return LinkKind.OUTER_NAME if stream.unit() < threshold else LinkKind.EDGE


def _require_positive_arity(controls: Mapping[NodeId, Control]) -> None:
    offenders = sorted(v for v, c in controls.items() if c.arity < 1)
    if offenders:
        raise ValueError(
            f"all nodes must have positive arity; zero-arity nodes: {offenders}"
        )


def mppl(controls: Mapping[NodeId, Control], params: MpplParams) -> LinkGraph:
    """Pairwise wiring over the given nodes (all must have arity >= 1).

    Exactly floor(p * m / 2) links are created, each joining port 0 of two
    distinct nodes; linked nodes leave the pool, so link-degrees are 0 or 1.

    Raises ValueError when the link count comes out below one.
    """
    _require_positive_arity(controls)
    node_ids = sorted(controls)
    m = len(node_ids)
    n_links = max_pairwise_links(params.p, m)
    if n_links < 1:
        raise ValueError(
            "probability p is too small or too few nodes for creating links"
        )
    threshold = params.p_outer / (params.p_outer + params.p_edge)
    first, second, kinds = _backend.mppl_kernel(params.seed, m, n_links, threshold)

    link_map: dict[Port, Link] = {}
    edges: list[Edge] = []
    names: list[Name] = []
    for i, j, kind in zip(first.tolist(), second.tolist(), kinds.tolist()):
        link: Link
        if kind == 0:
            link = Name(len(names))
            names.append(link)
        else:
            link = Edge(len(edges))
            edges.append(link)
        link_map[(node_ids[i], 0)] = link
        link_map[(node_ids[j], 0)] = link
    return LinkGraph(
        nodes=frozenset(node_ids),
        control_map=dict(controls),
        edges=frozenset(edges),
        outer_names=frozenset(names),
        link_map=link_map,
    )


def mdc(controls: Mapping[NodeId, Control], params: MdcParams) -> LinkGraph:
    """Degree-correlated wiring over the given nodes (all arity >= 1).

    Edges connect exactly two ports, always the lowest-indexed free port of
    each endpoint.  Nodes saturate and drop out, so the loop terminates on
    its own; with fewer than four nodes to start, the result has no links
    and a RuntimeWarning explains why.
    """
    _require_positive_arity(controls)
    node_ids = sorted(controls)
    if len(node_ids) < 4:
        warnings.warn(
            "degree-correlated wiring needs at least 4 nodes with free ports; "
            f"got {len(node_ids)}, returning an empty link graph",
            RuntimeWarning,
            stacklevel=2,
        )
        us, vs = np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    else:
        arities = np.array([controls[v].arity for v in node_ids], dtype=np.int64)
        us, vs = _backend.mdc_kernel(
            params.seed, arities, params.mode == ASSORTATIVE
        )

    link_map: dict[Port, Link] = {}
    used = {v: 0 for v in node_ids}
    edges = []
    for k, (iu, iv) in enumerate(zip(us.tolist(), vs.tolist())):
        edge = Edge(k)
        edges.append(edge)
        for idx in (iu, iv):
            v = node_ids[idx]
            link_map[(v, used[v])] = edge
            used[v] += 1
    return LinkGraph(
        nodes=frozenset(node_ids),
        control_map=dict(controls),
        edges=frozenset(edges),
        outer_names=frozenset(),
        link_map=link_map,
    )
