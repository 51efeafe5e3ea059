"""Persistence and exchange: bigraph documents, DOT export, metrics CSV.

A bigraph document is a single self-describing JSON text embedding the
signature and generation metadata, so a corpus can be regenerated from the
files alone.  Serialization is canonical (identical structures always
produce byte-identical text) and only ground agents are representable
(a document carrying sites or inner names is rejected).

Schema (format_version 1):

    {
      "format_version": 1,
      "signature":   [{"control": str, "arity": int}, ...],
      "roots":       int,
      "nodes":       [{"id": "v<k>", "control": str, "parent": "r<k>"|"v<k>"}, ...],
      "edges":       [{"id": "e<k>", "ports": [["v<k>", int], ...]}, ...],
      "outer_names": [{"name": "y<k>", "ports": [["v<k>", int], ...]}, ...],
      "meta":        object | null
    }

Nodes, edges and names are sorted by id, ports by (node, index).
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from io import StringIO
from typing import Any, Mapping, Sequence

from bigen.core import (
    Bigraph,
    Control,
    Edge,
    Link,
    LinkGraph,
    Name,
    NodeId,
    PlaceGraph,
    Port,
    Root,
    Signature,
    node_label,
    place_label,
    signature_of,
)
from bigen.metrics import (
    AssortativityReport,
    DegreeHistogram,
    FitResult,
    SampleMoments,
)

FORMAT_VERSION = 1

_NODE_RE = re.compile(r"^v(\d+)$")
_ROOT_RE = re.compile(r"^r(\d+)$")
_EDGE_RE = re.compile(r"^e(\d+)$")
_NAME_RE = re.compile(r"^y(\d+)$")


class DocumentError(ValueError):
    """Raised for malformed or unreadable bigraph documents."""


@dataclass(frozen=True)
class Document:
    bigraph: Bigraph
    signature: Signature
    meta: Mapping[str, Any] | None


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _sorted_ports(ports: Sequence[Port]) -> list[list[object]]:
    return [[node_label(v), i] for v, i in sorted(ports)]


def _canonical_meta(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _canonical_meta(value[k]) for k in sorted(value)}
    if isinstance(value, (list, tuple)):
        return [_canonical_meta(v) for v in value]
    return value


def serialize(
    b: Bigraph,
    meta: Mapping[str, Any] | None = None,
    signature: Signature | None = None,
) -> str:
    """Render a bigraph as canonical document text.

    The signature defaults to the distinct node controls in label order;
    pass the generation signature to preserve unused controls.
    """
    if signature is None:
        signature = signature_of(b.place.control_map[v] for v in sorted(b.place.nodes))
    else:
        known = {c.label: c for c in signature.controls}
        for v in sorted(b.place.nodes):
            control = b.place.control_map[v]
            if known.get(control.label) != control:
                raise ValueError(
                    f"node control {control.label}:{control.arity} missing from signature"
                )

    ports_by_link: dict[Link, list[Port]] = {}
    for port, link in b.link.link_map.items():
        ports_by_link.setdefault(link, []).append(port)

    doc = {
        "format_version": FORMAT_VERSION,
        "signature": [
            {"control": c.label, "arity": c.arity} for c in signature.controls
        ],
        "roots": b.place.root_count,
        "nodes": [
            {
                "id": node_label(v),
                "control": b.place.control_map[v].label,
                "parent": place_label(b.place.parent_map[v]),
            }
            for v in sorted(b.place.nodes)
        ],
        "edges": [
            {"id": str(e), "ports": _sorted_ports(ports_by_link.get(e, []))}
            for e in sorted(b.link.edges, key=lambda e: e.index)
        ],
        "outer_names": [
            {"name": str(y), "ports": _sorted_ports(ports_by_link.get(y, []))}
            for y in sorted(b.link.outer_names, key=lambda y: y.index)
        ],
        "meta": _canonical_meta(dict(meta)) if meta else None,
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Deserialization
# ---------------------------------------------------------------------------

def _expect(doc: Mapping[str, Any], key: str, kind: type) -> Any:
    if key not in doc:
        raise DocumentError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise DocumentError(f"field {key!r} must be {kind.__name__}")
    return value


def _parse_id(pattern: re.Pattern[str], text: Any, what: str) -> int:
    if not isinstance(text, str) or not (match := pattern.match(text)):
        raise DocumentError(f"bad {what} identifier {text!r}")
    return int(match.group(1))


def _parse_ports(
    entries: Any, owner: str, nodes: set[NodeId]
) -> list[Port]:
    if not isinstance(entries, list):
        raise DocumentError(f"ports of {owner} must be a list")
    ports = []
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise DocumentError(f"bad port entry {entry!r} on {owner}")
        v = _parse_id(_NODE_RE, entry[0], "node")
        if v not in nodes:
            raise DocumentError(f"port on undeclared node {entry[0]} ({owner})")
        index = entry[1]
        if not isinstance(index, int) or index < 0:
            raise DocumentError(f"bad port index {index!r} on {owner}")
        ports.append((v, index))
    return ports


def load_document(text: str) -> Document:
    """Parse document text; malformed input raises DocumentError with the
    offending field, and no partial value is ever returned.

    Structural invariants (port bounds, acyclicity) are not checked here;
    run core.validate on the result.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object")

    version = _expect(doc, "format_version", int)
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version}")
    for banned in ("sites", "inner_names"):
        if doc.get(banned):
            raise DocumentError(f"agents cannot carry {banned}")

    controls: dict[str, Control] = {}
    for entry in _expect(doc, "signature", list):
        if not isinstance(entry, dict):
            raise DocumentError(f"bad signature entry {entry!r}")
        label = _expect(entry, "control", str)
        arity = _expect(entry, "arity", int)
        if arity < 0:
            raise DocumentError(f"control {label!r} has negative arity")
        if label in controls:
            raise DocumentError(f"duplicate control {label!r}")
        controls[label] = Control(label, arity)
    signature = Signature(tuple(controls.values()))

    roots = _expect(doc, "roots", int)
    if roots < 0:
        raise DocumentError(f"negative root count {roots}")

    nodes: set[NodeId] = set()
    control_map: dict[NodeId, Control] = {}
    raw_parents: dict[NodeId, str] = {}
    for entry in _expect(doc, "nodes", list):
        if not isinstance(entry, dict):
            raise DocumentError(f"bad node entry {entry!r}")
        v = _parse_id(_NODE_RE, _expect(entry, "id", str), "node")
        if v in nodes:
            raise DocumentError(f"duplicate node id v{v}")
        label = _expect(entry, "control", str)
        if label not in controls:
            raise DocumentError(f"node v{v} references unknown control {label!r}")
        nodes.add(v)
        control_map[v] = controls[label]
        raw_parents[v] = _expect(entry, "parent", str)

    parent_map: dict[NodeId, NodeId | Root] = {}
    for v, ref in raw_parents.items():
        if _ROOT_RE.match(ref):
            index = int(ref[1:])
            if index >= roots:
                raise DocumentError(f"node v{v} references unknown parent {ref}")
            parent_map[v] = Root(index)
        else:
            parent = _parse_id(_NODE_RE, ref, "parent")
            if parent not in nodes:
                raise DocumentError(f"node v{v} references unknown parent {ref}")
            parent_map[v] = parent

    link_map: dict[Port, Link] = {}
    edges: list[Edge] = []
    names: list[Name] = []

    def wire(link: Link, ports: list[Port], owner: str) -> None:
        for port in ports:
            if port in link_map:
                raise DocumentError(
                    f"port ({node_label(port[0])}, {port[1]}) wired twice ({owner})"
                )
            link_map[port] = link

    seen_edges: set[int] = set()
    for entry in _expect(doc, "edges", list):
        if not isinstance(entry, dict):
            raise DocumentError(f"bad edge entry {entry!r}")
        index = _parse_id(_EDGE_RE, _expect(entry, "id", str), "edge")
        if index in seen_edges:
            raise DocumentError(f"duplicate edge id e{index}")
        seen_edges.add(index)
        edge = Edge(index)
        edges.append(edge)
        wire(edge, _parse_ports(entry.get("ports"), f"e{index}", nodes), f"e{index}")

    seen_names: set[int] = set()
    for entry in _expect(doc, "outer_names", list):
        if not isinstance(entry, dict):
            raise DocumentError(f"bad outer name entry {entry!r}")
        index = _parse_id(_NAME_RE, _expect(entry, "name", str), "outer name")
        if index in seen_names:
            raise DocumentError(f"duplicate outer name y{index}")
        seen_names.add(index)
        name = Name(index)
        names.append(name)
        wire(name, _parse_ports(entry.get("ports"), f"y{index}", nodes), f"y{index}")

    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise DocumentError("meta must be an object or null")

    place = PlaceGraph(
        root_count=roots,
        nodes=frozenset(nodes),
        control_map=control_map,
        parent_map=parent_map,
    )
    link = LinkGraph(
        nodes=frozenset(nodes),
        control_map=control_map,
        edges=frozenset(edges),
        outer_names=frozenset(names),
        link_map=link_map,
    )
    return Document(bigraph=Bigraph(place, link), signature=signature, meta=meta)


def deserialize(text: str) -> Bigraph:
    """Inverse of serialize, up to structural equality."""
    return load_document(text).bigraph


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

def export_dot(b: Bigraph) -> str:
    """Graphviz text: the place hierarchy as solid tree arcs, each link as
    an auxiliary vertex with dashed lines to the ports it connects."""
    lines = ["digraph bigraph {"]
    for r in range(b.place.root_count):
        lines.append(f'  "r{r}" [shape=box, style=dashed];')
    for v in sorted(b.place.nodes):
        control = b.place.control_map[v]
        lines.append(
            f'  "{node_label(v)}" [shape=ellipse, label="{node_label(v)}:{control.label}"];'
        )
    for v in sorted(b.place.nodes):
        lines.append(f'  "{place_label(b.place.parent_map[v])}" -> "{node_label(v)}";')

    links: list[Link] = sorted(b.link.edges, key=lambda e: e.index)
    links += sorted(b.link.outer_names, key=lambda y: y.index)
    for link in links:
        shape = "point" if isinstance(link, Edge) else "plaintext"
        lines.append(f'  "{link}" [shape={shape}, label="{link}"];')
    for (v, i), link in sorted(b.link.link_map.items(), key=lambda kv: (kv[0], str(kv[1]))):
        lines.append(
            f'  "{node_label(v)}" -> "{link}" [style=dashed, arrowhead=none, taillabel="{i}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Metrics CSV
# ---------------------------------------------------------------------------

def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


def csv_text(header: list[str], rows: list[list[object]]) -> str:
    """CSV text with floats at nine significant digits."""
    out = StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) if isinstance(x, (int, float, type(None))) else x for x in row])
    return out.getvalue()


def histogram_csv(hist: DegreeHistogram) -> str:
    rows = [[d, hist.bins[d], hist.fractions[d]] for d in sorted(hist.bins)]
    return csv_text(["degree", "count", "fraction"], rows)


def moments_csv(moments: SampleMoments) -> str:
    return csv_text(
        ["mean", "sd", "variance", "skewness", "kurtosis_excess"],
        [[moments.mean, moments.sd, moments.variance, moments.skewness, moments.kurtosis]],
    )


def fits_csv(fits: Sequence[FitResult]) -> str:
    rows = [[f.model, f.estimate, f.std_error, f.log_likelihood, f.aic] for f in fits]
    return csv_text(["model", "estimate", "std_error", "log_likelihood", "aic"], rows)


def assortativity_csv(report: AssortativityReport) -> str:
    rows = []
    for v in sorted(report.per_node):
        entry = report.per_node[v]
        rows.append(
            [
                node_label(v),
                entry.arity,
                entry.connected_ports,
                entry.degree,
                entry.neighbor_diff,
                entry.scaled_diff,
                entry.alpha,
            ]
        )
    return csv_text(
        ["node", "arity", "connected_ports", "link_degree", "neighbor_diff", "scaled_diff", "alpha"],
        rows,
    )


def write_metrics_csv(report: object) -> str:
    """CSV text for any metrics report type."""
    if isinstance(report, DegreeHistogram):
        return histogram_csv(report)
    if isinstance(report, SampleMoments):
        return moments_csv(report)
    if isinstance(report, FitResult):
        return fits_csv([report])
    if isinstance(report, AssortativityReport):
        return assortativity_csv(report)
    if isinstance(report, (list, tuple)) and all(isinstance(f, FitResult) for f in report):
        return fits_csv(report)
    raise TypeError(f"no CSV writer for {type(report).__name__}")
