"""Random place-graph generation with preferential attachment.

Roots are created first; nodes are then attached one at a time, each
drawing its parent uniformly from a reference list in which a place appears
once for its creation plus once per child it has acquired.  Selection is
therefore proportional to 1 + child count, giving childless places a
positive chance while preserving the rich-get-richer dynamic.  Controls
are drawn uniformly from the signature (optionally weighted).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from bigen import _backend
from bigen.core import Place, PlaceGraph, Root, Signature
from bigen.rng import Uint64Stream


@dataclass(frozen=True)
class PlaceGenParams:
    """Parameters for one place-graph generation run.

    `places` counts roots and nodes together, so `places - roots` nodes are
    created.  `control_weights`, when given, biases control selection and
    must have one non-negative entry per control with a positive sum.
    """

    roots: int
    places: int
    signature: Signature
    seed: int = 0
    control_weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.roots < 1:
            raise ValueError(f"need at least one root, got {self.roots}")
        if self.places < self.roots:
            raise ValueError(
                f"total places {self.places} smaller than root count {self.roots}"
            )
        if len(self.signature) == 0:
            raise ValueError("signature must not be empty")
        if self.control_weights is not None:
            if len(self.control_weights) != len(self.signature):
                raise ValueError("need one weight per control")
            if any(w < 0 for w in self.control_weights):
                raise ValueError("control weights must be non-negative")
            if sum(self.control_weights) <= 0:
                raise ValueError("control weights must not all be zero")


@dataclass
class ReferenceList:
    """Multiset of place references realizing preferential attachment.

    A place's multiplicity equals one (its creation entry) plus the number
    of re-appends it received as a chosen parent, so a uniform draw over
    entries selects each place with probability multiplicity / length.
    """

    entries: list[Place] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def append(self, place: Place) -> None:
        self.entries.append(place)

    def multiplicity(self, place: Place) -> int:
        return self.entries.count(place)


def preferential_pick(refs: ReferenceList, stream: Uint64Stream) -> Place:
    """Uniform draw over the reference list entries."""
    if len(refs) == 0:
        raise ValueError("cannot pick from an empty reference list")
    return refs.entries[stream.bounded(len(refs))]


def cumulative_weights(weights: tuple[float, ...]) -> np.ndarray:
    """Normalized cumulative weights with the final entry pinned to 1.0."""
    cum = np.cumsum(np.asarray(weights, dtype=np.float64))
    cum /= cum[-1]
    cum[-1] = 1.0
    return cum


def generate_place_graph(params: PlaceGenParams) -> PlaceGraph:
    """Generate a random place graph; deterministic for a fixed seed."""
    cum = (
        None
        if params.control_weights is None
        else cumulative_weights(params.control_weights)
    )
    parents, controls = _backend.pgg_kernel(
        params.seed,
        params.roots,
        params.places,
        len(params.signature),
        cum,
    )
    roots = params.roots
    parent_map: dict[int, Place] = {}
    control_map = {}
    for j, (parent, k) in enumerate(zip(parents.tolist(), controls.tolist())):
        parent_map[j] = Root(parent) if parent < roots else parent - roots
        control_map[j] = params.signature[k]
    return PlaceGraph(
        root_count=roots,
        nodes=frozenset(range(params.places - roots)),
        control_map=control_map,
        parent_map=parent_map,
    )
