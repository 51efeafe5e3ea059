"""Random bigraph generation and analysis.

Agents (ground bigraphs) are produced by growing a place graph with
preferential attachment and wiring its positive-arity nodes with either a
minimal pairwise strategy or a degree-correlated one; the metrics module
reproduces the accompanying statistical analyses.
"""

from bigen._backend import BACKEND
from bigen.core import (
    Bigraph,
    Control,
    Edge,
    LinkGraph,
    Name,
    PlaceGraph,
    Root,
    Signature,
    validate,
)
from bigen.linkgen import MdcParams, MpplParams, mdc, mppl
from bigen.placegen import PlaceGenParams, generate_place_graph

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Bigraph",
    "Control",
    "Edge",
    "LinkGraph",
    "MdcParams",
    "MpplParams",
    "Name",
    "PlaceGenParams",
    "PlaceGraph",
    "Root",
    "Signature",
    "__version__",
    "generate_place_graph",
    "mdc",
    "mppl",
    "validate",
]
