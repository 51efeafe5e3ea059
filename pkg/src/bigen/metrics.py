"""Statistical analyses of generated bigraphs.

Covers place-graph degree distributions, counts of linkable (positive
arity) nodes with moments and maximum-likelihood fits of three discrete
models ranked by AIC, and per-node assortativity of link graphs based on
the average neighbor difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from bigen.core import (
    Bigraph,
    Link,
    LinkGraph,
    NodeId,
    PlaceGraph,
    Root,
)

# ---------------------------------------------------------------------------
# Place-graph statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeHistogram:
    """Degree counts over all places (roots and nodes)."""

    bins: Mapping[int, int]
    fractions: Mapping[int, float]
    total_places: int

    @property
    def average_degree(self) -> float:
        return sum(d * c for d, c in self.bins.items()) / self.total_places


def degree_distribution(pg: PlaceGraph) -> DegreeHistogram:
    """Histogram of place degrees: child count for roots, 1 + child count
    for nodes.

    The denominator counts every place, so the average comes out to
    2 * (#nodes) / (#places), since each parent-child relation contributes one
    degree at both ends.
    """
    child_counts: dict[int, int] = {}
    for parent in pg.parent_map.values():
        key = -1 - parent.index if isinstance(parent, Root) else parent
        child_counts[key] = child_counts.get(key, 0) + 1

    bins: dict[int, int] = {}
    for r in range(pg.root_count):
        d = child_counts.get(-1 - r, 0)
        bins[d] = bins.get(d, 0) + 1
    for v in pg.nodes:
        d = 1 + child_counts.get(v, 0)
        bins[d] = bins.get(d, 0) + 1

    total = pg.place_count
    bins = dict(sorted(bins.items()))
    fractions = {d: c / total for d, c in bins.items()}
    return DegreeHistogram(bins=bins, fractions=fractions, total_places=total)


def positive_arity_count(graph: Bigraph | PlaceGraph | LinkGraph) -> int:
    """Number of nodes (roots never count) whose control has arity >= 1."""
    if isinstance(graph, Bigraph):
        graph = graph.place
    return sum(1 for v in graph.nodes if graph.control_map[v].arity >= 1)


# ---------------------------------------------------------------------------
# Moments and distribution fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleMoments:
    mean: float
    sd: float
    variance: float
    skewness: float
    kurtosis: float  # excess


def sample_moments(samples: Sequence[float]) -> SampleMoments:
    """Mean, unbiased variance/sd, and standardized central-moment skewness
    and excess kurtosis (both bias-uncorrected)."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise ValueError(f"need at least 2 samples, got {x.size}")
    mean = float(x.mean())
    variance = float(x.var(ddof=1))
    centered = x - mean
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        skewness = math.nan
        kurtosis = math.nan
    else:
        skewness = float(np.mean(centered**3)) / m2**1.5
        kurtosis = float(np.mean(centered**4)) / m2**2 - 3.0
    return SampleMoments(
        mean=mean,
        sd=math.sqrt(variance),
        variance=variance,
        skewness=skewness,
        kurtosis=kurtosis,
    )


@dataclass(frozen=True)
class FitResult:
    model: str
    estimate: float
    std_error: float
    log_likelihood: float
    aic: float


def aic(log_likelihood: float, k: int) -> float:
    """Akaike information criterion, 2k - 2 ln L; lower is better."""
    if k < 1:
        raise ValueError(f"parameter count must be >= 1, got {k}")
    return 2.0 * k - 2.0 * log_likelihood


def _as_samples(samples: Sequence[float]) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("need at least one sample")
    return x


def fit_binomial(samples: Sequence[int], n: int) -> FitResult:
    """Closed-form MLE for the success probability of a binomial with a
    known trial count n; SE from the Fisher information of N samples."""
    x = _as_samples(samples)
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got {n}")
    if x.min() < 0 or x.max() > n:
        raise ValueError(f"samples must lie in [0, {n}]")
    n_samples = x.size
    p_hat = float(x.mean()) / n
    se = math.sqrt(p_hat * (1.0 - p_hat) / (n * n_samples))
    log_l = float(stats.binom.logpmf(x, n, p_hat).sum())
    return FitResult("binomial", p_hat, se, log_l, aic(log_l, 1))


def fit_poisson(samples: Sequence[int]) -> FitResult:
    """Closed-form MLE for the Poisson rate: the sample mean."""
    x = _as_samples(samples)
    if x.min() < 0:
        raise ValueError("samples must be non-negative")
    n_samples = x.size
    mu_hat = float(x.mean())
    se = math.sqrt(mu_hat / n_samples)
    log_l = float(stats.poisson.logpmf(x, mu_hat).sum())
    return FitResult("poisson", mu_hat, se, log_l, aic(log_l, 1))


def fit_geometric(samples: Sequence[int]) -> FitResult:
    """Closed-form MLE for a geometric distribution counting failures
    before the first success (support 0, 1, 2, ...): p = 1 / (1 + mean)."""
    x = _as_samples(samples)
    if x.min() < 0:
        raise ValueError("samples must be non-negative")
    n_samples = x.size
    mean = float(x.mean())
    p_hat = 1.0 / (1.0 + mean)
    se = math.sqrt(p_hat**2 * (1.0 - p_hat) / n_samples)
    if mean == 0.0:
        log_l = 0.0
    else:
        log_l = n_samples * (math.log(p_hat) + mean * math.log(1.0 - p_hat))
    return FitResult("geometric", p_hat, se, log_l, aic(log_l, 1))


def fit_all(samples: Sequence[int], n: int) -> list[FitResult]:
    """Binomial (trial count n), Poisson and geometric fits of one sample."""
    return [fit_binomial(samples, n), fit_poisson(samples), fit_geometric(samples)]


# ---------------------------------------------------------------------------
# Link-graph degrees and assortativity
# ---------------------------------------------------------------------------

def _links_of(lg: LinkGraph, v: NodeId) -> set[Link]:
    if v not in lg.nodes:
        raise KeyError(f"unknown node v{v}")
    return {link for (u, _), link in lg.link_map.items() if u == v}


def link_degree(lg: LinkGraph, v: NodeId) -> int:
    """Number of distinct links touched by v's ports (two ports on one
    edge count once)."""
    return len(_links_of(lg, v))


def link_neighbors(lg: LinkGraph, v: NodeId) -> set[NodeId]:
    """Nodes sharing at least one link with v, excluding v itself."""
    mine = _links_of(lg, v)
    return {u for (u, _), link in lg.link_map.items() if link in mine and u != v}


def avg_neighbor_difference(lg: LinkGraph, v: NodeId) -> float:
    """Mean absolute link-degree gap to v's neighbor nodes, normalized by
    v's own link degree; undefined (ValueError) for isolated nodes."""
    d_v = link_degree(lg, v)
    if d_v == 0:
        raise ValueError(f"average neighbor difference undefined: v{v} is isolated")
    return sum(abs(link_degree(lg, u) - d_v) for u in link_neighbors(lg, v)) / d_v


@dataclass(frozen=True)
class NodeAssortativity:
    node: NodeId
    arity: int
    connected_ports: int
    degree: int
    neighbor_diff: float | None
    scaled_diff: float | None
    alpha: float | None


@dataclass(frozen=True)
class ClassFractions:
    slightly_assortative: float
    slightly_disassortative: float
    strong_outlier: float


@dataclass(frozen=True)
class AssortativityReport:
    """Per-node assortativity over the linked nodes of a link graph.

    The population N covers the nodes with at least one link; neighbor
    differences are scaled to unit sum, so sum(alpha) == assumed_r and
    mean(alpha) == assumed_r / N hold by construction whenever the scale
    total S is positive.  S == 0 (all linked nodes see equal-degree
    neighbors) is tagged degenerate instead of dividing by zero.
    """

    per_node: Mapping[NodeId, NodeAssortativity]
    assumed_r: float
    population: int
    diff_total: float
    lam: float
    mu_alpha: float | None
    sigma_alpha: float | None
    class_fractions: ClassFractions | None
    degenerate: bool


def node_assortativity(lg: LinkGraph, assumed_r: float = 1.0) -> AssortativityReport:
    """Assortativity of each linked node: alpha = lambda - scaled neighbor
    difference, with lambda = (1 + assumed_r) / N.

    assumed_r in [-1, 1] is the correlation coefficient the link graph is
    assumed to have (+1 perfectly assortative, -1 perfectly disassortative).
    Nodes within 3 sigma above (below) the mean alpha are classed slightly
    more assortative (disassortative); the rest are strong outliers.
    """
    if not -1.0 <= assumed_r <= 1.0:
        raise ValueError(f"assumed_r must be in [-1, 1], got {assumed_r}")

    links_of: dict[NodeId, set[Link]] = {v: set() for v in lg.nodes}
    members: dict[Link, set[NodeId]] = {}
    for (v, _), link in lg.link_map.items():
        links_of[v].add(link)
        members.setdefault(link, set()).add(v)

    degree = {v: len(links) for v, links in links_of.items()}
    ports = {v: 0 for v in lg.nodes}
    for (v, _) in lg.link_map:
        ports[v] += 1

    diffs: dict[NodeId, float] = {}
    for v in lg.nodes:
        d_v = degree[v]
        if d_v == 0:
            continue
        neighbors: set[NodeId] = set()
        for link in links_of[v]:
            neighbors |= members[link]
        neighbors.discard(v)
        diffs[v] = sum(abs(degree[u] - d_v) for u in neighbors) / d_v

    population = len(diffs)
    if population == 0:
        raise ValueError("no linked node in the link graph")
    total = math.fsum(diffs.values())
    lam = (1.0 + assumed_r) / population

    def record(v: NodeId, scaled: float | None, alpha: float | None) -> NodeAssortativity:
        return NodeAssortativity(
            node=v,
            arity=lg.control_map[v].arity,
            connected_ports=ports[v],
            degree=degree[v],
            neighbor_diff=diffs.get(v),
            scaled_diff=scaled,
            alpha=alpha,
        )

    if total == 0.0:
        per_node = {v: record(v, None, None) for v in sorted(lg.nodes)}
        return AssortativityReport(
            per_node=per_node,
            assumed_r=assumed_r,
            population=population,
            diff_total=0.0,
            lam=lam,
            mu_alpha=None,
            sigma_alpha=None,
            class_fractions=None,
            degenerate=True,
        )

    alphas = {v: lam - diffs[v] / total for v in diffs}
    values = np.fromiter(alphas.values(), dtype=np.float64, count=population)
    mu = float(values.mean())
    sigma = float(values.std())

    low, high = mu - 3.0 * sigma, mu + 3.0 * sigma
    n_assort = sum(1 for a in values if mu < a <= high)
    n_disassort = sum(1 for a in values if low <= a <= mu)
    n_outlier = population - n_assort - n_disassort
    fractions = ClassFractions(
        slightly_assortative=n_assort / population,
        slightly_disassortative=n_disassort / population,
        strong_outlier=n_outlier / population,
    )

    per_node = {}
    for v in sorted(lg.nodes):
        if v in diffs:
            per_node[v] = record(v, diffs[v] / total, alphas[v])
        else:
            per_node[v] = record(v, None, None)
    return AssortativityReport(
        per_node=per_node,
        assumed_r=assumed_r,
        population=population,
        diff_total=total,
        lam=lam,
        mu_alpha=mu,
        sigma_alpha=sigma,
        class_fractions=fractions,
        degenerate=False,
    )
