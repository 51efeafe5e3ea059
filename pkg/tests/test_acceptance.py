"""Acceptance suite: every criterion prints one [PASS]/[FAIL] line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the lines even
when everything passes.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from bigen import _backend, core, linkgen, metrics
from bigen.cli import build_agent
from bigen.core import Control, Root, split_arity_signature, validate
from bigen.io import deserialize, serialize
from bigen.linkgen import ASSORTATIVE, DISASSORTATIVE, MdcParams, MpplParams
from bigen.metrics import (
    degree_distribution,
    fit_all,
    node_assortativity,
    positive_arity_count,
)
from bigen.placegen import PlaceGenParams, generate_place_graph
from bigen.rng import derive_seed
from conftest import make_place_graph

NOMINAL_FRACTIONS = (0.1, 0.25, 0.5, 0.8)
NODE_COUNTS = (10, 100, 1000)
REPLICATIONS = 1000


def _report(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}"
    if detail:
        line += f" :: {detail}"
    print(line)
    assert ok, line


def _uniform_arity_controls(n: int = 1000, top: int = 40) -> dict[int, Control]:
    return {v: Control(f"A{1 + v % top}", 1 + v % top) for v in range(n)}


# ---------------------------------------------------------------------------
# 1. Average-degree identity
# ---------------------------------------------------------------------------

def test_criterion_1_average_degree_identity():
    sig = split_arity_signature(26, 13)
    worst = 0.0
    for roots in (1, 10, 50):
        for places in (10, 100, 1000):
            if places < roots:
                continue
            for seed in (0, 1, 424242):
                pg = generate_place_graph(
                    PlaceGenParams(roots, places, sig, seed=seed)
                )
                expected = 2 * (places - roots) / places
                worst = max(worst, abs(degree_distribution(pg).average_degree - expected))
    _report(
        "C1 average degree == 2(n-t)/n over the full grid",
        worst <= 1e-12,
        f"worst deviation {worst:.3g}",
    )


# ---------------------------------------------------------------------------
# 2 + 3. Counts of linkable nodes: moments, fits, AIC ranking
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def arity_count_samples():
    """Positive-arity counts for every (fraction, node-count) cell."""
    samples: dict[tuple[float, int], list[int]] = {}
    for pi, nominal in enumerate(NOMINAL_FRACTIONS):
        positive = math.ceil(26 * nominal)
        sig = split_arity_signature(26, positive)
        for nodes in NODE_COUNTS:
            cell = [
                positive_arity_count(
                    generate_place_graph(
                        PlaceGenParams(
                            1, nodes + 1, sig, seed=derive_seed(2, pi, nodes, run)
                        )
                    )
                )
                for run in range(REPLICATIONS)
            ]
            samples[(nominal, nodes)] = cell
    return samples


def test_criterion_2_binomial_arity_counts(arity_count_samples):
    failures = []
    for (nominal, nodes), counts in arity_count_samples.items():
        p_eff = math.ceil(26 * nominal) / 26
        expected_mean = nodes * p_eff
        expected_var = nodes * p_eff * (1 - p_eff)
        moments = metrics.sample_moments(counts)
        tol = 4 * math.sqrt(expected_var / REPLICATIONS)
        if abs(moments.mean - expected_mean) > tol:
            failures.append(f"mean p={nominal} n={nodes}")
        if nodes >= 100 and abs(moments.variance - expected_var) > 0.15 * expected_var:
            failures.append(f"var p={nominal} n={nodes}")
    _report(
        "C2 linkable-node counts match the binomial law on the 4x3 grid",
        not failures,
        ", ".join(failures) or f"r={REPLICATIONS}",
    )


def test_criterion_3_mle_aic_ranking(arity_count_samples):
    failures = []
    gaps = []
    for nominal in NOMINAL_FRACTIONS:
        counts = arity_count_samples[(nominal, 1000)]
        by_model = {f.model: f for f in fit_all(counts, 1000)}
        if not (
            by_model["binomial"].aic
            < by_model["poisson"].aic
            < by_model["geometric"].aic
        ):
            failures.append(f"ordering p={nominal}")
        gaps.append(by_model["poisson"].aic - by_model["binomial"].aic)
    if not all(a < b for a, b in zip(gaps, gaps[1:])):
        failures.append(f"gap not increasing: {[round(g, 2) for g in gaps]}")

    if not math.isclose(metrics.aic(-37280.12, 1), 74562.24, rel_tol=1e-6):
        failures.append("aic arithmetic")
    if not math.isclose(1 / (1 + 115.2991), 0.008598519, rel_tol=1e-6):
        failures.append("geometric estimate arithmetic")
    _report(
        "C3 AIC ranks binomial < poisson < geometric with widening gap",
        not failures,
        ", ".join(failures) or f"gaps {[round(g, 1) for g in gaps]}",
    )


# ---------------------------------------------------------------------------
# 4. Pairwise wiring contracts
# ---------------------------------------------------------------------------

def _agent_with_ten_linkable_nodes(seed: int):
    """Hand-built 20-place agent: 2 roots, 10 linkable nodes, 8 inert."""
    controls = {
        v: Control("L", 1) if v < 10 else Control("Z", 0) for v in range(18)
    }
    parents = {v: Root(v % 2) for v in range(18)}
    pg = make_place_graph(2, parents, controls)
    wiring = linkgen.mppl(
        core.positive_arity_nodes(pg), MpplParams(p=1.0, seed=seed)
    )
    return core.pair_with_wiring(pg, wiring)


def test_criterion_4_pairwise_wiring_contracts():
    failures = []
    for s in range(100):
        agent = _agent_with_ten_linkable_nodes(derive_seed(4, s))
        n_links = len(agent.link.edges) + len(agent.link.outer_names)
        if n_links != 5:
            failures.append(f"links={n_links} seed {s}")
            break
        degrees = [metrics.link_degree(agent.link, v) for v in agent.link.nodes]
        if not set(degrees) <= {0, 1}:
            failures.append(f"degrees seed {s}")
            break
        linked = {v for (v, _) in agent.link.link_map}
        if len(linked) / agent.place.place_count != 0.5:  # p*m/n = 10/20
            failures.append(f"linked fraction seed {s}")
            break
        if not validate(agent).ok:
            failures.append(f"validation seed {s}")
            break

    # Selection uniformity across 10^4 seeds at p = 0.6 (6 of 10 wired).
    counts = np.zeros(10)
    for s in range(10_000):
        first, second, _ = _backend.mppl_kernel(derive_seed(5, s), 10, 3, 0.5)
        counts[first] += 1
        counts[second] += 1
    pvalue = stats.chisquare(counts).pvalue
    if pvalue <= 0.01:
        failures.append(f"uniformity p-value {pvalue:.4f}")
    _report(
        "C4 pairwise wiring: 5 links, degrees in {0,1}, uniform selection",
        not failures,
        ", ".join(failures) or f"chi-square p-value {pvalue:.3f}",
    )


# ---------------------------------------------------------------------------
# 5. Degree-correlated wiring contracts
# ---------------------------------------------------------------------------

def test_criterion_5_degree_correlated_wiring_contracts():
    failures = []
    rng = np.random.default_rng(2718)
    for trial in range(10_000):
        size = int(rng.integers(4, 201))
        arities = rng.integers(1, 41, size=size).astype(np.int64)
        us, vs = _backend.mdc_kernel(
            derive_seed(6, trial), arities, bool(trial % 2)
        )
        if len(us) > arities.sum() // 2:
            failures.append(f"too many edges, trial {trial}")
            break
        if np.any(us == vs):
            failures.append(f"self-loop, trial {trial}")
            break
        usage = np.bincount(np.concatenate([us, vs]), minlength=size)
        if np.any(usage > arities):
            failures.append(f"arity exceeded, trial {trial}")
            break
        free_nodes = int(np.count_nonzero(usage < arities))
        if free_nodes > 3:
            failures.append(f"stopped early, trial {trial}")
            break
        if trial % 500 == 0:
            # Spot-check the full wrapper path on a sample of trials.
            controls = {v: Control(f"A{a}", int(a)) for v, a in enumerate(arities)}
            lg = linkgen.mdc(
                controls,
                MdcParams(
                    mode=DISASSORTATIVE if trial % 2 else ASSORTATIVE,
                    seed=derive_seed(6, trial),
                ),
            )
            pg = make_place_graph(1, {v: Root(0) for v in controls}, controls)
            if not validate(core.pair_with_wiring(pg, lg)).ok:
                failures.append(f"wrapper validation, trial {trial}")
                break

    saturations = []
    controls = _uniform_arity_controls()
    total_ports = sum(c.arity for c in controls.values())
    for s in range(20):
        lg = linkgen.mdc(controls, MdcParams(mode=ASSORTATIVE, seed=derive_seed(7, s)))
        saturations.append(len(lg.link_map) / total_ports)
    if min(saturations) < 0.95:
        failures.append(f"saturation {min(saturations):.4f}")
    _report(
        "C5 degree-correlated wiring: 2-endpoint edges, arity bound, "
        "termination, >=95% saturation",
        not failures,
        ", ".join(failures) or f"min saturation {min(saturations):.4f}",
    )


# ---------------------------------------------------------------------------
# 6. Assortativity bookkeeping
# ---------------------------------------------------------------------------

def test_criterion_6_assortativity_bookkeeping(hub_link_graph):
    failures = []
    if metrics.avg_neighbor_difference(hub_link_graph, 0) != 4 / 3:
        failures.append("hub neighbor difference not exactly 4/3")

    for size in (50, 200, 1000):
        controls = _uniform_arity_controls(size)
        for mode in (ASSORTATIVE, DISASSORTATIVE):
            for assumed_r in (1.0, -1.0):
                lg = linkgen.mdc(
                    controls, MdcParams(mode=mode, seed=derive_seed(8, size))
                )
                report = node_assortativity(lg, assumed_r)
                scaled = math.fsum(
                    e.scaled_diff for e in report.per_node.values()
                    if e.scaled_diff is not None
                )
                alphas = math.fsum(
                    e.alpha for e in report.per_node.values() if e.alpha is not None
                )
                if abs(scaled - 1.0) > 1e-9:
                    failures.append(f"scaled sum {mode} N={size}")
                if abs(alphas - assumed_r) > 1e-9:
                    failures.append(f"alpha sum {mode} r={assumed_r} N={size}")

    big = node_assortativity(
        linkgen.mdc(_uniform_arity_controls(), MdcParams(seed=derive_seed(8, 0))),
        assumed_r=1.0,
    )
    if big.population != 1000 or big.lam != 0.002:
        failures.append(f"lambda {big.lam} over population {big.population}")

    # Pairwise wiring gives every linked node equal degree: tagged degenerate.
    wiring = linkgen.mppl(
        {v: Control("L", 1) for v in range(10)}, MpplParams(p=1.0, seed=1)
    )
    if not node_assortativity(wiring, 1.0).degenerate:
        failures.append("pairwise output not tagged degenerate")
    _report(
        "C6 neighbor-difference bookkeeping: sums and scaling factor exact",
        not failures,
        ", ".join(failures) or "sums within 1e-9",
    )


# ---------------------------------------------------------------------------
# 7. Directional mixing
# ---------------------------------------------------------------------------

def test_criterion_7_directional_mixing():
    failures = []
    controls = _uniform_arity_controls()
    for s in range(20):
        lg = linkgen.mdc(controls, MdcParams(mode=ASSORTATIVE, seed=derive_seed(9, s)))
        report = node_assortativity(lg, 1.0)
        pairs = [
            (e.arity, e.alpha) for e in report.per_node.values() if e.alpha is not None
        ]
        rho = stats.spearmanr([a for a, _ in pairs], [al for _, al in pairs]).statistic
        if not rho > 0:
            failures.append(f"assortative rho {rho:.3f} seed {s}")

        lgd = linkgen.mdc(
            controls, MdcParams(mode=DISASSORTATIVE, seed=derive_seed(10, s))
        )
        reportd = node_assortativity(lgd, -1.0)
        entries = sorted(
            (e for e in reportd.per_node.values() if e.alpha is not None),
            key=lambda e: (e.arity, e.node),
        )
        decile = len(entries) // 10
        low = np.mean([e.alpha for e in entries[:decile]])
        high = np.mean([e.alpha for e in entries[-decile:]])
        if not low < high:
            failures.append(f"decile order seed {s}")
    _report(
        "C7 assortative mode trends with arity; disassortative punishes "
        "low-arity nodes",
        not failures,
        ", ".join(failures) or "20 seeds each way",
    )


# ---------------------------------------------------------------------------
# 8. Determinism and round trips
# ---------------------------------------------------------------------------

def test_criterion_8_determinism_and_round_trip():
    failures = []
    sig = split_arity_signature(12, 8, arity=3)
    for link, p in (("none", 1.0), ("mppl", 0.8), ("mdc", 1.0)):
        for seed in (0, 99, 123456789):
            texts = set()
            for _ in range(2):
                agent, meta = build_agent(
                    roots=3, places=80, signature=sig, seed=seed, link=link, p=p
                )
                texts.add(serialize(agent, meta=meta, signature=sig))
            if len(texts) != 1:
                failures.append(f"nondeterministic {link} seed {seed}")

    for i in range(100):
        link = ("none", "mppl", "mdc")[i % 3]
        agent, meta = build_agent(
            roots=1 + i % 5,
            places=10 + (7 * i) % 120,
            signature=sig,
            seed=derive_seed(11, i),
            link=link,
            p=0.9,
        )
        if deserialize(serialize(agent, meta=meta, signature=sig)) != agent:
            failures.append(f"round trip {i}")
            break
    _report(
        "C8 byte-identical documents per seed; serialize/deserialize identity",
        not failures,
        ", ".join(failures) or "100 round trips",
    )
