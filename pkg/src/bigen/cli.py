"""Command-line driver: single generations, batch experiment campaigns and
analysis of stored bigraph documents.

Subcommands: ``generate``, ``experiment``, ``analyze``, ``validate``.
Exit codes: 0 ok, 1 user error, 2 internal error.

Seeds: a run owns one user-facing seed; the place and link stages consume
independent streams derived as derive_seed(seed, 0) and derive_seed(seed, 1).
Experiment campaigns derive per-run seeds as derive_seed(base_seed,
combination_index, run_index), so any run can be re-executed in isolation
with ``generate --seed <run seed>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Any, Mapping, Sequence

from bigen import core, io, linkgen, metrics, placegen
from bigen.core import Bigraph, Signature
from bigen.rng import derive_seed

LINK_STRATEGIES = ("none", "mppl", "mdc")


class UsageError(ValueError):
    """Bad command line or plan contents; maps to exit code 1."""


# ---------------------------------------------------------------------------
# Generation pipeline
# ---------------------------------------------------------------------------

def build_agent(
    roots: int,
    places: int,
    signature: Signature,
    seed: int,
    link: str = "none",
    p: float = 1.0,
    p_outer: float = 0.5,
    p_edge: float = 0.5,
    mode: str = linkgen.ASSORTATIVE,
    control_weights: tuple[float, ...] | None = None,
) -> tuple[Bigraph, dict[str, Any]]:
    """Place graph, then the chosen wiring over its positive-arity nodes.

    Returns the agent plus the provenance metadata embedded in documents.
    """
    if link not in LINK_STRATEGIES:
        raise ValueError(f"unknown link strategy {link!r}; pick one of {LINK_STRATEGIES}")
    place_seed = derive_seed(seed, 0)
    link_seed = derive_seed(seed, 1)
    pg = placegen.generate_place_graph(
        placegen.PlaceGenParams(
            roots=roots,
            places=places,
            signature=signature,
            seed=place_seed,
            control_weights=control_weights,
        )
    )
    linkable = core.positive_arity_nodes(pg)
    meta: dict[str, Any] = {
        "algorithm": "preferential-attachment",
        "roots": roots,
        "places": places,
        "seed": seed,
        "stage_seeds": {"place": place_seed, "link": link_seed},
        "link": {"strategy": link},
    }
    if link == "none":
        wiring = core.empty_link_graph(pg)
    elif link == "mppl":
        wiring = linkgen.mppl(
            linkable,
            linkgen.MpplParams(p=p, p_outer=p_outer, p_edge=p_edge, seed=link_seed),
        )
        meta["link"].update({"p": p, "p_outer": p_outer, "p_edge": p_edge})
    else:
        wiring = linkgen.mdc(linkable, linkgen.MdcParams(mode=mode, seed=link_seed))
        meta["link"]["mode"] = mode
    return core.pair_with_wiring(pg, wiring), meta


# ---------------------------------------------------------------------------
# Signature specification
# ---------------------------------------------------------------------------

def parse_signature_file(text: str) -> Signature:
    """One `label arity` pair per line; blank lines and # comments ignored."""
    controls = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"signature line {lineno}: expected 'label arity', got {raw!r}")
        label, arity_text = parts
        try:
            arity = int(arity_text)
        except ValueError:
            raise UsageError(f"signature line {lineno}: bad arity {arity_text!r}") from None
        if arity < 0:
            raise UsageError(f"signature line {lineno}: negative arity")
        controls.append(core.Control(label, arity))
    if not controls:
        raise UsageError("signature file defines no controls")
    try:
        return Signature(tuple(controls))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_arity_range(text: str) -> tuple[int, int]:
    """Parse 'LO..HI' into an inclusive arity range."""
    parts = text.split("..")
    if len(parts) != 2:
        raise UsageError(f"expected LO..HI arity range, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"expected LO..HI arity range, got {text!r}") from None
    if lo < 0 or lo > hi:
        raise UsageError(f"bad arity range {text!r}")
    return lo, hi


def resolve_signature_spec(spec: Mapping[str, Any], base: Path | None = None) -> Signature:
    """Build a Signature from a plan's signature object."""
    if "file" in spec:
        path = Path(spec["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        return parse_signature_file(_read_text(path))
    if "controls" in spec:
        count = int(spec["controls"])
        positive = int(spec["positive"])
        arity = int(spec.get("positive_arity", 1))
        return core.split_arity_signature(count, positive, arity)
    if "count" in spec:
        lo, hi = spec["uniform_arity"]
        return core.cycled_arity_signature(int(spec["count"]), int(lo), int(hi))
    raise UsageError(
        "signature spec needs 'file', 'controls'+'positive', or 'count'+'uniform_arity'"
    )


def _signature_from_args(args: argparse.Namespace) -> Signature:
    given = [
        args.signature is not None,
        args.controls is not None,
        args.uniform_arity is not None,
    ]
    if sum(given) != 1:
        raise UsageError(
            "specify exactly one of --signature, --controls/--positive, "
            "--count/--uniform-arity"
        )
    if args.signature is not None:
        return parse_signature_file(_read_text(Path(args.signature)))
    if args.controls is not None:
        if args.positive is None:
            raise UsageError("--controls requires --positive")
        return core.split_arity_signature(
            args.controls, args.positive, args.positive_arity
        )
    if args.count is None:
        raise UsageError("--uniform-arity requires --count")
    lo, hi = parse_arity_range(args.uniform_arity)
    return core.cycled_arity_signature(args.count, lo, hi)


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


# ---------------------------------------------------------------------------
# Experiment plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentPlan:
    roots: tuple[int, ...]
    places: tuple[int, ...]
    signature: Signature
    link: str
    p_values: tuple[float | None, ...]
    p_outer: float
    p_edge: float
    mode: str
    replications: int
    seed: int
    assume_r: float
    out: str | None = None

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentPlan":
        try:
            raw = json.loads(_read_text(path))
        except json.JSONDecodeError as exc:
            raise UsageError(f"plan {path}: not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError(f"plan {path}: root must be an object")
        return cls.from_mapping(raw, base=path.parent)

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any], base: Path | None = None) -> "ExperimentPlan":
        def as_list(value: Any) -> list[Any]:
            return list(value) if isinstance(value, list) else [value]

        try:
            roots = tuple(int(t) for t in as_list(raw["roots"]))
            places = tuple(int(n) for n in as_list(raw["places"]))
            signature = resolve_signature_spec(raw["signature"], base)
            replications = int(raw.get("replications", 1))
            seed = int(raw.get("seed", 0))
        except KeyError as exc:
            raise UsageError(f"plan is missing field {exc.args[0]!r}") from None
        link_cfg = raw.get("link", {"strategy": "none"})
        strategy = link_cfg.get("strategy", "none")
        if strategy not in LINK_STRATEGIES:
            raise UsageError(f"unknown link strategy {strategy!r}")
        if strategy == "mppl":
            p_values = tuple(float(p) for p in as_list(link_cfg.get("p", 1.0)))
        else:
            p_values = (None,)
        if not roots or not places or not p_values:
            raise UsageError("plan grid must not be empty")
        if replications < 1:
            raise UsageError("replications must be >= 1")
        return cls(
            roots=roots,
            places=places,
            signature=signature,
            link=strategy,
            p_values=p_values,
            p_outer=float(link_cfg.get("p_outer", 0.5)),
            p_edge=float(link_cfg.get("p_edge", 0.5)),
            mode=link_cfg.get("mode", linkgen.ASSORTATIVE),
            replications=replications,
            seed=seed,
            assume_r=float(raw.get("assume_r", 1.0)),
            out=raw.get("out"),
        )

    def combinations(self) -> list[tuple[int, int, int, float | None]]:
        """(index, roots, places, p) over the full grid, infeasible cells
        excluded; indices stay stable so per-run seeds never shift."""
        combos = []
        for index, (t, n, p) in enumerate(product(self.roots, self.places, self.p_values)):
            if n >= t:
                combos.append((index, t, n, p))
        return combos


def _combo_dir(index: int, t: int, n: int, p: float | None) -> str:
    tag = f"c{index:03d}_t{t}_n{n}"
    if p is not None:
        tag += f"_p{p:g}"
    return tag


def _experiment_run(args: tuple[Any, ...]) -> tuple[int, dict[int, float], int, tuple | None]:
    """One replication; returns (run, degree fractions, positive-arity
    count, assortativity summary row or None)."""
    (run, run_seed, t, n, sig_fields, link, p, p_outer, p_edge, mode, assume_r) = args
    signature = Signature(tuple(core.Control(label, a) for label, a in sig_fields))
    agent, _ = build_agent(
        roots=t,
        places=n,
        signature=signature,
        seed=run_seed,
        link=link,
        p=p if p is not None else 1.0,
        p_outer=p_outer,
        p_edge=p_edge,
        mode=mode,
    )
    hist = metrics.degree_distribution(agent.place)
    count = metrics.positive_arity_count(agent)
    summary = None
    if link != "none":
        summary = _assortativity_summary(run, agent, assume_r)
    return run, dict(hist.fractions), count, summary


def _assortativity_summary(run: int, agent: Bigraph, assume_r: float) -> tuple:
    try:
        report = metrics.node_assortativity(agent.link, assume_r)
    except ValueError:
        return (run, 0, None, None, None, None, None, None, None)
    if report.degenerate:
        return (run, report.population, report.diff_total, report.lam,
                None, None, None, None, None)
    cf = report.class_fractions
    return (
        run,
        report.population,
        report.diff_total,
        report.lam,
        report.mu_alpha,
        report.sigma_alpha,
        cf.slightly_assortative,
        cf.slightly_disassortative,
        cf.strong_outlier,
    )


def run_experiment(plan: ExperimentPlan, outdir: Path, jobs: int = 1) -> list[Path]:
    """Execute the campaign; returns the per-combination directories.

    Output is deterministic for a fixed plan: per-run seeds depend only on
    (base seed, combination index, run index) and aggregation is sorted.
    """
    outdir.mkdir(parents=True, exist_ok=True)
    combos = plan.combinations()
    skipped = set(range(len(list(product(plan.roots, plan.places, plan.p_values))))) - {
        c[0] for c in combos
    }
    if skipped:
        print(
            f"skipping {len(skipped)} infeasible combination(s) with roots > places",
            file=sys.stderr,
        )
    sig_fields = tuple((c.label, c.arity) for c in plan.signature.controls)
    written = []
    for index, t, n, p in combos:
        tasks = [
            (
                run,
                derive_seed(plan.seed, index, run),
                t,
                n,
                sig_fields,
                plan.link,
                p,
                plan.p_outer,
                plan.p_edge,
                plan.mode,
                plan.assume_r,
            )
            for run in range(plan.replications)
        ]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = sorted(pool.map(_experiment_run, tasks, chunksize=8))
        else:
            results = [_experiment_run(task) for task in tasks]

        combo_dir = outdir / _combo_dir(index, t, n, p)
        combo_dir.mkdir(exist_ok=True)
        written.append(combo_dir)

        fraction_sums: dict[int, float] = {}
        counts = []
        summaries = []
        for run, fractions, count, summary in results:
            for d, f in fractions.items():
                fraction_sums[d] = fraction_sums.get(d, 0.0) + f
            counts.append(count)
            if summary is not None:
                summaries.append(summary)

        r = plan.replications
        hist_rows = [[d, fraction_sums[d] / r] for d in sorted(fraction_sums)]
        (combo_dir / "degree_hist.csv").write_text(
            io.csv_text(["degree", "avg_fraction"], hist_rows)
        )
        (combo_dir / "arity_counts.csv").write_text(
            io.csv_text(["run", "positive_arity_count"], [[i, c] for i, c in enumerate(counts)])
        )
        if r >= 2:
            (combo_dir / "moments.csv").write_text(
                io.moments_csv(metrics.sample_moments(counts))
            )
        if n - t >= 1:
            (combo_dir / "fits.csv").write_text(
                io.fits_csv(metrics.fit_all(counts, n - t))
            )
        if plan.link != "none":
            (combo_dir / "assortativity_summary.csv").write_text(
                io.csv_text(
                    [
                        "run", "population", "diff_total", "lambda", "mu_alpha",
                        "sigma_alpha", "frac_slightly_assortative",
                        "frac_slightly_disassortative", "frac_strong_outlier",
                    ],
                    [list(row) for row in summaries],
                )
            )
    return written


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args: argparse.Namespace) -> int:
    signature = _signature_from_args(args)
    agent, meta = build_agent(
        roots=args.roots,
        places=args.places,
        signature=signature,
        seed=args.seed,
        link=args.link,
        p=args.p,
        p_outer=args.po,
        p_edge=args.pe,
        mode=args.mode,
    )
    text = io.serialize(agent, meta=meta, signature=signature)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    plan = ExperimentPlan.from_file(Path(args.plan))
    if args.out is None and plan.out is None:
        raise UsageError("give --out or an 'out' field in the plan")
    outdir = Path(args.out if args.out is not None else plan.out)
    run_experiment(plan, outdir, jobs=args.jobs)
    (outdir / "plan.json").write_text(_read_text(Path(args.plan)))
    return 0


def _load_for_analysis(path: Path) -> io.Document:
    try:
        return io.load_document(_read_text(path))
    except io.DocumentError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_analyze(args: argparse.Namespace) -> int:
    path = Path(args.file)
    document = _load_for_analysis(path)
    agent = document.bigraph
    report = core.validate(agent)
    if not report.ok:
        print(f"{path}: invalid bigraph", file=sys.stderr)
        print(report, file=sys.stderr)
        return 1

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = path.stem

    hist = metrics.degree_distribution(agent.place)
    (outdir / f"{stem}.degree_hist.csv").write_text(io.histogram_csv(hist))
    print(f"places: {agent.place.place_count} "
          f"(roots {agent.place.root_count}, nodes {len(agent.place.nodes)})")
    print(f"positive-arity nodes: {metrics.positive_arity_count(agent)}")
    print(f"average place degree: {hist.average_degree:.9g}")
    print(f"links: {len(agent.link.edges)} edges, "
          f"{len(agent.link.outer_names)} outer names")

    if agent.link.link_map:
        assort = metrics.node_assortativity(agent.link, args.assume_r)
        (outdir / f"{stem}.assortativity.csv").write_text(
            io.assortativity_csv(assort)
        )
        if assort.degenerate:
            print("assortativity: degenerate (all neighbor differences zero)")
        else:
            print(
                f"assortativity: population {assort.population}, "
                f"lambda {assort.lam:.9g}, mu_alpha {assort.mu_alpha:.9g}, "
                f"sigma_alpha {assort.sigma_alpha:.9g}"
            )
    print("validation: OK")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.file)
    document = _load_for_analysis(path)
    report = core.validate(document.bigraph)
    print(report)
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bigen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate one bigraph document")
    gen.add_argument("--roots", "-t", type=int, required=True, help="number of roots")
    gen.add_argument("--places", "-n", type=int, required=True,
                     help="total places (roots + nodes)")
    gen.add_argument("--signature", help="signature file: one 'label arity' per line")
    gen.add_argument("--controls", type=int, help="build a signature of this many controls")
    gen.add_argument("--positive", type=int,
                     help="how many of --controls get positive arity")
    gen.add_argument("--positive-arity", type=int, default=1,
                     help="arity of the positive controls (default 1)")
    gen.add_argument("--count", type=int, help="controls in a cycled-arity signature")
    gen.add_argument("--uniform-arity", metavar="LO..HI",
                     help="cycle arities over this inclusive range")
    gen.add_argument("--link", choices=LINK_STRATEGIES, default="none")
    gen.add_argument("--p", type=float, default=1.0, help="pairwise link fraction")
    gen.add_argument("--po", type=float, default=0.5, help="outer-name weight")
    gen.add_argument("--pe", type=float, default=0.5, help="edge weight")
    gen.add_argument("--mode", choices=(linkgen.ASSORTATIVE, linkgen.DISASSORTATIVE),
                     default=linkgen.ASSORTATIVE)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output file (default: stdout)")
    gen.set_defaults(func=cmd_generate)

    exp = sub.add_parser("experiment", help="run a batch campaign from a plan file")
    exp.add_argument("--plan", required=True, help="JSON plan file")
    exp.add_argument("--out", help="output directory (default: the plan's 'out' field)")
    exp.add_argument("--jobs", type=int, default=1, help="parallel workers")
    exp.set_defaults(func=cmd_experiment)

    ana = sub.add_parser("analyze", help="validate and compute metrics for a document")
    ana.add_argument("file")
    ana.add_argument("--out", default=".", help="directory for metrics CSVs")
    ana.add_argument("--assume-r", type=float, default=1.0,
                     help="assumed correlation coefficient for assortativity")
    ana.set_defaults(func=cmd_analyze)

    val = sub.add_parser("validate", help="check a document's structural invariants")
    val.add_argument("file")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"bigen: error: {exc}", file=sys.stderr)
        return 1
    except Exception:  # internal error
        import traceback

        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
