"""Command-line interface.

Subcommands mirror the library: ``validate`` (load + JSON report),
``cascade`` (layers or summaries), ``relevance`` (curves, per-generation
stats, first-generation totals), ``nullmodel`` (rewired edges or baseline
curves), ``cluster`` (fixed-depth cohort k-means), and ``report`` (CDFs and
binned analyses). All tabular output is CSV; ``--out -`` writes to stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cascade import batch_cascades, build_cascade, cascade_width, structural_virality, width_profile
from .cluster import collect_cohort, kmeans
from .errors import CitationCascadeError, ViralityUndefined
from .graph import load_edges, load_metadata
from .impact import (
    BinSpec,
    citations_vs_generation_relevance,
    citations_vs_structure,
    distribution_summary,
    relevance_vs_citations,
)
from .nullmodel import RewireConfig, TemporalRule, baseline_curve, rewire
from .relevance import first_generation_total, generation_relevance, relevance_curve

_FILTER_RE = re.compile(r"^(\w+)\s*(<=|>=|=|<|>)\s*(.+)$")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _write_csv(path: str, header: list[str], rows, comments: list[str] | None = None):
    with _open_out(path) as fh:
        for line in comments or []:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _load_graph(args):
    pubs = load_metadata(args.metadata)
    graph, report = load_edges(args.edges, pubs, mode=args.mode)
    return graph, report


def _parse_filter(expr: str):
    m = _FILTER_RE.match(expr)
    if not m:
        raise ValueError(f"bad filter {expr!r}; expected e.g. year<=2000 or id=A1")
    field, op, raw = m.groups()
    if field not in ("id", "year"):
        raise ValueError(f"unknown filter field {field!r}; use id or year")
    value = int(raw) if field == "year" else raw.strip()
    ops = {
        "=": lambda a: a == value,
        "<": lambda a: a < value,
        ">": lambda a: a > value,
        "<=": lambda a: a <= value,
        ">=": lambda a: a >= value,
    }
    test = ops[op]
    return lambda pub: test(getattr(pub, field))


def _select_roots(graph, args) -> list[str]:
    roots = list(graph.ids)
    for expr in args.filter or []:
        pred = _parse_filter(expr)
        roots = [r for r in roots if pred(graph.publication(r))]
    return roots


def _read_bins(path: str, variable: str) -> BinSpec:
    text = Path(path).read_text(encoding="utf-8")
    edges = [float(tok) for tok in re.split(r"[,\s]+", text.strip()) if tok]
    return BinSpec(variable, tuple(edges))


# -- subcommand handlers ----------------------------------------------


def _cmd_validate(args) -> int:
    graph, report = _load_graph(args)
    with _open_out(args.out) as fh:
        fh.write(report.to_json() + "\n")
        fh.write(f'{{"nodes": {graph.n_nodes}, "edges": {graph.edge_count}}}\n')
    return 0


def _cmd_cascade(args) -> int:
    graph, _ = _load_graph(args)
    if args.all_roots:
        rows = (
            (s.root, s.depth, s.width, s.size, s.virality, s.error or "")
            for s in batch_cascades(graph, list(graph.ids), max_depth=args.max_depth)
        )
        _write_csv(args.out, ["root", "depth", "width", "size", "virality", "error"], rows)
        return 0
    cascade = build_cascade(graph, args.root, max_depth=args.max_depth)
    if args.emit == "layers":
        rows = (
            (generation, graph.id_of(int(v)))
            for generation, layer in enumerate(cascade.layers, start=1)
            for v in layer
        )
        _write_csv(args.out, ["generation", "id"], rows)
    else:
        try:
            virality = structural_virality(cascade)
        except ViralityUndefined:
            virality = None
        _write_csv(
            args.out,
            ["root", "depth", "width", "size", "virality"],
            [(cascade.root, cascade.depth, cascade_width(cascade), cascade.size, virality)],
        )
    return 0


_REL_HEADER = ["generation", "mean", "median", "variance", "n_pairs", "n_skipped"]


def _cmd_relevance(args) -> int:
    graph, _ = _load_graph(args)
    if args.emit == "first-gen":
        total = first_generation_total(graph, args.root, args.level)
        _write_csv(args.out, ["root", "total"], [(args.root, total)])
        return 0
    cascade = build_cascade(graph, args.root)
    if args.emit == "stats":
        stats = generation_relevance(graph, cascade, args.gen, args.level)
        rows = [(stats.generation, stats.mean, stats.median, stats.variance, stats.n_pairs, stats.n_skipped)]
        _write_csv(args.out, _REL_HEADER, rows)
        return 0
    rows = []
    for generation in range(1, cascade.depth + 1):
        stats = generation_relevance(graph, cascade, generation, args.level)
        rows.append((stats.generation, stats.mean, stats.median, stats.variance, stats.n_pairs, stats.n_skipped))
    _write_csv(args.out, _REL_HEADER, rows)
    return 0


def _cmd_nullmodel(args) -> int:
    graph, _ = _load_graph(args)
    config = RewireConfig(
        seed=args.seed,
        swap_factor=args.swap_factor,
        temporal_rule=TemporalRule(args.temporal_rule),
    )
    if args.emit == "edges":
        shuffled = rewire(graph, config)
        cited, citing = shuffled.edge_arrays()
        rows = ((shuffled.id_of(int(a)), shuffled.id_of(int(b))) for a, b in zip(cited, citing))
        _write_csv(args.out, ["cited_id", "citing_id"], rows)
        return 0
    roots = _select_roots(graph, args)
    entries = baseline_curve(
        graph, config, roots, args.max_gen, args.level, n_realizations=args.realizations
    )
    rows = ((g + 1, e.mean, e.std, e.n) for g, e in enumerate(entries))
    _write_csv(args.out, ["generation", "mean", "std", "n"], rows)
    return 0


def _cmd_cluster(args) -> int:
    graph, _ = _load_graph(args)
    cohort = collect_cohort(graph, args.depth, args.kind, args.level)
    model = kmeans(cohort, args.k, seed=args.seed, restarts=args.restarts, max_iter=args.max_iter)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        str(out_dir / "assignments.csv"),
        ["root", "cluster"],
        zip(cohort.ids, (int(a) for a in model.assignments)),
    )
    _write_csv(
        str(out_dir / "centroids.csv"),
        ["cluster"] + [f"gen{g}" for g in range(1, cohort.depth + 1)],
        ((c, *(float(v) for v in model.centroids[c])) for c in range(model.k)),
    )
    sizes = np.bincount(model.assignments, minlength=model.k)
    print(
        f"cohort={len(cohort)} imputed={cohort.imputed_entries} "
        f"skipped={len(cohort.skipped_roots)} inertia={model.inertia:.6g} "
        f"iterations={model.iterations_run} sizes={sizes.tolist()}"
    )
    return 0


_BINNED_HEADER = ["bin_lo", "bin_hi", "count", "mean", "median", "q1", "q3"]
_STATS = ("count", "mean", "median", "q1", "q3")


def _emit_binned(args, analysis: str, summary, bins_origin: str) -> None:
    comments = [
        f"analysis={analysis}",
        f"bins={bins_origin}",
        f"excluded={summary.excluded_count}",
    ]
    if args.figures:
        rows = []
        for lo, hi, count, mean, median, q1, q3 in summary.rows():
            named = dict(zip(_STATS, (count, mean, median, q1, q3)))
            rows.extend((analysis, lo, hi, stat, named[stat]) for stat in _STATS)
        _write_csv(args.out, ["analysis", "bin_lo", "bin_hi", "statistic", "value"], rows, comments)
    else:
        _write_csv(args.out, _BINNED_HEADER, summary.rows(), comments)


def _cmd_report(args) -> int:
    graph, _ = _load_graph(args)
    roots = _select_roots(graph, args)
    analysis = args.analysis

    if analysis.endswith("-cdf"):
        variable = analysis[: -len("-cdf")]
        table = distribution_summary(batch_cascades(graph, roots), variable)
        comments = [f"analysis={analysis}", f"n={table.n}", f"excluded={table.excluded_count}"]
        if args.figures:
            rows = ((analysis, v, f) for v, f in zip(table.values, table.fractions))
            _write_csv(args.out, ["analysis", "value", "cumulative_fraction"], rows, comments)
        else:
            rows = zip(table.values, table.fractions)
            _write_csv(args.out, ["value", "cumulative_fraction"], rows, comments)
        return 0

    if analysis == "relevance-vs-citations":
        if args.bins != "default":
            bins, origin = _read_bins(args.bins, "citation_count"), "file"
        else:
            bins, origin = BinSpec.log_citation_bins(int(graph.out_degree.max())), "default-log2"
        summary = relevance_vs_citations(graph, roots, args.rel_mode, bins, args.level)
        _emit_binned(args, f"{analysis}[{args.rel_mode}]", summary, origin)
        return 0

    if analysis in ("citations-vs-depth", "citations-vs-virality"):
        variable = analysis.rsplit("-", 1)[-1]
        if args.bins != "default":
            bins, origin = _read_bins(args.bins, variable), "file"
        else:
            values = [
                getattr(s, variable)
                for s in batch_cascades(graph, roots)
                if s.error is None and getattr(s, variable) is not None
            ]
            bins, origin = BinSpec.equal_count(variable, values, n_bins=7), "default-7-segments"
        summary = citations_vs_structure(graph, roots, variable, bins)
        _emit_binned(args, analysis, summary, origin)
        return 0

    # citations-vs-genrel
    if args.bins != "default":
        bins, origin = _read_bins(args.bins, "relevance"), "file"
    else:
        bins, origin = BinSpec.relevance_bins(0.1), "default-width-0.1"
    summary = citations_vs_generation_relevance(graph, roots, args.gen, bins, args.level)
    _emit_binned(args, f"{analysis}[gen={args.gen}]", summary, origin)
    return 0


# -- parser ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="citecascade", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--metadata", required=True, help="publication CSV (id,year,codes)")
    common.add_argument("--edges", required=True, help="edge CSV (cited_id,citing_id)")
    common.add_argument("--mode", choices=["strict", "lenient"], default="lenient")
    common.add_argument("--out", default="-", help="output path, - for stdout")

    p = sub.add_parser("validate", parents=[common], help="load and emit the validation report as JSON")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("cascade", parents=[common], help="build a cascade and emit layers or a summary")
    p.add_argument("--root")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--emit", choices=["layers", "summary"], default="summary")
    p.add_argument("--all-roots", action="store_true", help="summaries for every publication")
    p.set_defaults(func=_cmd_cascade)

    p = sub.add_parser("relevance", parents=[common], help="relevance curve or stats for one root")
    p.add_argument("--root", required=True)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--emit", choices=["curve", "stats", "first-gen"], default="curve")
    p.add_argument("--gen", type=int, default=1, help="generation for --emit stats")
    p.set_defaults(func=_cmd_relevance)

    p = sub.add_parser("nullmodel", parents=[common], help="rewired edges or a baseline relevance curve")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--swap-factor", type=float, default=10.0)
    p.add_argument("--realizations", type=int, default=20)
    p.add_argument("--temporal-rule", choices=[r.value for r in TemporalRule], default="ordered")
    p.add_argument("--emit", choices=["edges", "baseline"], default="edges")
    p.add_argument("--max-gen", type=int, default=10)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--filter", action="append", help="root filter, e.g. year<=2000 (repeatable)")
    p.set_defaults(func=_cmd_nullmodel)

    p = sub.add_parser("cluster", parents=[common], help="cluster a fixed-depth cohort of curves")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--kind", choices=["width", "relevance"], default="width")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-iter", type=int, default=300)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("report", parents=[common], help="distribution CDFs and binned analyses")
    p.add_argument(
        "--analysis",
        required=True,
        choices=[
            "depth-cdf",
            "virality-cdf",
            "size-cdf",
            "relevance-vs-citations",
            "citations-vs-depth",
            "citations-vs-virality",
            "citations-vs-genrel",
        ],
    )
    p.add_argument("--bins", default="default", help="bin-edges file, or 'default'")
    p.add_argument("--rel-mode", choices=["total", "average"], default="total",
                   help="response for relevance-vs-citations")
    p.add_argument("--gen", type=int, choices=[1, 2, 3], default=1,
                   help="generation for citations-vs-genrel")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--figures", action="store_true", help="plot-ready long-format table")
    p.add_argument("--filter", action="append", help="root filter, e.g. year<=2000 (repeatable)")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "cascade" and not args.all_roots and not args.root:
        print("error: cascade needs --root or --all-roots", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except CitationCascadeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
