"""Binned relationships between direct citation counts and cascade
properties, plus corpus-level distribution summaries.

"Direct citation count" always means the root's out-degree in knowledge-flow
orientation (its first-generation width). Bins are half-open [lo, hi) with
the final bin closed; values outside the edges are excluded and counted, so
bin counts plus exclusions always conserve the input total.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .cascade import batch_cascades, build_cascade
from .errors import EmptyInput
from .graph import CitationGraph
from .relevance import DEFAULT_CODE_LEVEL, first_generation_total, generation_relevance

BIN_VARIABLES = ("citation_count", "depth", "virality", "relevance")
CDF_VARIABLES = ("depth", "width", "size", "virality")


@dataclass(frozen=True)
class BinSpec:
    """Strictly increasing bin edges over one variable."""

    variable: str
    edges: tuple[float, ...]

    def __post_init__(self):
        if self.variable not in BIN_VARIABLES:
            raise ValueError(f"variable must be one of {BIN_VARIABLES}, got {self.variable!r}")
        if len(self.edges) < 2:
            raise ValueError("need at least 2 bin edges")
        if any(a >= b for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("bin edges must be strictly increasing")

    @property
    def n_bins(self) -> int:
        return len(self.edges) - 1

    def bin_of(self, value: float) -> int | None:
        """Bin index for a value, or None when it falls outside the edges."""
        if value < self.edges[0] or value > self.edges[-1]:
            return None
        if value == self.edges[-1]:
            return self.n_bins - 1
        return bisect_right(self.edges, value) - 1

    @classmethod
    def log_citation_bins(cls, max_count: int) -> "BinSpec":
        """Doubling bins [0,1), [1,2), [2,4), ... that cover max_count."""
        edges = [0.0, 1.0]
        while edges[-1] <= max_count:
            edges.append(edges[-1] * 2)
        return cls("citation_count", tuple(edges))

    @classmethod
    def equal_count(cls, variable: str, values, n_bins: int = 7) -> "BinSpec":
        """Quantile edges splitting the observed values into n_bins segments.

        Duplicate quantiles collapse, so heavily tied data yields fewer bins.
        """
        arr = np.asarray(list(values), dtype=float)
        if arr.size == 0:
            raise EmptyInput("no values to derive bins from")
        qs = np.quantile(arr, np.linspace(0.0, 1.0, n_bins + 1))
        edges = np.unique(qs)
        if edges.size < 2:
            edges = np.asarray([edges[0], edges[0] + 1.0])
        return cls(variable, tuple(float(e) for e in edges))

    @classmethod
    def relevance_bins(cls, width: float = 0.1) -> "BinSpec":
        """Uniform bins over [0, 1] (final bin closed, so 1.0 is included)."""
        n = int(round(1.0 / width))
        return cls("relevance", tuple(np.round(np.linspace(0.0, 1.0, n + 1), 12)))


@dataclass(frozen=True)
class BinnedSummary:
    """Distribution statistics of a response variable per bin.

    Statistic entries are None for empty bins. Quartiles use linear
    interpolation between order statistics. ``excluded_count`` covers both
    undefined responses/variables and values outside the bin edges.
    """

    spec: BinSpec
    counts: tuple[int, ...]
    means: tuple[float | None, ...]
    medians: tuple[float | None, ...]
    q1: tuple[float | None, ...]
    q3: tuple[float | None, ...]
    excluded_count: int

    def rows(self) -> list[tuple]:
        """(bin_lo, bin_hi, count, mean, median, q1, q3) per bin."""
        out = []
        for i in range(self.spec.n_bins):
            out.append(
                (
                    self.spec.edges[i],
                    self.spec.edges[i + 1],
                    self.counts[i],
                    self.means[i],
                    self.medians[i],
                    self.q1[i],
                    self.q3[i],
                )
            )
        return out


@dataclass(frozen=True)
class CdfTable:
    """Exact empirical CDF: cumulative fraction at each distinct value."""

    variable: str
    values: tuple[float, ...]
    fractions: tuple[float, ...]
    n: int
    excluded_count: int = 0


def _summarize(spec: BinSpec, xs: list[float], responses: list[float], excluded: int) -> BinnedSummary:
    groups: list[list[float]] = [[] for _ in range(spec.n_bins)]
    for x, resp in zip(xs, responses):
        b = spec.bin_of(x)
        if b is None:
            excluded += 1
        else:
            groups[b].append(resp)
    counts = tuple(len(g) for g in groups)
    means: list[float | None] = []
    medians: list[float | None] = []
    q1s: list[float | None] = []
    q3s: list[float | None] = []
    for g in groups:
        if not g:
            means.append(None)
            medians.append(None)
            q1s.append(None)
            q3s.append(None)
            continue
        arr = np.asarray(g, dtype=float)
        lo, mid, hi = np.percentile(arr, [25, 50, 75])
        means.append(float(arr.mean()))
        medians.append(float(mid))
        q1s.append(float(lo))
        q3s.append(float(hi))
    return BinnedSummary(
        spec=spec,
        counts=counts,
        means=tuple(means),
        medians=tuple(medians),
        q1=tuple(q1s),
        q3=tuple(q3s),
        excluded_count=excluded,
    )


def distribution_summary(summaries, variable: str) -> CdfTable:
    """Empirical CDF of one structural variable over cascade summaries.

    Summaries with an error or an undefined value for the variable are
    excluded and counted. Raises EmptyInput when nothing remains.
    """
    if variable not in CDF_VARIABLES:
        raise ValueError(f"variable must be one of {CDF_VARIABLES}, got {variable!r}")
    values = []
    excluded = 0
    for s in summaries:
        v = getattr(s, variable) if s.error is None else None
        if v is None:
            excluded += 1
        else:
            values.append(float(v))
    if not values:
        raise EmptyInput(f"no defined {variable} values")
    arr = np.sort(np.asarray(values, dtype=float))
    uniq, counts = np.unique(arr, return_counts=True)
    fractions = np.cumsum(counts) / arr.size
    return CdfTable(
        variable=variable,
        values=tuple(float(v) for v in uniq),
        fractions=tuple(float(f) for f in fractions),
        n=int(arr.size),
        excluded_count=excluded,
    )


def relevance_vs_citations(
    graph: CitationGraph,
    roots: list[str],
    mode: str,
    bins: BinSpec,
    level: int = DEFAULT_CODE_LEVEL,
) -> BinnedSummary:
    """First-generation relevance (total or average) binned by direct
    citation count.

    Total mode sums defined pair relevances (0.0 for an uncited root);
    average mode uses the first-generation mean and excludes roots where it
    is undefined (uncited, or no defined pair).
    """
    if mode not in ("total", "average"):
        raise ValueError(f"mode must be 'total' or 'average', got {mode!r}")
    if not roots:
        raise EmptyInput("no roots")
    xs: list[float] = []
    responses: list[float] = []
    excluded = 0
    for root in roots:
        citations = int(graph.out_degree[graph.index_of(root)])
        if mode == "total":
            xs.append(float(citations))
            responses.append(first_generation_total(graph, root, level))
            continue
        if citations == 0:
            excluded += 1
            continue
        cascade = build_cascade(graph, root, max_depth=1)
        stats = generation_relevance(graph, cascade, 1, level)
        if stats.mean is None:
            excluded += 1
            continue
        xs.append(float(citations))
        responses.append(stats.mean)
    return _summarize(bins, xs, responses, excluded)


def citations_vs_structure(
    graph: CitationGraph,
    roots: list[str],
    variable: str,
    bins: BinSpec,
) -> BinnedSummary:
    """Direct citation counts binned by cascade depth or virality.

    Roots with undefined virality (single-node cascades) are excluded in
    virality mode.
    """
    if variable not in ("depth", "virality"):
        raise ValueError(f"variable must be 'depth' or 'virality', got {variable!r}")
    if not roots:
        raise EmptyInput("no roots")
    for root in roots:
        graph.index_of(root)  # fail fast on unknown ids
    xs: list[float] = []
    responses: list[float] = []
    excluded = 0
    for s in batch_cascades(graph, roots):
        x = getattr(s, variable)
        if x is None:
            excluded += 1
            continue
        xs.append(float(x))
        responses.append(float(graph.out_degree[graph.index_of(s.root)]))
    return _summarize(bins, xs, responses, excluded)


def citations_vs_generation_relevance(
    graph: CitationGraph,
    roots: list[str],
    generation: int,
    bins: BinSpec,
    level: int = DEFAULT_CODE_LEVEL,
) -> BinnedSummary:
    """Direct citation counts binned by the mean relevance of one of the
    first three generations.

    Roots lacking the generation, or with no defined pair there, are
    excluded and counted.
    """
    if generation not in (1, 2, 3):
        raise ValueError(f"generation must be 1, 2 or 3, got {generation}")
    if not roots:
        raise EmptyInput("no roots")
    xs: list[float] = []
    responses: list[float] = []
    excluded = 0
    for root in roots:
        citations = int(graph.out_degree[graph.index_of(root)])
        cascade = build_cascade(graph, root, max_depth=generation)
        if cascade.depth < generation:
            excluded += 1
            continue
        stats = generation_relevance(graph, cascade, generation, level)
        if stats.mean is None:
            excluded += 1
            continue
        xs.append(stats.mean)
        responses.append(float(citations))
    return _summarize(bins, xs, responses, excluded)
