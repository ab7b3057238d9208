"""Topic relevance via Jaccard overlap of truncated classification codes.

Two publications' relevance is the Jaccard similarity of their code sets
after truncating every code to its first ``level`` dot-separated segments
(level 2 by default, the conventional second-level granularity). A pair is
*undefined* -- not zero -- whenever either truncated set is empty, since
0/0 has no value and scoring it 0 would drag averages down for uncoded
years; undefined pairs are skipped and counted separately everywhere.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .cascade import Cascade, build_cascade
from .errors import MalformedCode
from .graph import CitationGraph, Publication

DEFAULT_CODE_LEVEL = 2

# Truncated code tables are cached per (graph, level); graphs are immutable
# so entries never go stale, and weak keys let graphs be collected.
_TRUNCATED: "weakref.WeakKeyDictionary[CitationGraph, dict[int, tuple[frozenset[str], ...]]]"
_TRUNCATED = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class RelevanceStats:
    """Relevance statistics of one citation generation against the root.

    ``n_pairs + n_skipped`` equals the generation width. Statistics are
    None when every pair was undefined. ``variance`` is the population
    variance (divide by n): a generation is treated as the complete
    population of that cascade's generation.
    """

    generation: int
    mean: float | None
    median: float | None
    variance: float | None
    n_pairs: int
    n_skipped: int


@dataclass(frozen=True)
class RelevanceCurve:
    """Per-generation mean relevance of a cascade's nodes to its root.

    ``values[i]`` is the generation ``i + 1`` mean, None where the
    generation had no defined pair; ``counts[i]`` is its defined-pair count.
    """

    root: str
    values: list[float | None]
    counts: list[int]


def code_level(code: str, level: int = DEFAULT_CODE_LEVEL) -> str:
    """First ``level`` dot-separated segments of ``code``.

    Raises MalformedCode when the code has fewer segments than requested.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    parts = code.split(".")
    if len(parts) < level:
        raise MalformedCode(code, level)
    return ".".join(parts[:level])


def _truncate_set(codes: frozenset[str], level: int) -> frozenset[str]:
    # Codes shorter than the level are kept whole rather than rejected, so
    # corpus-wide sweeps tolerate shallow codes; duplicates collapse.
    out = set()
    for code in codes:
        parts = code.split(".")
        out.add(".".join(parts[:level]) if len(parts) >= level else code)
    return frozenset(out)


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float | None:
    if not a or not b:
        return None
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return inter / len(a | b)


def _truncated_table(graph: CitationGraph, level: int) -> tuple[frozenset[str], ...]:
    per_graph = _TRUNCATED.setdefault(graph, {})
    table = per_graph.get(level)
    if table is None:
        table = tuple(_truncate_set(c, level) for c in graph.codes)
        per_graph[level] = table
    return table


def pair_relevance(a: Publication, b: Publication, level: int = DEFAULT_CODE_LEVEL) -> float | None:
    """Jaccard similarity of the two publications' truncated code sets.

    Returns a value in [0, 1], or None (undefined) when either truncated
    set is empty. Symmetric; 1.0 exactly when the truncated sets are equal
    and non-empty, 0.0 when they are non-empty and disjoint.
    """
    return _jaccard(_truncate_set(a.codes, level), _truncate_set(b.codes, level))


def generation_relevance(
    graph: CitationGraph,
    cascade: Cascade,
    generation: int,
    level: int = DEFAULT_CODE_LEVEL,
) -> RelevanceStats:
    """Statistics of root-to-node relevance over one generation.

    Undefined pairs are skipped and counted. The median of an even count is
    the mean of the two middle values. Raises GenerationOutOfRange unless
    ``1 <= generation <= cascade.depth``.
    """
    layer = cascade.layer(generation)
    table = _truncated_table(graph, level)
    root_codes = table[cascade.root_index]
    values = []
    skipped = 0
    for v in layer:
        r = _jaccard(root_codes, table[int(v)])
        if r is None:
            skipped += 1
        else:
            values.append(r)
    if values:
        arr = np.asarray(values)
        mean: float | None = float(arr.mean())
        median: float | None = float(np.median(arr))
        variance: float | None = float(arr.var())
    else:
        mean = median = variance = None
    return RelevanceStats(generation, mean, median, variance, len(values), skipped)


def relevance_curve(
    graph: CitationGraph,
    cascade: Cascade,
    level: int = DEFAULT_CODE_LEVEL,
) -> RelevanceCurve:
    """Generation-indexed mean relevance curve for one cascade."""
    values: list[float | None] = []
    counts: list[int] = []
    for generation in range(1, cascade.depth + 1):
        stats = generation_relevance(graph, cascade, generation, level)
        values.append(stats.mean)
        counts.append(stats.n_pairs)
    return RelevanceCurve(root=cascade.root, values=values, counts=counts)


def first_generation_total(graph: CitationGraph, root: str, level: int = DEFAULT_CODE_LEVEL) -> float:
    """Sum of defined relevance values over the root's direct citations.

    0.0 for an uncited root. Raises UnknownRoot for absent ids.
    """
    root_idx = graph.index_of(root)
    table = _truncated_table(graph, level)
    root_codes = table[root_idx]
    total = 0.0
    for v in graph.out_neighbors(root_idx):
        r = _jaccard(root_codes, table[int(v)])
        if r is not None:
            total += r
    return total


def overall_relevance_by_generation(
    graph: CitationGraph,
    roots: list[str] | tuple[str, ...] | set[str],
    max_gen: int,
    level: int = DEFAULT_CODE_LEVEL,
    pooled: bool = False,
) -> list[float | None]:
    """Corpus-level relevance curve over generations 1..max_gen.

    Default (two-step) mode averages each qualifying root's generation mean
    with equal weight; a root qualifies for generation N when its cascade
    has that generation with at least one defined pair, and is excluded
    from that entry's denominator otherwise. ``pooled=True`` instead pools
    every defined pair across roots before averaging. Entries where no
    root qualifies are None.
    """
    root_list = sorted(roots) if isinstance(roots, set) else list(roots)
    if not root_list:
        raise ValueError("roots must be non-empty")
    if max_gen < 1:
        raise ValueError(f"max_gen must be >= 1, got {max_gen}")
    sums = [0.0] * max_gen
    counts = [0] * max_gen
    for root in root_list:
        cascade = build_cascade(graph, root, max_depth=max_gen)
        for generation in range(1, cascade.depth + 1):
            stats = generation_relevance(graph, cascade, generation, level)
            if stats.n_pairs == 0:
                continue
            g = generation - 1
            if pooled:
                sums[g] += stats.mean * stats.n_pairs
                counts[g] += stats.n_pairs
            else:
                sums[g] += stats.mean
                counts[g] += 1
    return [sums[g] / counts[g] if counts[g] else None for g in range(max_gen)]
