"""Degree- and year-preserving graph randomization.

The rewiring chain repeatedly proposes double edge swaps: two edge slots
(a -> b) and (c -> d) are drawn uniformly and replaced by (a -> d) and
(c -> b) when that creates no self-loop, no duplicate edge, and respects
the configured temporal rule. Swapping citing endpoints leaves every
node's in-degree, out-degree, year, and the total edge count untouched,
which makes the rewired graph a baseline for relevance curves: any topic
structure tied to who-cites-whom is destroyed while the degree/year
skeleton survives.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import stats as _scipy_stats

from .errors import InsufficientEdges
from .graph import CitationGraph
from .relevance import DEFAULT_CODE_LEVEL, overall_relevance_by_generation

# Draws are consumed in fixed-size blocks so a run is reproducible for a
# given seed regardless of platform.
_DRAW_BLOCK = 1 << 16


class TemporalRule(str, Enum):
    """Constraint a proposed edge must satisfy.

    ``ordered`` requires cited.year <= citing.year, keeping rewired edges
    temporally plausible while mixing freely. ``strict_year_match``
    additionally pins each edge slot's (cited year, citing year) pair by
    only swapping citing endpoints of equal year; it mixes far more slowly.
    """

    ORDERED = "ordered"
    STRICT_YEAR_MATCH = "strict_year_match"


@dataclass(frozen=True)
class RewireConfig:
    """Rewiring parameters.

    ``swap_factor`` scales the attempt budget: ``swap_factor * edge_count``
    proposals are made, and rejected proposals count against the budget,
    so runs are reproducible attempt-for-attempt.
    """

    seed: int
    swap_factor: float = 10.0
    temporal_rule: TemporalRule = TemporalRule.ORDERED

    def __post_init__(self):
        if self.swap_factor <= 0:
            raise ValueError(f"swap_factor must be > 0, got {self.swap_factor}")


class GenerationBaseline(NamedTuple):
    """Mean/std of the baseline relevance at one generation, with the
    number of realizations that produced a value there."""

    mean: float | None
    std: float | None
    n: int


def rewire(graph: CitationGraph, config: RewireConfig) -> CitationGraph:
    """Randomize the graph by double edge swaps; deterministic per seed.

    Node set, years, and each node's in/out degree are exactly preserved.
    The output contains no self-loops or duplicate edges, and every
    accepted edge satisfies the temporal rule (edges never touched keep
    whatever the input had). Raises InsufficientEdges below 2 edges.
    """
    m = graph.edge_count
    if m < 2:
        raise InsufficientEdges(m)
    cited_arr, citing_arr = graph.edge_arrays()
    n = graph.n_nodes
    # Plain Python lists and encoded-int membership keep the inner loop cheap.
    cited = cited_arr.tolist()
    citing = citing_arr.tolist()
    years = graph.years.tolist()
    edges = {a * n + b for a, b in zip(cited, citing)}
    strict_years = config.temporal_rule is TemporalRule.STRICT_YEAR_MATCH

    attempts = int(round(config.swap_factor * m))
    rng = np.random.default_rng(config.seed)
    done = 0
    while done < attempts:
        block = min(_DRAW_BLOCK, attempts - done)
        draws = rng.integers(0, m, size=2 * block).tolist()
        for t in range(block):
            i = draws[2 * t]
            j = draws[2 * t + 1]
            if i == j:
                continue
            a = cited[i]
            b = citing[i]
            c = cited[j]
            d = citing[j]
            if a == d or c == b:
                continue
            if strict_years:
                if years[b] != years[d]:
                    continue
            elif years[a] > years[d] or years[c] > years[b]:
                continue
            e1 = a * n + d
            e2 = c * n + b
            if e1 in edges or e2 in edges:
                continue
            edges.remove(a * n + b)
            edges.remove(c * n + d)
            edges.add(e1)
            edges.add(e2)
            citing[i] = d
            citing[j] = b
        done += block

    return graph._with_edges(cited_arr, np.asarray(citing, dtype=np.int64))


def baseline_curve(
    graph: CitationGraph,
    config: RewireConfig,
    roots: list[str] | tuple[str, ...],
    max_gen: int,
    level: int = DEFAULT_CODE_LEVEL,
    n_realizations: int = 20,
) -> list[GenerationBaseline]:
    """Relevance curve of the randomized graph, aggregated per generation.

    Realization k rewires with seed ``config.seed + k`` and recomputes the
    corpus curve; entries report mean and population std across the
    realizations that produced a value (std is 0 for a single realization).
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    curves = []
    for k in range(n_realizations):
        shuffled = rewire(graph, replace(config, seed=config.seed + k))
        curves.append(overall_relevance_by_generation(shuffled, roots, max_gen, level))
    out = []
    for g in range(max_gen):
        vals = [curve[g] for curve in curves if curve[g] is not None]
        if vals:
            arr = np.asarray(vals)
            out.append(GenerationBaseline(float(arr.mean()), float(arr.std()), len(vals)))
        else:
            out.append(GenerationBaseline(None, None, 0))
    return out


def fit_slope(values: list[float | None]) -> float:
    """Least-squares slope of a curve against its generation numbers.

    None entries are skipped; at least two defined points are required.
    """
    points = [(g + 1, v) for g, v in enumerate(values) if v is not None]
    if len(points) < 2:
        raise ValueError("need at least two defined entries to fit a slope")
    x = np.asarray([p[0] for p in points], dtype=float)
    y = np.asarray([p[1] for p in points], dtype=float)
    return float(np.polyfit(x, y, 1)[0])


def slope_confidence_interval(
    curves: list[list[float | None]],
    confidence: float = 0.95,
) -> tuple[float, float]:
    """t-interval for the mean per-curve slope across realizations.

    A flat baseline should yield an interval containing 0.
    """
    slopes = np.asarray([fit_slope(curve) for curve in curves], dtype=float)
    if slopes.size < 2:
        raise ValueError("need at least two curves for a confidence interval")
    mean = float(slopes.mean())
    sem = float(slopes.std(ddof=1) / np.sqrt(slopes.size))
    t = float(_scipy_stats.t.ppf(0.5 + confidence / 2, df=slopes.size - 1))
    return mean - t * sem, mean + t * sem
