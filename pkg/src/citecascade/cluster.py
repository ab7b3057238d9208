"""Clustering of equal-length per-cascade curves into typical patterns.

Fixed-depth cohorts of width or relevance curves are z-normalized per
series and grouped by Lloyd's k-means under Euclidean distance. Centroids
therefore live in normalized space: shapes cluster together regardless of
per-series scale or offset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cascade import batch_cascades, build_cascade, width_profile
from .errors import EmptyCohort, TooFewSeries
from .graph import CitationGraph
from .relevance import DEFAULT_CODE_LEVEL, relevance_curve


@dataclass(frozen=True)
class SeriesSet:
    """Cohort of equal-length curves, one per qualifying root.

    ``imputed_entries`` counts relevance entries filled by interpolation;
    ``skipped_roots`` lists roots of matching depth whose curve had no
    defined entry at all and could not be imputed.
    """

    depth: int
    series: np.ndarray  # shape (n, depth)
    ids: tuple[str, ...]
    imputed_entries: int = 0
    skipped_roots: tuple[str, ...] = ()

    def __len__(self) -> int:
        return self.series.shape[0]


@dataclass(frozen=True)
class ClusterModel:
    """Result of one k-means fit (the best restart by inertia).

    ``centroids`` are in z-normalized space. ``restart_histories`` records
    the per-iteration inertia of every restart; each history is
    non-increasing. ``empty_clusters`` flags clusters that could not be
    re-seeded because every point already coincides with a centroid.
    """

    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    seed: int
    iterations_run: int
    inertia_history: tuple[float, ...]
    restart_histories: tuple[tuple[float, ...], ...]
    empty_clusters: tuple[int, ...] = ()


def z_normalize(series) -> np.ndarray:
    """Shift/scale a series to mean 0 and standard deviation 1.

    Constant series map to all-zeros instead of dividing by zero.
    Requires length >= 2.
    """
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError("series must be one-dimensional with length >= 2")
    if np.all(arr == arr[0]):  # exact check: the mean itself may round
        return np.zeros_like(arr)
    std = arr.std()
    if std == 0:
        return np.zeros_like(arr)
    return (arr - arr.mean()) / std


def _z_rows(matrix: np.ndarray) -> np.ndarray:
    constant = (matrix == matrix[:, :1]).all(axis=1, keepdims=True)
    mu = matrix.mean(axis=1, keepdims=True)
    sd = matrix.std(axis=1, keepdims=True)
    dead = constant | (sd == 0)
    return np.where(dead, 0.0, (matrix - mu) / np.where(dead, 1.0, sd))


def _impute_linear(values: list[float | None]) -> tuple[list[float], int] | None:
    """Fill None entries by linear interpolation; endpoints carry the
    nearest defined value. Returns None when nothing is defined."""
    known = [i for i, v in enumerate(values) if v is not None]
    if not known:
        return None
    out: list[float] = [0.0] * len(values)
    for i in known:
        out[i] = float(values[i])
    first, last = known[0], known[-1]
    for i in range(first):
        out[i] = out[first]
    for i in range(last + 1, len(values)):
        out[i] = out[last]
    for a, b in zip(known, known[1:]):
        if b - a > 1:
            step = (out[b] - out[a]) / (b - a)
            for i in range(a + 1, b):
                out[i] = out[a] + step * (i - a)
    return out, len(values) - len(known)


def collect_cohort(
    graph: CitationGraph,
    depth: int,
    kind: str,
    level: int = DEFAULT_CODE_LEVEL,
    roots: list[str] | None = None,
) -> SeriesSet:
    """Curves of every root whose cascade depth equals ``depth`` exactly.

    ``kind`` selects width profiles or relevance curves; relevance curves
    get missing generations imputed linearly (count reported). Raises
    EmptyCohort when no cascade matches.
    """
    if depth < 2:
        raise ValueError(f"cohort depth must be >= 2, got {depth}")
    if kind not in ("width", "relevance"):
        raise ValueError(f"kind must be 'width' or 'relevance', got {kind!r}")
    candidates = list(roots) if roots is not None else list(graph.ids)
    # depth+1 cap suffices to decide "depth == requested" for every root
    matching = [
        s.root
        for s in batch_cascades(graph, candidates, max_depth=depth + 1)
        if s.error is None and s.depth == depth
    ]
    series: list[list[float]] = []
    ids: list[str] = []
    imputed = 0
    skipped: list[str] = []
    for root in matching:
        cascade = build_cascade(graph, root, max_depth=depth)
        if kind == "width":
            series.append([float(w) for w in width_profile(cascade)])
            ids.append(root)
            continue
        curve = relevance_curve(graph, cascade, level)
        filled = _impute_linear(curve.values)
        if filled is None:
            skipped.append(root)
            continue
        series.append(filled[0])
        imputed += filled[1]
        ids.append(root)
    if not series:
        raise EmptyCohort(depth)
    return SeriesSet(
        depth=depth,
        series=np.asarray(series, dtype=float),
        ids=tuple(ids),
        imputed_entries=imputed,
        skipped_roots=tuple(skipped),
    )


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = (
        (points * points).sum(axis=1)[:, None]
        - 2.0 * (points @ centers.T)
        + (centers * centers).sum(axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def _lloyd(X: np.ndarray, k: int, rng: np.random.Generator, max_iter: int, unique_rows: np.ndarray):
    n = X.shape[0]
    take = min(k, unique_rows.shape[0])
    chosen = np.sort(rng.choice(unique_rows.shape[0], size=take, replace=False))
    centers = unique_rows[chosen].copy()
    if take < k:
        fill = rng.choice(take, size=k - take, replace=True)
        centers = np.vstack([centers, centers[fill]])

    prev = None
    history: list[float] = []
    flagged: tuple[int, ...] = ()
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dist = _squared_distances(X, centers)
        assign = dist.argmin(axis=1)
        cost = dist[np.arange(n), assign]

        # re-seed empty clusters from the current farthest point; a donor
        # cluster emptied by the move is re-detected on the next sweep
        flagged_now: list[int] = []
        guard = 0
        empties = [c for c in range(k) if not (assign == c).any()]
        while empties and guard < 2 * k:
            guard += 1
            c = empties.pop(0)
            far = int(cost.argmax())
            if cost[far] <= 0.0:
                flagged_now.append(c)
            else:
                assign[far] = c
                centers[c] = X[far]
                cost[far] = 0.0
            empties = [
                c2 for c2 in range(k) if not (assign == c2).any() and c2 not in flagged_now
            ]
        flagged = tuple(flagged_now)

        history.append(float(cost.sum()))
        if prev is not None and np.array_equal(prev, assign):
            break
        prev = assign.copy()
        for c in range(k):
            members = assign == c
            if members.any():
                centers[c] = X[members].mean(axis=0)
    else:
        # max_iter exhausted: centroids moved after the last assignment,
        # so restate the inertia against the returned centroids
        final = float(
            _squared_distances(X, centers)[np.arange(n), prev].sum()
        )
        history.append(min(final, history[-1]))
    assign = prev if prev is not None else assign
    return assign, centers, history[-1], history, flagged, iterations


def kmeans(
    series_set: SeriesSet,
    k: int,
    seed: int = 0,
    restarts: int = 10,
    max_iter: int = 300,
) -> ClusterModel:
    """Best-of-restarts Lloyd's k-means on the z-normalized cohort.

    Initial centroids are sampled (seeded) from the distinct series in
    content order, which makes the result invariant to input permutation
    up to cluster relabeling. Ties between restarts break toward the lower
    restart index; identical arguments give identical assignments.
    Raises TooFewSeries when k exceeds the cohort size.
    """
    n = len(series_set)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise TooFewSeries(k, n)
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    X = _z_rows(np.asarray(series_set.series, dtype=float))
    unique_rows = np.unique(X, axis=0)

    best = None
    histories: list[tuple[float, ...]] = []
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        assign, centers, inertia, history, flagged, iterations = _lloyd(
            X, k, rng, max_iter, unique_rows
        )
        histories.append(tuple(history))
        if best is None or inertia < best[0]:
            best = (inertia, assign, centers, tuple(history), flagged, iterations)

    inertia, assign, centers, history, flagged, iterations = best
    assign = assign.copy()
    assign.flags.writeable = False
    return ClusterModel(
        k=k,
        centroids=centers,
        assignments=assign,
        inertia=float(inertia),
        seed=seed,
        iterations_run=iterations,
        inertia_history=history,
        restart_histories=tuple(histories),
        empty_clusters=flagged,
    )
