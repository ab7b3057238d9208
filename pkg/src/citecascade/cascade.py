"""Cascade construction and structural metrics.

A cascade is the layered set of publications reachable from a root along
knowledge-flow edges. Layer N holds the distinct nodes whose shortest-path
distance from the root is exactly N (the N-th citation generation), so every
reachable node belongs to exactly one layer. The alternative multiplicity
semantics -- counting each directed walk separately, so a node can recur
within and across generations -- is exposed by :func:`count_walks`.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import DepthCapExceeded, GenerationOutOfRange, ViralityUndefined
from .graph import CitationGraph

#: Walk counting grows super-exponentially with depth; refuse beyond this.
WALK_DEPTH_CAP = 15


@dataclass(frozen=True)
class Cascade:
    """Layered cascade of a root publication.

    ``layers[i]`` holds the internal node indices of generation ``i + 1``,
    sorted ascending. Layers are pairwise disjoint, exclude the root, and
    are all non-empty, so ``depth == len(layers)``.
    """

    root: str
    root_index: int
    layers: tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def size(self) -> int:
        """Node count including the root."""
        return 1 + sum(layer.size for layer in self.layers)

    def layer(self, generation: int) -> np.ndarray:
        if not 1 <= generation <= self.depth:
            raise GenerationOutOfRange(generation, self.depth)
        return self.layers[generation - 1]


@dataclass(frozen=True)
class WalkProfile:
    """Directed-walk counts from a root.

    ``walk_counts[i]`` is the number of distinct walks of length ``i + 1``,
    so the first entry equals the root's out-degree. Counts are exact
    Python integers.
    """

    root: str
    walk_counts: list[int]
    max_depth: int


@dataclass(frozen=True, slots=True)
class CascadeSummary:
    """Structural metrics of one cascade; ``virality`` is None for size 1."""

    root: str
    depth: int | None
    width: int | None
    size: int | None
    virality: float | None
    error: str | None = None


def _expand(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """All forward neighbors of the frontier nodes, with repetitions."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    shifts = np.repeat(starts - (np.cumsum(counts) - counts), counts)
    return indices[shifts + np.arange(total)].astype(np.int64, copy=False)


def build_cascade(graph: CitationGraph, root: str, max_depth: int | None = None) -> Cascade:
    """Breadth-first layering from ``root`` along knowledge-flow edges.

    Each reachable node lands in the single layer matching its shortest-path
    distance; cycles in the input are neutralized because a node is assigned
    once. Traversal stops after ``max_depth`` generations when given.
    Raises UnknownRoot if the root id is absent.
    """
    root_idx = graph.index_of(root)
    seen = np.zeros(graph.n_nodes, dtype=bool)
    seen[root_idx] = True
    frontier = np.asarray([root_idx], dtype=np.int64)
    layers: list[np.ndarray] = []
    while frontier.size and (max_depth is None or len(layers) < max_depth):
        neighbors = _expand(graph.fwd_indptr, graph.fwd_indices, frontier)
        if neighbors.size == 0:
            break
        candidates = np.unique(neighbors)  # sorted: fixes within-layer order
        fresh = candidates[~seen[candidates]]
        if fresh.size == 0:
            break
        seen[fresh] = True
        fresh.flags.writeable = False
        layers.append(fresh)
        frontier = fresh
    return Cascade(root=root, root_index=root_idx, layers=tuple(layers))


def width_profile(cascade: Cascade) -> list[int]:
    """Per-generation node counts; empty list for an uncited root."""
    return [int(layer.size) for layer in cascade.layers]


def cascade_width(cascade: Cascade) -> int:
    """Maximum generation width (0 for an uncited root)."""
    return max((int(layer.size) for layer in cascade.layers), default=0)


def structural_virality(cascade: Cascade) -> float:
    """Mean shortest-path distance of the non-root nodes from the root.

    Lies in [1, depth]. Raises ViralityUndefined for a single-node cascade
    (the non-root count is zero).
    """
    non_root = cascade.size - 1
    if non_root == 0:
        raise ViralityUndefined(f"cascade of {cascade.root!r} has size 1")
    total = sum((g + 1) * layer.size for g, layer in enumerate(cascade.layers))
    return total / non_root


def count_walks(
    graph: CitationGraph,
    root: str,
    max_depth: int,
    depth_cap: int = WALK_DEPTH_CAP,
) -> WalkProfile:
    """Count distinct directed walks of each length 1..max_depth from root.

    Dynamic program over predecessors: a node's walk count at length N sums
    its predecessors' counts at length N-1. Walks revisit nodes freely, so
    counts can explode; ``depth_cap`` bounds the request (DepthCapExceeded).
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    if max_depth > depth_cap:
        raise DepthCapExceeded(max_depth, depth_cap)
    root_idx = graph.index_of(root)
    current: dict[int, int] = {root_idx: 1}
    walk_counts: list[int] = []
    for _ in range(max_depth):
        nxt: dict[int, int] = {}
        for u, c in current.items():
            for v in graph.out_neighbors(u):
                vi = int(v)
                nxt[vi] = nxt.get(vi, 0) + c
        walk_counts.append(sum(nxt.values()))
        current = nxt
        if not nxt:
            walk_counts.extend([0] * (max_depth - len(walk_counts)))
            break
    return WalkProfile(root=root, walk_counts=walk_counts, max_depth=max_depth)


def batch_cascades(
    graph: CitationGraph,
    roots: Iterable[str],
    max_depth: int | None = None,
) -> Iterator[CascadeSummary]:
    """Yield a summary per root, in input order.

    Metrics are computed by a compiled layered-BFS kernel that never
    materializes layers, so memory stays bounded for corpus-wide sweeps.
    Unknown roots yield a summary with ``error`` set instead of aborting
    the batch.
    """
    root_list = list(roots)
    idx = np.empty(len(root_list), dtype=np.int64)
    for i, r in enumerate(root_list):
        j = graph.get_index(r)
        idx[i] = -1 if j is None else j
    known = idx >= 0
    md = -1 if max_depth is None else int(max_depth)
    if known.any():
        depth, width, size, dist = _accel.batch_summary_kernel(
            graph.fwd_indptr, graph.fwd_indices, idx[known], md
        )
    cursor = 0
    for i, root in enumerate(root_list):
        if not known[i]:
            yield CascadeSummary(root, None, None, None, None, error="unknown root")
            continue
        d = int(depth[cursor])
        w = int(width[cursor])
        s = int(size[cursor])
        v = float(dist[cursor]) / (s - 1) if s > 1 else None
        cursor += 1
        yield CascadeSummary(root, d, w, s, v)
