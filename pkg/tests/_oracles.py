"""Independent brute-force reference implementations.

These operate directly on raw (cited_id, citing_id) pairs with dict
adjacency and plain loops, deliberately sharing no code with the package
internals they are used to check.
"""

from collections import defaultdict, deque

import numpy as np


def adjacency(edges):
    adj = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
    return adj


def shortest_distances(edges, root):
    """Plain queue BFS; returns {node: distance} including the root at 0."""
    adj = adjacency(edges)
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def bfs_layers(edges, root, max_depth=None):
    """Sorted shortest-path layers (ids), excluding the root."""
    dist = shortest_distances(edges, root)
    depth = max(dist.values(), default=0)
    if max_depth is not None:
        depth = min(depth, max_depth)
    layers = [[] for _ in range(depth)]
    for node, d in dist.items():
        if 1 <= d <= depth:
            layers[d - 1].append(node)
    return [sorted(layer) for layer in layers]


def enumerate_walks(edges, root, max_len):
    """Counts of distinct directed walks from root, by length 1..max_len,
    via exhaustive depth-first continuation."""
    adj = adjacency(edges)
    counts = [0] * max_len
    stack = [(root, 0)]
    while stack:
        node, length = stack.pop()
        if length == max_len:
            continue
        for v in adj[node]:
            counts[length] += 1
            stack.append((v, length + 1))
    return counts


def degree_counts(edges, ids):
    """(in_degree, out_degree) dicts in knowledge-flow orientation."""
    indeg = {i: 0 for i in ids}
    outdeg = {i: 0 for i in ids}
    for a, b in edges:
        outdeg[a] += 1
        indeg[b] += 1
    return indeg, outdeg


def transpose(edges):
    return sorted((b, a) for a, b in edges)


def jaccard(codes_a, codes_b, level=2):
    """Direct set arithmetic on prefix-truncated codes; None when undefined."""
    ta = {".".join(c.split(".")[:level]) if len(c.split(".")) >= level else c for c in codes_a}
    tb = {".".join(c.split(".")[:level]) if len(c.split(".")) >= level else c for c in codes_b}
    if not ta or not tb:
        return None
    return len(ta & tb) / len(ta | tb)


def group_by_bins(bin_edges, xs, ys):
    """Half-open binning (last bin closed) by linear scan.

    Returns (list of per-bin y-lists, excluded count).
    """
    k = len(bin_edges) - 1
    groups = [[] for _ in range(k)]
    excluded = 0
    for x, y in zip(xs, ys):
        placed = False
        for i in range(k):
            lo, hi = bin_edges[i], bin_edges[i + 1]
            if (lo <= x < hi) or (i == k - 1 and x == hi):
                groups[i].append(y)
                placed = True
                break
        if not placed:
            excluded += 1
    return groups, excluded


def quartile_stats(values):
    """(count, mean, median, q1, q3) with interpolated quartiles."""
    arr = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(arr, [25, 50, 75])
    return len(values), float(arr.mean()), float(med), float(q1), float(q3)
