"""Numba-compiled traversal kernels for corpus-scale batch work."""

import numpy as np
from numba import njit


@njit(cache=True)
def batch_summary_kernel(indptr, indices, roots, max_depth):
    """Layered BFS from each root over a CSR adjacency.

    Returns per-root arrays (depth, max width, size, sum of node distances).
    ``max_depth < 0`` means unlimited. The visited-stamp trick avoids
    clearing state between roots, so memory stays O(nodes) for any number
    of roots.
    """
    n = indptr.shape[0] - 1
    m = roots.shape[0]
    out_depth = np.zeros(m, dtype=np.int64)
    out_width = np.zeros(m, dtype=np.int64)
    out_size = np.ones(m, dtype=np.int64)
    out_dist = np.zeros(m, dtype=np.int64)
    stamp = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for r in range(m):
        root = roots[r]
        stamp[root] = r
        queue[0] = root
        lo = 0
        hi = 1
        d = 0
        while lo < hi:
            if max_depth >= 0 and d >= max_depth:
                break
            d += 1
            w = hi
            for qi in range(lo, hi):
                u = queue[qi]
                for e in range(indptr[u], indptr[u + 1]):
                    v = indices[e]
                    if stamp[v] != r:
                        stamp[v] = r
                        queue[w] = v
                        w += 1
            layer_width = w - hi
            if layer_width == 0:
                break
            out_depth[r] = d
            out_size[r] += layer_width
            out_dist[r] += d * layer_width
            if layer_width > out_width[r]:
                out_width[r] = layer_width
            lo = hi
            hi = w
    return out_depth, out_width, out_size, out_dist
