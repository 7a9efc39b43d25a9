"""Pure-Python/numpy versions of the compiled kernels.

Summations use ``np.cumsum`` so that floating-point accumulation happens in
sequence order, exactly like the loops in ``_ckernels.pyx``.
"""
from collections import deque

import numpy as np


def bfs_hops(indptr, indices, source):
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in nbr[ptr[u]:ptr[u + 1]]:
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)
    return np.asarray(dist, dtype=np.int32)


def multi_source_hops(indptr, indices, sources):
    n = len(indptr) - 1
    out = np.empty((len(sources), n), dtype=np.int32)
    for r, s in enumerate(sources):
        out[r] = bfs_hops(indptr, indices, int(s))
    return out


def _seq_sum(x):
    return float(np.cumsum(x)[-1])


def gather_moments(idx, values):
    x = values[idx]
    mean = _seq_sum(x) / len(x)
    d = x - mean
    return mean, _seq_sum(d * d) / len(x)


def stream_total(classes, targets, class_cost, tile_cost):
    if len(classes) == 0:
        return 0.0
    cost = class_cost[classes]
    cost[classes == 0] = tile_cost[targets]
    return _seq_sum(cost)
