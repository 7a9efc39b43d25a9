"""Hot-loop kernels with backend selection at import time.

The compiled Cython extension is used when it was built; otherwise, or when
``SEQEMU_PURE_PYTHON`` is set to a non-empty value, the pure-Python versions
are used. Both produce bit-identical results.

All functions take CSR adjacency as int64 arrays (``indptr``, ``indices``).
"""
import os

import numpy as np

from . import _kernels_py

if os.environ.get("SEQEMU_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "cython"


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def bfs_hops(indptr, indices, source):
    """Hop distance from ``source`` to every node (-1 if unreachable)."""
    return _impl.bfs_hops(_i64(indptr), _i64(indices), int(source))


def multi_source_hops(indptr, indices, sources):
    """Row ``r`` holds the BFS distances from ``sources[r]``."""
    return _impl.multi_source_hops(_i64(indptr), _i64(indices), _i64(sources))


def gather_moments(idx, values):
    """Mean and population variance of ``values[idx]``, summed in order."""
    idx = _i64(idx)
    if len(idx) == 0:
        raise ValueError("need at least one sample")
    return _impl.gather_moments(idx, _f64(values))


def stream_total(classes, targets, class_cost, tile_cost):
    """Sum the cost of an operation stream.

    ``classes[i]`` is 0 for a global access, otherwise an index into
    ``class_cost``. Global accesses consume ``targets`` in order and cost
    ``tile_cost[target]``.
    """
    return _impl.stream_total(
        np.ascontiguousarray(classes, dtype=np.int8),
        _i64(targets),
        _f64(class_cost),
        _f64(tile_cost),
    )
