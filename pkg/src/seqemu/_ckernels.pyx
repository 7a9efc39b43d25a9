# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Must stay bit-for-bit equivalent to _kernels_py."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef void _bfs(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
               Py_ssize_t source, cnp.int32_t[::1] dist,
               cnp.int64_t[::1] queue) noexcept nogil:
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, head = 0, tail = 0, u, v
    cdef cnp.int64_t j
    for i in range(n):
        dist[i] = -1
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue[tail] = v
                tail += 1


def bfs_hops(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
             Py_ssize_t source):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    cdef cnp.int32_t[::1] d = dist
    cdef cnp.int64_t[::1] q = queue
    with nogil:
        _bfs(indptr, indices, source, d, q)
    return dist


def multi_source_hops(const cnp.int64_t[::1] indptr,
                      const cnp.int64_t[::1] indices,
                      const cnp.int64_t[::1] sources):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m = sources.shape[0]
    cdef Py_ssize_t r
    out = np.empty((m, n), dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    cdef cnp.int32_t[:, ::1] o = out
    cdef cnp.int64_t[::1] q = queue
    with nogil:
        for r in range(m):
            _bfs(indptr, indices, sources[r], o[r], q)
    return out


def gather_moments(const cnp.int64_t[::1] idx, const double[::1] values):
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t i
    cdef double total = 0.0, mean, d, m2 = 0.0
    with nogil:
        for i in range(n):
            total = total + values[idx[i]]
        mean = total / n
        for i in range(n):
            d = values[idx[i]] - mean
            m2 = m2 + d * d
    return mean, m2 / n


def stream_total(const cnp.int8_t[::1] classes, const cnp.int64_t[::1] targets,
                 const double[::1] class_cost, const double[::1] tile_cost):
    cdef Py_ssize_t n = classes.shape[0]
    cdef Py_ssize_t i, j = 0
    cdef double total = 0.0
    with nogil:
        for i in range(n):
            if classes[i] == 0:
                total = total + tile_cost[targets[j]]
                j += 1
            else:
                total = total + class_cost[classes[i]]
    return total
