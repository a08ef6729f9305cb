# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels. Mirrors ``ordfix._pykernels`` exactly."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def triangle_violation(const double[:, :] dist):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, j, k
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if dist[i, k] > dist[i, j] + dist[j, k]:
                    return (i, j, k)
    return None


def transitivity_violation(const unsigned char[:, :] rel):
    cdef Py_ssize_t n = rel.shape[0]
    cdef Py_ssize_t i, j, k
    for i in range(n):
        for j in range(n):
            if not rel[i, j]:
                continue
            for k in range(n):
                if rel[j, k] and not rel[i, k]:
                    return (i, j, k)
    return None


def floyd_warshall(const double[:, :] dist):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double via
    out = np.array(dist, dtype=np.float64, copy=True)
    cdef double[:, :] d = out
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = d[i, k] + d[k, j]
                if via < d[i, j]:
                    d[i, j] = via
    return out


def transitive_closure(const unsigned char[:, :] rel):
    cdef Py_ssize_t n = rel.shape[0]
    cdef Py_ssize_t i, j, k
    out = np.array(rel, dtype=np.uint8, copy=True)
    cdef unsigned char[:, :] r = out
    for k in range(n):
        for i in range(n):
            if not r[i, k]:
                continue
            for j in range(n):
                if r[k, j]:
                    r[i, j] = 1
    return out.astype(bool)


def linear_contraction_violation(const double[:, :] dist, const long[:] selfmap,
                                 const unsigned char[:, :] mask, double alpha,
                                 double slack):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, j
    cdef long checked = 0
    for i in range(n):
        for j in range(n):
            if not mask[i, j]:
                continue
            checked += 1
            if dist[selfmap[i], selfmap[j]] > alpha * dist[i, j] + slack:
                return (i, j, checked)
    return (-1, -1, checked)


def maia_series(const double[:, :] dist, const long[:] selfmap, double lam, long terms):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, j
    cdef long k, x, y
    cdef double acc, weight
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, :] e = out
    for i in range(n):
        for j in range(n):
            x = i
            y = j
            acc = 0.0
            weight = 1.0
            for k in range(terms):
                if x == y:
                    break
                acc += weight * dist[x, y]
                weight *= lam
                x = selfmap[x]
                y = selfmap[y]
            e[i, j] = acc
    return out
