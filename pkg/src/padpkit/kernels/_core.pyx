# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled peak-search kernels.

Semantics are locked to ``padpkit.kernels._pure``; the pair is covered by an
equivalence test on tie-heavy inputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def local_maxima_2d(object values, double threshold):
    """Circular-row / clipped-column 4-neighbour local maxima above threshold."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] v = \
        np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t m = v.shape[0]
    cdef Py_ssize_t k = v.shape[1]
    cdef Py_ssize_t i, j, iu, idn
    cdef double x, nb
    cdef list rows = []
    cdef list cols = []

    for i in range(m):
        iu = m - 1 if i == 0 else i - 1
        idn = 0 if i == m - 1 else i + 1
        for j in range(k):
            x = v[i, j]
            if not (x > threshold):
                continue
            if m > 1:
                nb = v[iu, j]
                if x < nb or (x == nb and i != 0):
                    continue
                nb = v[idn, j]
                if x < nb or (x == nb and i == m - 1):
                    continue
            if j > 0:
                if not (x > v[i, j - 1]):
                    continue
            if j < k - 1:
                if x < v[i, j + 1]:
                    continue
            rows.append(i)
            cols.append(j)
    return (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))


def local_maxima_1d(object values, double threshold):
    """Clipped-edge local maxima of a 1-D profile above threshold."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] v = \
        np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t j
    cdef double x
    cdef list out = []

    for j in range(n):
        x = v[j]
        if not (x > threshold):
            continue
        if j > 0 and not (x > v[j - 1]):
            continue
        if j < n - 1 and x < v[j + 1]:
            continue
        out.append(j)
    return np.asarray(out, dtype=np.int64)
