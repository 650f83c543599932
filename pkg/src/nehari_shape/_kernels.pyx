# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def pairwise_sum(values):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.array(
        np.ascontiguousarray(values, dtype=np.float64).ravel(), copy=True)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t half, i
    cdef double[::1] buf = x
    if n == 0:
        return 0.0
    with nogil:
        while n > 1:
            half = n // 2
            for i in range(half):
                buf[i] = buf[2 * i] + buf[2 * i + 1]
            if n % 2:
                buf[half] = buf[n - 1]
                n = half + 1
            else:
                n = half
    return float(buf[0])


def q1_local_stiffness(coef, dshape, qweights):
    cdef double[:, :, :, ::1] A = np.ascontiguousarray(coef, dtype=np.float64)
    cdef double[:, :, ::1] G = np.ascontiguousarray(dshape, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(qweights, dtype=np.float64)
    cdef Py_ssize_t ncell = A.shape[0], nq = A.shape[1]
    out = np.zeros((ncell, 4, 4), dtype=np.float64)
    cdef double[:, :, ::1] K = out
    cdef Py_ssize_t c, q, i, j
    cdef double a00, a01, a10, a11, gx, gy, agx, agy
    with nogil:
        for c in range(ncell):
            for q in range(nq):
                a00 = A[c, q, 0, 0]
                a01 = A[c, q, 0, 1]
                a10 = A[c, q, 1, 0]
                a11 = A[c, q, 1, 1]
                for j in range(4):
                    gx = G[q, j, 0]
                    gy = G[q, j, 1]
                    agx = w[q] * (a00 * gx + a01 * gy)
                    agy = w[q] * (a10 * gx + a11 * gy)
                    for i in range(4):
                        K[c, i, j] += G[q, i, 0] * agx + G[q, i, 1] * agy
    return out


def q1_local_mass(weight, shape, qweights):
    cdef double[:, ::1] cw = np.ascontiguousarray(weight, dtype=np.float64)
    cdef double[:, ::1] N = np.ascontiguousarray(shape, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(qweights, dtype=np.float64)
    cdef Py_ssize_t ncell = cw.shape[0], nq = cw.shape[1]
    out = np.zeros((ncell, 4, 4), dtype=np.float64)
    cdef double[:, :, ::1] M = out
    cdef Py_ssize_t c, q, i, j
    cdef double s
    with nogil:
        for c in range(ncell):
            for q in range(nq):
                s = w[q] * cw[c, q]
                for i in range(4):
                    for j in range(4):
                        M[c, i, j] += s * N[q, i] * N[q, j]
    return out
