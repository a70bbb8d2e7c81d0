# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Stride-arithmetic gate application on batched state vectors.

``state`` has shape (d**w, B): one column per simulated state.  Qudit 0 is the
most significant digit of the row index.
"""
from libc.stdlib cimport malloc, free

ctypedef double complex cplx


cdef Py_ssize_t _ipow(Py_ssize_t b, Py_ssize_t e) nogil:
    cdef Py_ssize_t r = 1
    while e > 0:
        r *= b
        e -= 1
    return r


def apply_dense(cplx[:, ::1] state, int d, int w, Py_ssize_t[::1] targets, const cplx[:, ::1] u):
    cdef Py_ssize_t k = targets.shape[0]
    cdef Py_ssize_t dim = _ipow(d, k)
    cdef Py_ssize_t n_rows = state.shape[0]
    cdef Py_ssize_t n_cols = state.shape[1]
    cdef Py_ssize_t *strides = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef Py_ssize_t *offs = <Py_ssize_t *> malloc(dim * sizeof(Py_ssize_t))
    cdef cplx *buf = <cplx *> malloc(dim * n_cols * sizeof(cplx))
    cdef Py_ssize_t i, a, r, n, b, tmp, off
    cdef cplx coef
    cdef cplx *row
    cdef bint base
    if strides == NULL or offs == NULL or buf == NULL:
        free(strides); free(offs); free(buf)
        raise MemoryError()
    try:
        with nogil:
            for i in range(k):
                strides[i] = _ipow(d, w - 1 - targets[i])
            for a in range(dim):
                tmp = a
                off = 0
                for i in range(k - 1, -1, -1):
                    off += (tmp % d) * strides[i]
                    tmp = tmp // d
                offs[a] = off
            for n in range(n_rows):
                base = True
                for i in range(k):
                    if (n // strides[i]) % d != 0:
                        base = False
                        break
                if not base:
                    continue
                # copy the dim affected rows, then write back whole-row linear combinations
                for a in range(dim):
                    for b in range(n_cols):
                        buf[a * n_cols + b] = state[n + offs[a], b]
                for r in range(dim):
                    row = &state[n + offs[r], 0]
                    for b in range(n_cols):
                        row[b] = 0
                    for a in range(dim):
                        coef = u[r, a]
                        if coef == 0:
                            continue
                        for b in range(n_cols):
                            row[b] = row[b] + coef * buf[a * n_cols + b]
    finally:
        free(strides)
        free(offs)
        free(buf)


def apply_diag(cplx[:, ::1] state, int d, int w, Py_ssize_t[::1] targets, const cplx[::1] diag):
    cdef Py_ssize_t k = targets.shape[0]
    cdef Py_ssize_t n_rows = state.shape[0]
    cdef Py_ssize_t n_cols = state.shape[1]
    cdef Py_ssize_t *strides = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, n, b, a
    cdef cplx f
    if strides == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(k):
                strides[i] = _ipow(d, w - 1 - targets[i])
            for n in range(n_rows):
                a = 0
                for i in range(k):
                    a = a * d + (n // strides[i]) % d
                f = diag[a]
                if f == 1:
                    continue
                for b in range(n_cols):
                    state[n, b] = state[n, b] * f
    finally:
        free(strides)
