# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex pivoting kernel.

Mirrors ``_simplex_py.run_simplex``: Bland's rule on a dense tableau, in place.
"""

from libc.math cimport fabs

cdef enum:
    C_OPTIMAL = 0
    C_UNBOUNDED = 1
    C_ITERATION_LIMIT = 2

OPTIMAL, UNBOUNDED, ITERATION_LIMIT = C_OPTIMAL, C_UNBOUNDED, C_ITERATION_LIMIT


cdef void _pivot(double[:, ::1] T, long[::1] basis, Py_ssize_t row, Py_ssize_t col) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t nrow = T.shape[0], ncol = T.shape[1]
    cdef double piv = T[row, col], f
    for j in range(ncol):
        T[row, j] /= piv
    for i in range(nrow):
        if i == row:
            continue
        f = T[i, col]
        if f != 0.0:
            for j in range(ncol):
                T[i, j] -= f * T[row, j]
        T[i, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


cdef int _run(double[:, ::1] T, long[::1] basis, Py_ssize_t n_enter, double tol,
              long max_iter) noexcept nogil:
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t rhs = T.shape[1] - 1
    cdef Py_ssize_t i, j, col, row
    cdef long it
    cdef double a, ratio, best, limit
    for it in range(max_iter):
        col = -1
        for j in range(n_enter):
            if T[m, j] < -tol:
                col = j
                break
        if col < 0:
            return C_OPTIMAL
        best = 0.0
        row = -1
        for i in range(m):
            a = T[i, col]
            if a > tol:
                ratio = T[i, rhs] / a
                if row < 0 or ratio < best:
                    best = ratio
                    row = i
        if row < 0:
            return C_UNBOUNDED
        limit = best + tol * (1.0 + fabs(best))
        for i in range(m):
            a = T[i, col]
            if a > tol and T[i, rhs] / a <= limit and basis[i] < basis[row]:
                row = i
        _pivot(T, basis, row, col)
    return C_ITERATION_LIMIT


def pivot(double[:, ::1] T, long[::1] basis, Py_ssize_t row, Py_ssize_t col):
    _pivot(T, basis, row, col)


def run_simplex(double[:, ::1] T, long[::1] basis, Py_ssize_t n_enter, double tol,
                long max_iter):
    cdef int status
    with nogil:
        status = _run(T, basis, n_enter, tol, max_iter)
    return status
