# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: cyclic Jacobi rotations and P1 element stiffness."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef double _off_norm(double[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i, j] * a[i, j]
    return sqrt(2.0 * s)


cdef double _fro_norm(double[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            s += a[i, j] * a[i, j]
    return sqrt(s)


def jacobi_sweeps(double[:, ::1] a, double[:, ::1] v, double tol, int max_sweeps):
    """Run cyclic Jacobi sweeps in place on symmetric ``a``, accumulating ``v``.

    Returns ``(sweeps, off_norm)``.  Stops once the off-diagonal Frobenius
    norm is at most ``tol * ||a||_F``.
    """
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef double apq, theta, t, c, s, akp, akq, g, scale, off
    cdef int sweep = 0
    with nogil:
        scale = _fro_norm(a)
        off = _off_norm(a)
        while sweep < max_sweeps and off > tol * scale:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    g = 100.0 * fabs(apq)
                    if sweep > 3 and fabs(a[p, p]) + g == fabs(a[p, p]) and fabs(a[q, q]) + g == fabs(a[q, q]):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(n):
                        akp = a[p, k]
                        akq = a[q, k]
                        a[p, k] = c * akp - s * akq
                        a[q, k] = s * akp + c * akq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * akq
                        v[k, q] = s * akp + c * akq
            sweep += 1
            off = _off_norm(a)
    return sweep, off


def p1_stiffness(double[:, ::1] xy, long[:, ::1] tri):
    """Element stiffness entries for every triangle.

    Returns ``(rows, cols, vals, areas)`` in COO layout, 9 entries per triangle.
    """
    cdef Py_ssize_t nt = tri.shape[0], e, i, j, m
    cdef double x[3]
    cdef double y[3]
    cdef double bx[3]
    cdef double by[3]
    cdef double det, area, f
    rows_a = np.empty(9 * nt, dtype=np.int64)
    cols_a = np.empty(9 * nt, dtype=np.int64)
    vals_a = np.empty(9 * nt, dtype=np.float64)
    areas_a = np.empty(nt, dtype=np.float64)
    cdef long[::1] rows = rows_a
    cdef long[::1] cols = cols_a
    cdef double[::1] vals = vals_a
    cdef double[::1] areas = areas_a
    with nogil:
        for e in range(nt):
            for i in range(3):
                x[i] = xy[tri[e, i], 0]
                y[i] = xy[tri[e, i], 1]
            det = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0])
            area = 0.5 * det
            areas[e] = area
            # gradient of barycentric i is (by[i], bx[i]) / det
            by[0] = y[1] - y[2]
            by[1] = y[2] - y[0]
            by[2] = y[0] - y[1]
            bx[0] = x[2] - x[1]
            bx[1] = x[0] - x[2]
            bx[2] = x[1] - x[0]
            f = 1.0 / (4.0 * area)
            m = 9 * e
            for i in range(3):
                for j in range(3):
                    rows[m] = tri[e, i]
                    cols[m] = tri[e, j]
                    vals[m] = f * (by[i] * by[j] + bx[i] * bx[j])
                    m += 1
    return rows_a, cols_a, vals_a, areas_a
