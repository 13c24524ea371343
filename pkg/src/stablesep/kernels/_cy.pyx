# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the numerical kernels.

Must stay behaviorally identical to ``_py`` (same signatures, same
math); parity is enforced by tests. Randomness is always drawn by the
caller and passed in, so results match the fallback bit-for-bit up to
floating-point summation order.
"""

from libc.math cimport cos, fabs, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def pearson_triple(x, y, z):
    """Return (r_xy, r_xz, r_yz) for three equal-length vectors."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t i
    cdef double mx = 0.0, my = 0.0, mz = 0.0
    for i in range(n):
        mx += xv[i]
        my += yv[i]
        mz += zv[i]
    mx /= n
    my /= n
    mz /= n
    cdef double sxx = 0.0, syy = 0.0, szz = 0.0
    cdef double sxy = 0.0, sxz = 0.0, syz = 0.0
    cdef double dx, dy, dz
    for i in range(n):
        dx = xv[i] - mx
        dy = yv[i] - my
        dz = zv[i] - mz
        sxx += dx * dx
        syy += dy * dy
        szz += dz * dz
        sxy += dx * dy
        sxz += dx * dz
        syz += dy * dz
    cdef double sx = sqrt(sxx), sy = sqrt(syy), sz = sqrt(szz)
    return (sxy / (sx * sy), sxz / (sx * sz), syz / (sy * sz))


def rff_transform(v, w, b, double scale):
    """Random Fourier feature map: scale * cos(outer(v, w) + b)."""
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0], m = wv.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j
    cdef double vi
    for i in range(n):
        vi = vv[i]
        for j in range(m):
            ov[i, j] = scale * cos(vi * wv[j] + bv[j])
    return out


def median_pairwise_distance(v):
    """Median of |v_i - v_j| over all distinct index pairs i < j."""
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0]
    cdef Py_ssize_t total = n * (n - 1) // 2
    buf = np.empty(total, dtype=np.float64)
    cdef double[::1] bv = buf
    cdef Py_ssize_t i, j, k = 0
    for i in range(n):
        for j in range(i + 1, n):
            bv[k] = fabs(vv[i] - vv[j])
            k += 1
    # selection of the middle elements is left to numpy's introselect
    return float(np.median(buf))


def rowwise_outer(a, b):
    """Row-wise outer products flattened to an (n, ma*mb) matrix."""
    cdef const double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], ma = av.shape[1], mb = bv.shape[1]
    out = np.empty((n, ma * mb), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j, k
    cdef double aij
    for i in range(n):
        for j in range(ma):
            aij = av[i, j]
            for k in range(mb):
                ov[i, j * mb + k] = aij * bv[i, k]
    return out
