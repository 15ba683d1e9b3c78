# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the float kernels in ``_kernels_py``; same contracts."""

from libc.math cimport fabs

DEF SPLIT_OK = 0
DEF SPLIT_SINGULAR = 1
DEF SPLIT_NEGATIVE = 2
DEF MAXP = 64


def split_float(tuple mid, tuple v1, tuple v3, Py_ssize_t j, Py_ssize_t k, double tol):
    cdef Py_ssize_t n = len(mid), x
    cdef double bm[MAXP]
    cdef double b1[MAXP]
    cdef double b3[MAXP]
    if n > MAXP:
        from ._kernels_py import split_float as slow
        return slow(mid, v1, v3, j, k, tol)
    for x in range(n):
        bm[x] = mid[x]
        b1[x] = v1[x]
        b3[x] = v3[x]
    cdef double a = b1[j], b = b3[j], c = b1[k], d = b3[k]
    cdef double det = a * d - b * c
    if det == 0.0 or fabs(det) <= 1e-14 * (fabs(a * d) + fabs(b * c)):
        return SPLIT_SINGULAR, 0.0, 0.0, None
    cdef double mj = bm[j], mk = bm[k]
    cdef double s1 = (mj * d - b * mk) / det
    cdef double s3 = (a * mk - c * mj) / det
    cdef double mass = 0.0, m1 = 0.0, m3 = 0.0, r, bound
    for x in range(n):
        mass += bm[x]
        m1 += b1[x]
        m3 += b3[x]
    if s1 < -tol * mass / m1:
        return SPLIT_NEGATIVE, s1, s3, ("s1", s1)
    if s3 < -tol * mass / m3:
        return SPLIT_NEGATIVE, s1, s3, ("s3", s3)
    if s1 < 0.0:
        s1 = 0.0
    if s3 < 0.0:
        s3 = 0.0
    bound = tol * mass
    cdef double out[MAXP]
    for x in range(n):
        out[x] = 0.0
        if x == j or x == k:
            continue
        r = bm[x] - s1 * b1[x] - s3 * b3[x]
        if r < -bound:
            return SPLIT_NEGATIVE, s1, s3, (x, r)
        if r > bound:
            out[x] = r
    return SPLIT_OK, s1, s3, tuple([out[x] for x in range(n)])


def proportional_float(tuple a, tuple b, double tol):
    cdef Py_ssize_t n = len(a), x
    cdef double ma = 0.0, mb = 0.0, ax, bx, bound
    cdef double ba[MAXP]
    cdef double bb[MAXP]
    if n > MAXP:
        from ._kernels_py import proportional_float as slow
        return slow(a, b, tol)
    for x in range(n):
        ax = a[x]
        bx = b[x]
        if (ax > 0.0) != (bx > 0.0):
            return False
        ba[x] = ax
        bb[x] = bx
        ma += ax
        mb += bx
    bound = tol * ma * mb
    for x in range(n):
        if ba[x] > 0.0 and fabs(ba[x] * mb - bb[x] * ma) > bound:
            return False
    return True
