# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled dense kernels for the map-reduce Min-Sum decoder.

Every function writes into caller-owned output buffers and releases the GIL.
Signatures match :mod:`mrminsum._kernels_py` exactly.
"""

from libc.math cimport fabs, INFINITY

ctypedef unsigned char u8
ctypedef long long i64


def masked_fan_out(const u8[:, ::1] H, const double[::1] v, double[:, ::1] lam):
    cdef Py_ssize_t i, j, m = H.shape[0], n = H.shape[1]
    with nogil:
        for i in range(m):
            for j in range(n):
                if H[i, j]:
                    lam[i, j] = v[j]
                else:
                    lam[i, j] = 0.0


def matrix_minus(double[:, ::1] lam, const double[:, ::1] eta):
    cdef Py_ssize_t i, j, m = lam.shape[0], n = lam.shape[1]
    with nogil:
        for i in range(m):
            for j in range(n):
                lam[i, j] = lam[i, j] - eta[i, j]


def find_minima(const u8[:, ::1] H, const double[:, ::1] lam,
                double[::1] min0, double[::1] min1, i64[::1] loc):
    cdef Py_ssize_t i, j, m = H.shape[0], n = H.shape[1]
    cdef double a, lo, hi
    cdef i64 where
    with nogil:
        for i in range(m):
            lo = INFINITY
            hi = INFINITY
            where = -1
            for j in range(n):
                if H[i, j]:
                    a = fabs(lam[i, j])
                    if a < lo:
                        hi = lo
                        lo = a
                        where = j
                    elif a < hi:
                        hi = a
            min0[i] = lo
            min1[i] = hi
            loc[i] = where


def sign_reduce(const u8[:, ::1] H, const double[:, ::1] lam, double[::1] sgn):
    cdef Py_ssize_t i, j, m = H.shape[0], n = H.shape[1]
    cdef i64 negatives
    with nogil:
        for i in range(m):
            negatives = 0
            for j in range(n):
                if H[i, j] and lam[i, j] < 0.0:
                    negatives += 1
            sgn[i] = -1.0 if negatives & 1 else 1.0


def produce_new_matrix(const u8[:, ::1] H, const double[:, ::1] lam,
                       const double[::1] min0, const double[::1] min1,
                       const i64[::1] loc, const double[::1] sgn,
                       double[:, ::1] eta):
    cdef Py_ssize_t i, j, m = H.shape[0], n = H.shape[1]
    cdef double mag, s
    with nogil:
        for i in range(m):
            s = sgn[i]
            for j in range(n):
                if H[i, j]:
                    mag = min1[i] if j == loc[i] else min0[i]
                    if lam[i, j] < 0.0:
                        eta[i, j] = -s * mag
                    else:
                        eta[i, j] = s * mag
                else:
                    eta[i, j] = 0.0


def sum_vertical(const double[:, ::1] eta, double[::1] acc):
    cdef Py_ssize_t i, j, m = eta.shape[0], n = eta.shape[1]
    with nogil:
        for j in range(n):
            acc[j] = 0.0
        for i in range(m):
            for j in range(n):
                acc[j] = acc[j] + eta[i, j]


def add_channel(const double[::1] acc, const double[::1] r, double[::1] s):
    cdef Py_ssize_t j, n = acc.shape[0]
    with nogil:
        for j in range(n):
            s[j] = acc[j] + r[j]


def slicer(const double[::1] s, u8[::1] b):
    cdef Py_ssize_t j, n = s.shape[0]
    with nogil:
        for j in range(n):
            b[j] = 1 if s[j] > 0.0 else 0


def syndrome_product(const i64[::1] col_ptr, const i64[::1] col_rows,
                     const u8[::1] b, i64[::1] counts):
    cdef Py_ssize_t j, t, n = b.shape[0], m = counts.shape[0]
    with nogil:
        for t in range(m):
            counts[t] = 0
        for j in range(n):
            if b[j]:
                for t in range(col_ptr[j], col_ptr[j + 1]):
                    counts[col_rows[t]] += 1


def mod2(i64[::1] counts):
    cdef Py_ssize_t t, m = counts.shape[0]
    with nogil:
        for t in range(m):
            counts[t] = counts[t] & 1


def is_codeword_check(const i64[::1] counts):
    cdef Py_ssize_t t, m = counts.shape[0]
    cdef bint ok = True
    with nogil:
        for t in range(m):
            if counts[t] != 0:
                ok = False
                break
    return ok
