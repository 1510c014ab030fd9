# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, pow, expm1, fabs

cnp.import_array()


cdef inline void _neumaier_add(double* total, double* comp, double x) nogil:
    cdef double t = total[0] + x
    if fabs(total[0]) >= fabs(x):
        comp[0] += (total[0] - t) + x
    else:
        comp[0] += (x - t) + total[0]
    total[0] = t


def unified_entropy_grid(p, qs, ss):
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const double[::1] qv = np.ascontiguousarray(qs, dtype=np.float64)
    cdef const double[::1] sv = np.ascontiguousarray(ss, dtype=np.float64)
    cdef Py_ssize_t n = pv.shape[0]
    cdef Py_ssize_t m = qv.shape[0]
    cdef double[::1] pos = np.empty(n, dtype=np.float64)
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k, npos = 0
    cdef double q, s, acc, comp, shannon = 0.0, shannon_comp = 0.0, lps

    for i in range(n):
        if pv[i] > 0.0:
            pos[npos] = pv[i]
            _neumaier_add(&shannon, &shannon_comp, -pv[i] * log(pv[i]))
            npos += 1
    shannon += shannon_comp

    for k in range(m):
        q = qv[k]
        s = sv[k]
        if q == 1.0:
            out[k] = shannon
            continue
        acc = 0.0
        comp = 0.0
        for i in range(npos):
            _neumaier_add(&acc, &comp, pow(pos[i], q))
        lps = log(acc + comp)
        if s == 0.0:
            out[k] = lps / (1.0 - q)
        else:
            out[k] = expm1(s * lps) / ((1.0 - q) * s)
    return out_arr


def gram_diagonals(pi, us):
    cdef const double complex[:, ::1] P = np.ascontiguousarray(pi, dtype=np.complex128)
    cdef const double complex[:, :, ::1] U = np.ascontiguousarray(us, dtype=np.complex128)
    cdef Py_ssize_t t = U.shape[0]
    cdef Py_ssize_t k = U.shape[1]
    out_arr = np.empty((t, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t a, i, j, l
    cdef double complex acc, inner
    for a in range(t):
        for i in range(k):
            acc = 0.0
            for j in range(k):
                inner = 0.0
                for l in range(k):
                    inner = inner + P[j, l] * U[a, l, i]
                acc = acc + U[a, j, i].conjugate() * inner
            out[a, i] = acc.real
    return out_arr


def effect_gram(kraus, rho):
    cdef const double complex[:, :, ::1] A = np.ascontiguousarray(kraus, dtype=np.complex128)
    cdef const double complex[:, ::1] R = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef Py_ssize_t k = A.shape[0]
    cdef Py_ssize_t dout = A.shape[1]
    cdef Py_ssize_t d = A.shape[2]
    m_arr = np.zeros((k, dout, d), dtype=np.complex128)
    cdef double complex[:, :, ::1] M = m_arr
    out_arr = np.empty((k, k), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, a, b, c
    cdef double complex acc
    for j in range(k):
        for a in range(dout):
            for c in range(d):
                for b in range(d):
                    M[j, a, b] = M[j, a, b] + A[j, a, c] * R[c, b]
    for i in range(k):
        for j in range(i, k):
            acc = 0.0
            for a in range(dout):
                for b in range(d):
                    acc = acc + A[i, a, b].conjugate() * M[j, a, b]
            out[i, j] = acc
            if j != i:
                out[j, i] = acc.conjugate()
    return out_arr
