# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; _ref.py states the semantics contract both backends share."""

from libc.math cimport fabs, pow, sqrt, INFINITY

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef double _wnorm(const double* v, const double* w, double p, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    cdef double x
    if p == INFINITY:
        for i in range(d):
            x = fabs(v[i])
            if x > acc:
                acc = x
        return acc
    if p == 1.0:
        for i in range(d):
            acc += w[i] * fabs(v[i])
        return acc
    if p == 2.0:
        for i in range(d):
            x = v[i]
            acc += w[i] * x * x
        return sqrt(acc)
    for i in range(d):
        acc += w[i] * pow(fabs(v[i]), p)
    return pow(acc, 1.0 / p)


cdef void _terms_one(const double[:, ::1] X, const double* w, double p, const double* alpha,
                     double* s, double* env, double* ab, double* out4) noexcept nogil:
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k, i
    cdef double a, aa, x
    cdef double nn = 0.0
    cdef double maxpart = 0.0
    for i in range(d):
        s[i] = 0.0
        env[i] = 0.0
        ab[i] = 0.0
    for k in range(m):
        a = alpha[k]
        if a != 0.0:
            aa = fabs(a)
            for i in range(d):
                s[i] += a * X[k, i]
                x = fabs(s[i])
                if x > env[i]:
                    env[i] = x
                ab[i] += aa * fabs(X[k, i])
            nn = _wnorm(s, w, p, d)
            if nn > maxpart:
                maxpart = nn
        # a == 0 leaves s, env, ab and the running norm unchanged
    out4[0] = nn
    out4[1] = _wnorm(env, w, p, d)
    out4[2] = maxpart
    out4[3] = _wnorm(ab, w, p, d)


def eval_terms(X, w, double p, alpha):
    """(last, env, maxpart, abssum) for a single coefficient vector."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef Py_ssize_t d = Xv.shape[1]
    if av.shape[0] != Xv.shape[0]:
        raise ValueError("alpha length must match the number of vectors")
    if wv.shape[0] != d:
        raise ValueError("weights length must match the dimension")
    scratch = np.empty(3 * d, dtype=np.float64)
    cdef double[::1] sc = scratch
    cdef double out4[4]
    with nogil:
        _terms_one(Xv, &wv[0], p, &av[0], &sc[0], &sc[d], &sc[2 * d], out4)
    return (out4[0], out4[1], out4[2], out4[3])


def eval_terms_batch(X, w, double p, A):
    """(P, 4) array of (last, env, maxpart, abssum) for P coefficient rows."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef Py_ssize_t d = Xv.shape[1]
    cdef Py_ssize_t P = Av.shape[0]
    if Av.shape[1] != Xv.shape[0]:
        raise ValueError("coefficient rows must match the number of vectors")
    if wv.shape[0] != d:
        raise ValueError("weights length must match the dimension")
    out = np.empty((P, 4), dtype=np.float64)
    cdef double[:, ::1] outv = out
    scratch = np.empty(3 * d, dtype=np.float64)
    cdef double[::1] sc = scratch
    cdef Py_ssize_t t
    with nogil:
        for t in range(P):
            _terms_one(Xv, &wv[0], p, &Av[t, 0], &sc[0], &sc[d], &sc[2 * d],
                       &outv[t, 0])
    return out
