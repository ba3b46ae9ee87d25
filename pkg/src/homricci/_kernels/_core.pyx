# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; see _py.py for the shared contract."""


def scalar_value(double[::1] db, long long[::1] ti, long long[::1] tj,
                 long long[::1] tk, double[::1] tv, double[::1] x):
    cdef Py_ssize_t n = db.shape[0]
    cdef Py_ssize_t m = tv.shape[0]
    cdef Py_ssize_t idx
    cdef double lin = 0.0
    cdef double tri = 0.0
    for idx in range(n):
        lin += db[idx] / x[idx]
    for idx in range(m):
        tri += tv[idx] * x[tk[idx]] / (x[ti[idx]] * x[tj[idx]])
    return 0.5 * lin - 0.25 * tri


def value_and_ricci(double[::1] db, double[::1] b, double[::1] d,
                    long long[::1] ti, long long[::1] tj, long long[::1] tk,
                    double[::1] tv, double[::1] x, double[::1] out_r,
                    double[::1] acc_a, double[::1] acc_b):
    cdef Py_ssize_t n = db.shape[0]
    cdef Py_ssize_t m = tv.shape[0]
    cdef Py_ssize_t idx
    cdef long long a, c
    cdef double lin = 0.0
    cdef double tri = 0.0
    cdef double contrib
    for idx in range(n):
        lin += db[idx] / x[idx]
        acc_a[idx] = 0.0
        acc_b[idx] = 0.0
    for idx in range(m):
        a = ti[idx]
        c = tk[idx]
        contrib = tv[idx] / (x[a] * x[tj[idx]])
        acc_a[c] += contrib
        acc_b[a] += contrib * x[c] * x[a]
        tri += contrib * x[c]
    for idx in range(n):
        out_r[idx] = 0.5 * b[idx] + x[idx] * x[idx] * acc_a[idx] / (4.0 * d[idx]) \
            - acc_b[idx] / (2.0 * d[idx])
    return 0.5 * lin - 0.25 * tri
