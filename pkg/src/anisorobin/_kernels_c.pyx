# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled numeric hot kernels (modified Bessel, Sturm count, tridiagonal solve).

Same algorithms as anisorobin._kernels_py; see that module for references.
"""

from libc.math cimport exp, log, sqrt, sinh, cosh, acosh, fabs, M_PI

BACKEND = "cython"

cdef double _EULER_GAMMA = 0.5772156649015328606065120900824024
cdef double _SERIES_CUTOFF_I = 30.0
cdef double _SERIES_CUTOFF_K = 2.0
cdef double _ASYM_CUTOFF_K = 30.0
cdef int _K_TRAP_NODES = 160


cdef double _i0_series(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 1.0
    cdef double s = 1.0
    cdef int m = 1
    while m < 200:
        term *= q / (m * m)
        s += term
        if term < 1e-17 * s:
            break
        m += 1
    return s


cdef double _i1_series(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 0.5 * x
    cdef double s = term
    cdef int m = 1
    while m < 200:
        term *= q / (m * (m + 1))
        s += term
        if term < 1e-17 * s:
            break
        m += 1
    return s


cdef double _iv_asym_scaled(double x, int nu) nogil:
    cdef double s = 1.0
    cdef double term = 1.0
    cdef double nxt
    cdef int k = 1
    while k < 60:
        nxt = term * (((2 * k - 1) * (2 * k - 1) - 4.0 * nu * nu) / (8.0 * k * x))
        if fabs(nxt) >= fabs(term):
            break
        term = nxt
        s += term
        if fabs(term) < 1e-17 * fabs(s):
            break
        k += 1
    return s / sqrt(2.0 * M_PI * x)


cdef double _kv_asym_scaled(double x, int nu) nogil:
    cdef double s = 1.0
    cdef double term = 1.0
    cdef double nxt
    cdef int k = 1
    while k < 60:
        nxt = term * ((4.0 * nu * nu - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * x))
        if fabs(nxt) >= fabs(term):
            break
        term = nxt
        s += term
        if fabs(term) < 1e-17 * fabs(s):
            break
        k += 1
    return s * sqrt(0.5 * M_PI / x)


cdef double _k0_series(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 1.0
    cdef double h = 0.0
    cdef double s = 0.0
    cdef int m = 1
    while m < 60:
        term *= q / (m * m)
        h += 1.0 / m
        s += term * h
        if term * h < 1e-17 * (s if s > 1.0 else 1.0):
            break
        m += 1
    return -(log(0.5 * x) + _EULER_GAMMA) * _i0_series(x) + s


cdef double _k1_series(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 1.0
    cdef double psis = 1.0 - 2.0 * _EULER_GAMMA
    cdef double s = term * psis
    cdef double mag
    cdef int k = 1
    while k < 60:
        term *= q / (k * (k + 1))
        psis += 1.0 / k + 1.0 / (k + 1)
        s += term * psis
        mag = fabs(s)
        if term * fabs(psis) < 1e-17 * (mag if mag > 1.0 else 1.0):
            break
        k += 1
    return 1.0 / x + log(0.5 * x) * _i1_series(x) - 0.25 * x * s


cdef double _k_integral_scaled(double x, int nu) nogil:
    cdef double t_max = acosh(1.0 + 45.0 / x)
    cdef double h = t_max / _K_TRAP_NODES
    cdef double s = 0.5
    cdef double t, sh, w
    cdef int j
    for j in range(1, _K_TRAP_NODES + 1):
        t = j * h
        sh = sinh(0.5 * t)
        w = exp(-2.0 * x * sh * sh)
        if nu == 1:
            w *= cosh(t)
        s += w
    return s * h


cdef double _i0e(double x) nogil:
    if x <= _SERIES_CUTOFF_I:
        return exp(-x) * _i0_series(x)
    return _iv_asym_scaled(x, 0)


cdef double _i1e(double x) nogil:
    if x <= _SERIES_CUTOFF_I:
        return exp(-x) * _i1_series(x)
    return _iv_asym_scaled(x, 1)


cdef double _k0e(double x) nogil:
    if x <= _SERIES_CUTOFF_K:
        return exp(x) * _k0_series(x)
    if x >= _ASYM_CUTOFF_K:
        return _kv_asym_scaled(x, 0)
    return _k_integral_scaled(x, 0)


cdef double _k1e(double x) nogil:
    if x <= _SERIES_CUTOFF_K:
        return exp(x) * _k1_series(x)
    if x >= _ASYM_CUTOFF_K:
        return _kv_asym_scaled(x, 1)
    return _k_integral_scaled(x, 1)


def i0e(double x):
    """e^{-x} I0(x), stable for all x >= 0."""
    return _i0e(x)


def i1e(double x):
    return _i1e(x)


def k0e(double x):
    """e^{x} K0(x), stable for all x > 0."""
    return _k0e(x)


def k1e(double x):
    return _k1e(x)


def i0(double x):
    return exp(x) * _i0e(x)


def i1(double x):
    return exp(x) * _i1e(x)


def k0(double x):
    return exp(-x) * _k0e(x)


def k1(double x):
    return exp(-x) * _k1e(x)


def sturm_count(double[::1] diag_a, double[::1] off_a,
                double[::1] diag_m, double[::1] off_m, double lam):
    """Number of eigenvalues of the pencil (A, M) strictly below lam."""
    cdef Py_ssize_t n = diag_a.shape[0]
    cdef Py_ssize_t i
    cdef int count = 0
    cdef double piv, off
    piv = diag_a[0] - lam * diag_m[0]
    if piv == 0.0:
        piv = 1e-300
    if piv < 0.0:
        count += 1
    for i in range(1, n):
        off = off_a[i - 1] - lam * off_m[i - 1]
        piv = (diag_a[i] - lam * diag_m[i]) - off * off / piv
        if piv == 0.0:
            piv = 1e-300
        if piv < 0.0:
            count += 1
    return count


def tridiag_solve_inplace(double[::1] d, double[::1] e, double[::1] x):
    """Solve symmetric tridiagonal T x = rhs by LDL^T (no pivoting).

    d, e hold the diagonal/off-diagonal of T and are overwritten with the
    factors; x holds the rhs on entry and the solution on exit. T must be
    positive definite (shifted eigensystem use).
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef double li
    for i in range(1, n):
        if d[i - 1] == 0.0:
            d[i - 1] = 1e-300
        li = e[i - 1] / d[i - 1]
        d[i] -= li * e[i - 1]
        e[i - 1] = li
    for i in range(1, n):
        x[i] -= e[i - 1] * x[i - 1]
    for i in range(n):
        if d[i] == 0.0:
            d[i] = 1e-300
        x[i] /= d[i]
    for i in range(n - 2, -1, -1):
        x[i] -= e[i] * x[i + 1]
