# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels.py`` for the reference versions."""
import numpy as np
from libc.math cimport exp, fabs, log, pow

cdef double _EPS = 1e-4


def lp_power_sum(X, U, masses, double p, double tau):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] u = np.ascontiguousarray(U, dtype=np.float64)
    cdef const double[::1] m = np.ascontiguousarray(masses, dtype=np.float64)
    cdef Py_ssize_t nk = x.shape[0], nj = u.shape[0], n = x.shape[1]
    out = np.zeros(nk)
    cdef double[::1] o = out
    # (|t| + tau t)^p = c_sign |t|^p, folded into per-sign masses
    cdef double cp = pow(1.0 + tau, p), cm = pow(1.0 - tau, p)
    cdef Py_ssize_t k, j, d
    cdef double t, acc
    for k in range(nk):
        acc = 0.0
        for j in range(nj):
            t = 0.0
            for d in range(n):
                t += x[k, d] * u[j, d]
            if t > 0.0:
                acc += cp * m[j] * exp(p * log(t))
            elif t < 0.0:
                acc += cm * m[j] * exp(p * log(-t))
        o[k] = acc
    return out


cdef inline double _g(double t, double p, double cp, double cm) nogil:
    if t >= 0:
        return cp * pow(t, p)
    return cm * pow(-t, p)


cdef inline double _dg(double t, double p, double cp, double cm) nogil:
    if t >= 0:
        return cp * p * pow(t, p - 1.0)
    return -cm * p * pow(-t, p - 1.0)


cdef inline double _g1(double t, double p, double cp, double cm) nogil:
    if t >= 0:
        return cp * pow(t, p + 1.0) / (p + 1.0)
    return -cm * pow(-t, p + 1.0) / (p + 1.0)


cdef inline double _g2(double t, double p, double cp, double cm) nogil:
    if t >= 0:
        return cp * pow(t, p + 2.0) / ((p + 1.0) * (p + 2.0))
    return cm * pow(-t, p + 2.0) / ((p + 1.0) * (p + 2.0))


cdef inline double _dd1(double a, double b, double p, double cp, double cm) nogil:
    cdef double d = b - a
    cdef double scale = fabs(a) if fabs(a) > fabs(b) else fabs(b)
    if fabs(d) <= _EPS * scale:
        return _g(0.5 * (a + b), p, cp, cm)
    return (_g1(b, p, cp, cm) - _g1(a, p, cp, cm)) / d


cdef inline double _d1g2(double x, double y, double eps, double p, double cp, double cm) nogil:
    cdef double d = y - x
    cdef double mid
    if d <= eps:
        mid = 0.5 * (x + y)
        return _g1(mid, p, cp, cm) + d * d / 24.0 * _dg(mid, p, cp, cm)
    return (_g2(y, p, cp, cm) - _g2(x, p, cp, cm)) / d


cdef inline double _dd2(double t0, double t1, double t2, double p, double cp, double cm) nogil:
    cdef double a = t0, b = t1, c = t2, tmp
    if a > b:
        tmp = a; a = b; b = tmp
    if b > c:
        tmp = b; b = c; c = tmp
    if a > b:
        tmp = a; a = b; b = tmp
    cdef double scale = fabs(a) if fabs(a) > fabs(c) else fabs(c)
    cdef double eps = _EPS * scale
    if c - a <= eps:
        return 0.5 * _g((a + b + c) / 3.0, p, cp, cm)
    return (_d1g2(b, c, eps, p, cp, cm) - _d1g2(a, b, eps, p, cp, cm)) / (c - a)


def cone_moment(X, simplices, coef, double p, double tau):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, :, ::1] s = np.ascontiguousarray(simplices, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(coef, dtype=np.float64)
    cdef Py_ssize_t nk = x.shape[0], nt = s.shape[0], nv = s.shape[1], n = s.shape[2]
    if nv != 2 and nv != 3:
        raise ValueError("simplices must be segments or triangles")
    cdef double cp = pow(1.0 + tau, p), cm = pow(1.0 - tau, p)
    out = np.zeros(nk)
    cdef double[::1] o = out
    cdef Py_ssize_t k, t, d
    cdef double acc, t0, t1, t2
    for k in range(nk):
        acc = 0.0
        for t in range(nt):
            t0 = 0.0
            t1 = 0.0
            t2 = 0.0
            for d in range(n):
                t0 += s[t, 0, d] * x[k, d]
                t1 += s[t, 1, d] * x[k, d]
            if nv == 2:
                acc += c[t] * _dd1(t0, t1, p, cp, cm)
            else:
                for d in range(n):
                    t2 += s[t, 2, d] * x[k, d]
                acc += c[t] * _dd2(t0, t1, t2, p, cp, cm)
        o[k] = acc
    return out
