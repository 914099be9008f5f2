"""Pure numpy implementations of the hot kernels.

Mirrors ``_ckernels.pyx`` function for function; selected at import time by
:mod:`lpblaschke.kernels` when the compiled module is unavailable.
"""
import numpy as np

# relative spread below which divided differences switch to Taylor forms
_EPS = 1e-4
_CHUNK = 2_000_000


def lp_power_sum(X, U, masses, p, tau):
    """``out[k] = sum_j (|X_k . U_j| + tau X_k . U_j)^p masses[j]``."""
    X = np.ascontiguousarray(X, dtype=float)
    U = np.ascontiguousarray(U, dtype=float)
    masses = np.ascontiguousarray(masses, dtype=float)
    out = np.empty(len(X))
    step = max(1, _CHUNK // max(len(U), 1))
    for s in range(0, len(X), step):
        t = X[s:s + step] @ U.T
        out[s:s + step] = ((np.abs(t) + tau * t) ** p) @ masses
    return out


def _g(t, p, cp, cm):
    a = np.abs(t) ** p
    return np.where(t >= 0, cp * a, cm * a)


def _dg(t, p, cp, cm):
    a = p * np.abs(t) ** (p - 1.0)
    return np.where(t >= 0, cp * a, -cm * a)


def _g1(t, p, cp, cm):
    a = np.abs(t) ** (p + 1.0) / (p + 1.0)
    return np.where(t >= 0, cp * a, -cm * a)


def _g2(t, p, cp, cm):
    a = np.abs(t) ** (p + 2.0) / ((p + 1.0) * (p + 2.0))
    return np.where(t >= 0, cp * a, cm * a)


def _dd1(t0, t1, p, cp, cm):
    """First divided difference of the first antiderivative of G."""
    d = t1 - t0
    scale = np.maximum(np.abs(t0), np.abs(t1))
    close = np.abs(d) <= _EPS * scale
    safe = np.where(close, 1.0, d)
    exact = (_g1(t1, p, cp, cm) - _g1(t0, p, cp, cm)) / safe
    return np.where(close, _g(0.5 * (t0 + t1), p, cp, cm), exact)


def _dd2(t0, t1, t2, p, cp, cm):
    """Second divided difference of the second antiderivative of G."""
    t = np.sort(np.stack([t0, t1, t2]), axis=0)
    a, b, c = t[0], t[1], t[2]
    scale = np.maximum(np.abs(a), np.abs(c))
    eps = _EPS * scale

    def d1(x, y):
        d = y - x
        close = d <= eps
        safe = np.where(close, 1.0, d)
        exact = (_g2(y, p, cp, cm) - _g2(x, p, cp, cm)) / safe
        m = 0.5 * (x + y)
        approx = _g1(m, p, cp, cm) + d * d / 24.0 * _dg(m, p, cp, cm)
        return np.where(close, approx, exact)

    spread = c - a
    tight = spread <= eps
    safe = np.where(tight, 1.0, spread)
    general = (d1(b, c) - d1(a, b)) / safe
    mean = (a + b + c) / 3.0
    return np.where(tight, 0.5 * _g(mean, p, cp, cm), general)


def cone_moment(X, simplices, coef, p, tau):
    """``out[k] = sum_T coef[T] * DD(simplices[T] . X_k)``.

    Segments (``n == 2``) use the first divided difference of the first
    antiderivative of ``G(t) = (|t| + tau t)^p``; triangles (``n == 3``) the
    second divided difference of its second antiderivative.
    """
    X = np.ascontiguousarray(X, dtype=float)
    S = np.ascontiguousarray(simplices, dtype=float)
    coef = np.ascontiguousarray(coef, dtype=float)
    cp, cm = (1.0 + tau) ** p, (1.0 - tau) ** p
    nvert = S.shape[1]
    out = np.empty(len(X))
    step = max(1, _CHUNK // max(len(S), 1))
    for s in range(0, len(X), step):
        x = X[s:s + step]
        t = np.einsum("tvd,kd->vkt", S, x)
        if nvert == 2:
            dd = _dd1(t[0], t[1], p, cp, cm)
        elif nvert == 3:
            dd = _dd2(t[0], t[1], t[2], p, cp, cm)
        else:
            raise ValueError("simplices must be segments or triangles")
        out[s:s + step] = dd @ coef
    return out
