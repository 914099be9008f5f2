"""Independent reference computations (slice integration with scipy.integrate).

None of these share code with the package: moments are integrated slice by
slice along the direction ``u`` (the slice measure of a polytope is
piecewise polynomial in the height), circle integrals use adaptive
quadrature with breakpoints at every kink.
"""
import math

import numpy as np
from scipy import integrate
from scipy.spatial import ConvexHull


def slice_measure(vertices, u, t):
    """(n-1)-volume of ``conv(vertices) cap {x.u = t}`` for n = 2, 3."""
    v = np.asarray(vertices, float)
    hull = ConvexHull(v)
    s = v @ u - t
    pts = list(v[np.abs(s) < 1e-15])
    edges = set()
    for simplex in hull.simplices:
        for i in range(len(simplex)):
            for j in range(i + 1, len(simplex)):
                edges.add((min(simplex[i], simplex[j]), max(simplex[i], simplex[j])))
    # 3d hull simplices are triangles, so every polytope edge is some triangle edge
    for i, j in edges:
        if s[i] * s[j] < 0:
            lam = s[i] / (s[i] - s[j])
            pts.append(v[i] + lam * (v[j] - v[i]))
    if len(pts) < v.shape[1]:
        return 0.0
    pts = np.array(pts)
    if v.shape[1] == 2:
        d = pts @ np.array([-u[1], u[0]])
        return float(d.max() - d.min())
    # project on an orthonormal basis of u-perp
    a = np.linalg.svd(u[None, :])[2][1:]
    q = pts @ a.T
    try:
        return float(ConvexHull(q).volume)
    except Exception:
        return 0.0


def moment(vertices, u, p, tau=0.0):
    """``int_K (|u.x| + tau u.x)^p dx`` by slices."""
    u = np.asarray(u, float)
    u = u / np.linalg.norm(u)
    heights = np.unique(np.round(np.asarray(vertices, float) @ u, 14))
    lo, hi = heights[0], heights[-1]
    points = sorted(set(heights.tolist() + ([0.0] if lo < 0 < hi else [])))

    def f(t):
        return (abs(t) + tau * t) ** p * slice_measure(vertices, u, t)

    total = 0.0
    for a, b in zip(points, points[1:]):
        total += integrate.quad(f, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
    return total


def one_sided_moment(vertices, u, p):
    """``2^p int_{K cap u+} (u.x)^p dx``."""
    u = np.asarray(u, float)
    u = u / np.linalg.norm(u)
    hi = float((np.asarray(vertices, float) @ u).max())
    heights = sorted(set([0.0] + [h for h in np.round(np.asarray(vertices, float) @ u, 14) if 0 < h < hi] + [hi]))
    total = 0.0
    for a, b in zip(heights, heights[1:]):
        total += integrate.quad(lambda t: t ** p * slice_measure(vertices, u, t), a, b,
                                epsabs=0, epsrel=1e-12, limit=200)[0]
    return 2.0 ** p * total


def cnp(n, p):
    """``(1/kappa_n) int_B |x_1|^p dx`` in polar coordinates."""
    radial = 1.0 / (n + p)
    if n == 2:
        ang = integrate.quad(lambda t: abs(math.cos(t)) ** p, 0, 2 * math.pi, points=[math.pi / 2, 3 * math.pi / 2])[0]
        return radial * ang / math.pi
    ang = 2 * math.pi * integrate.quad(lambda t: abs(math.cos(t)) ** p * math.sin(t), 0, math.pi,
                                       points=[math.pi / 2])[0]
    return radial * ang / (4 * math.pi / 3)


def polygon_radial(vertices, theta):
    """Radial function of a polygon with the origin inside, at angle ``theta``."""
    hull = ConvexHull(np.asarray(vertices, float))
    u = np.array([math.cos(theta), math.sin(theta)])
    best = math.inf
    for eq in hull.equations:
        c = eq[:2] @ u
        if c > 0:
            best = min(best, -eq[2] / c)
    return best


def polygon_curvature_transform(vertices, p, alpha):
    """``int_0^{2pi} rho(t)^{2+p} |cos(t - alpha)|^p dt`` with breakpoints at all kinks."""
    v = np.asarray(vertices, float)
    kinks = {float(math.atan2(y, x)) % (2 * math.pi) for x, y in v}
    kinks |= {(alpha + math.pi / 2) % (2 * math.pi), (alpha + 3 * math.pi / 2) % (2 * math.pi)}
    pts = sorted(kinks | {0.0, 2 * math.pi})
    total = 0.0
    for a, b in zip(pts, pts[1:]):
        if b - a > 1e-15:
            total += integrate.quad(lambda t: polygon_radial(v, t) ** (2 + p) * abs(math.cos(t - alpha)) ** p,
                                    a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
    return total
