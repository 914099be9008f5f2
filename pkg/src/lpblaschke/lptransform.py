"""The L_p cosine transform and the bodies built from it.

All outputs are :class:`~lpblaschke.convexbody.SampledBody` values on a
direction grid.  Each carries an ``evaluator`` so the support function can
also be evaluated exactly at off-grid vectors (needed for linear images and
finite differences).
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .convexbody import OriginNotInteriorError, Polytope, SampledBody, lp_surface_area_measure
from .spherical import DirectionGrid, DiscreteMeasure, MeasureError, default_grid

__all__ = [
    "CnpConstant",
    "ZeroTransformError",
    "check_exponent",
    "cosine_transform",
    "lp_zonoid",
    "projection_body",
    "projection_body_boundary",
    "calibrate_cnp",
    "cnp_quadrature",
    "ball_volume",
    "moment_body",
    "centroid_body",
    "support_point",
]

log = logging.getLogger(__name__)


class ZeroTransformError(ValueError):
    """The cosine transform vanishes in the requested direction."""


def is_even_integer(p: float) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0


@functools.lru_cache(maxsize=None)
def _warn_even(p: float) -> None:
    log.warning("p = %g is an even integer: the L_p cosine transform is not injective, "
                "uniqueness-based reasoning is unavailable", p)


def check_exponent(p: float) -> float:
    p = float(p)
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if is_even_integer(p):
        _warn_even(p)
    return p


def ball_volume(n: int) -> float:
    """Volume ``kappa_n`` of the Euclidean unit ball."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def _as_rows(x):
    xa = np.asarray(x, dtype=float)
    return xa.ndim == 1, np.atleast_2d(xa)


def cosine_transform(m: DiscreteMeasure, p: float, x) -> np.ndarray | float:
    """``(C_p m)(x) = sum_i |x . u_i|^p m_i``; vectorized over rows of ``x``."""
    p = check_exponent(p)
    single, xa = _as_rows(x)
    out = kernels.lp_power_sum(xa, m.directions, m.masses, p, 0.0)
    return float(out[0]) if single else out


def _power_body(grid, directions, masses, p, tau):
    def evaluate(x):
        xa = np.atleast_2d(np.asarray(x, dtype=float))
        return kernels.lp_power_sum(xa, directions, masses, p, tau) ** (1.0 / p)

    return SampledBody(grid, evaluate(grid.directions), None, evaluate)


def lp_zonoid(m: DiscreteMeasure, p: float, grid: DirectionGrid | None = None, tau: float = 0.0) -> SampledBody:
    """Body with ``h(u)^p = sum_i (|u . u_i| + tau u . u_i)^p m_i``."""
    p = check_exponent(p)
    _check_tau(tau)
    grid = grid or m.grid or default_grid(m.dim)
    return _power_body(grid, m.directions, m.masses, p, tau)


def _check_tau(tau):
    if not -1.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [-1, 1], got {tau}")


def projection_body(K: Polytope, p: float, tau: float = 0.0, grid: DirectionGrid | None = None) -> SampledBody:
    """``Pi_p^tau K``: ``h^p = sum_i (|u . u_i| + tau u . u_i)^p h_i^{1-p} A_i``.

    ``tau = 0`` gives the L_p projection body.  Exact facet normals are used.
    """
    p = check_exponent(p)
    _check_tau(tau)
    sp = lp_surface_area_measure(K, p)
    return _power_body(grid or default_grid(K.dim), sp.directions, sp.masses, p, tau)


def projection_body_boundary(P: Polytope, p: float, tau: float = 0.0,
                             grid: DirectionGrid | None = None) -> SampledBody:
    """``Pi-hat_p^tau P`` for polytopes that may have the origin on the boundary.

    Facets whose affine hull passes through the origin
    (``h_i <= 1e-12 * diam``) are left out of the sum.
    """
    p = check_exponent(p)
    _check_tau(tau)
    tol = 1e-12 * P.diameter
    if np.any(P.offsets < -tol):
        raise OriginNotInteriorError("the origin lies outside P")
    keep = P.offsets > tol
    masses = P.offsets[keep] ** (1.0 - p) * P.areas[keep]
    return _power_body(grid or default_grid(P.dim), P.normals[keep], masses, p, tau)


# ---------------------------------------------------------------------------
# centroid and moment bodies


@dataclass(frozen=True)
class CnpConstant:
    """``c_{n,p} = (1/kappa_n) int_B |x . e|^p dx``, the constant making ``Gamma_p B = B``."""

    dim: int
    p: float
    value: float


@functools.lru_cache(maxsize=None)
def calibrate_cnp(dim: int, p: float) -> CnpConstant:
    """Closed form of ``c_{n,p}`` via ``int_S |u_1|^p = 2 pi^{(n-1)/2} G((p+1)/2) / G((n+p)/2)``."""
    p = float(p)
    if not p > 0:
        raise ValueError("p must be positive")
    n = int(dim)
    sphere = 2.0 * math.pi ** ((n - 1) / 2) * math.exp(math.lgamma((p + 1) / 2) - math.lgamma((n + p) / 2))
    return CnpConstant(n, p, sphere / ((n + p) * ball_volume(n)))


def cnp_quadrature(grid: DirectionGrid, p: float, e=None) -> float:
    """Radial-spherical quadrature of ``c_{n,p}`` on ``grid`` (oracle for the closed form)."""
    n = grid.dim
    e = np.eye(n)[0] if e is None else np.asarray(e, dtype=float) / np.linalg.norm(e)
    moments = np.abs(grid.directions @ e) ** p
    return float(grid.integrate(moments) / ((n + p) * ball_volume(n)))


def _moment_evaluator(K: Polytope, p: float, tau: float):
    if not K.contains_origin_interior:
        raise OriginNotInteriorError("moment bodies need the origin in the interior")
    simplices, owner = K.facet_simplices
    n = K.dim
    if n == 2:
        meas = np.linalg.norm(simplices[:, 1] - simplices[:, 0], axis=1)
    else:
        meas = np.linalg.norm(np.cross(simplices[:, 1] - simplices[:, 0], simplices[:, 2] - simplices[:, 0]), axis=1)
    # cone over each simplex: int = h_F/(n+p) * (n-1)! |T| * divided difference
    coef = K.offsets[owner] / (n + p) * meas

    def moments(x):
        xa = np.atleast_2d(np.asarray(x, dtype=float))
        return kernels.cone_moment(xa, simplices, coef, p, tau)

    return moments


def moment_body(K: Polytope, p: float, tau: float = 0.0, grid: DirectionGrid | None = None) -> SampledBody:
    """``M_p^tau K``: ``h(u)^p = int_K (|u . x| + tau u . x)^p dx``.

    The integral is split into cones from the origin over the facets and
    integrated in closed form (divided differences of antiderivatives).
    """
    p = check_exponent(p)
    _check_tau(tau)
    moments = _moment_evaluator(K, p, tau)
    grid = grid or default_grid(K.dim)

    def evaluate(x):
        return np.maximum(moments(x), 0.0) ** (1.0 / p)

    return SampledBody(grid, evaluate(grid.directions), None, evaluate)


def centroid_body(K: Polytope, p: float, grid: DirectionGrid | None = None) -> SampledBody:
    """``Gamma_p K``: ``h(u)^p = (c_{n,p} V(K))^{-1} int_K |u . x|^p dx``."""
    p = check_exponent(p)
    moments = _moment_evaluator(K, p, 0.0)
    scale = calibrate_cnp(K.dim, p).value * K.volume
    grid = grid or default_grid(K.dim)

    def evaluate(x):
        return np.maximum(moments(x) / scale, 0.0) ** (1.0 / p)

    return SampledBody(grid, evaluate(grid.directions), None, evaluate)


def support_point(m: DiscreteMeasure, p: float, e) -> np.ndarray:
    """The point ``v_e`` with ``h(K_e, u) = v_e . u`` for ``h = (C_p m)^{1/p}``.

    ``m`` must be even; then the support set of the body in direction ``e``
    is the single point ``2 (C_p m(e))^{1/p-1} sum_{u_i . e > 0} (e . u_i)^{p-1} m_i u_i``.
    """
    p = check_exponent(p)
    if not m.is_even(rtol=1e-9):
        raise MeasureError("support_point needs an even measure")
    e = np.asarray(e, dtype=float)
    t = m.directions @ e
    ct = float(np.dot(np.abs(t) ** p, m.masses))
    if not ct > 0:
        raise ZeroTransformError("cosine transform vanishes at e")
    pos = t > 0
    w = t[pos] ** (p - 1.0) * m.masses[pos]
    return 2.0 * ct ** (1.0 / p - 1.0) * (w @ m.directions[pos])
