"""L_p Blaschke sums, symmetric L_p curvature images and their normalized forms.

The normalized operators solve ``S_p(Z, .) / V(Z) = data``; the plain ones
solve ``S_p(Z, .) = data``.  A normalized body ``Z~`` and its plain
counterpart are related by ``Z = V(Z~)^{1/(p-n)} Z~`` and
``Z~ = V(Z)^{-1/p} Z``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .convexbody import (
    QUARTER_TURN,
    Body,
    OriginNotInteriorError,
    Polytope,
    SampledBody,
    apply_linear,
    dilate,
    lp_surface_area_measure,
    radial,
)
from .minkowski import ExponentError, SolverConfig, _check_p, solve_even, solve_normalized_even
from .spherical import DirectionGrid, DiscreteMeasure, cell_quadrature, default_grid

__all__ = [
    "BodyValuedOperator",
    "NotSymmetricError",
    "body_volume",
    "curvature_data",
    "normalized_blaschke_sum",
    "blaschke_sum",
    "normalized_curvature_image",
    "curvature_image",
    "to_normalized",
    "from_normalized",
    "rotate_quarter",
    "normalized_curvature_operator",
    "curvature_operator",
    "identity_operator",
    "rotated",
]

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"
NO_EQUIVARIANCE = "none"


class NotSymmetricError(ValueError):
    """Blaschke sums are only defined for origin-symmetric bodies."""


@dataclass(frozen=True)
class BodyValuedOperator:
    """A map from polytopes to bodies with its declared transformation laws.

    ``declared_degree`` is the homogeneity degree ``q`` (``Z(tK) = t^q ZK``);
    ``declared_equivariance`` is ``"covariant"`` (``Z(phi K) = det^{(q-1)/n} phi ZK``),
    ``"contravariant"`` (``Z(phi K) = det^{(q+1)/n} phi^{-t} ZK``) or ``"none"``.
    """

    name: str
    apply: Callable[[Polytope], Body]
    declared_degree: float | None = None
    declared_equivariance: str = NO_EQUIVARIANCE
    dim: int | None = None

    def __call__(self, K: Polytope) -> Body:
        return self.apply(K)

    def predicted(self, ZK: Body, phi) -> Body:
        """The image of ``ZK`` that the declared laws predict for ``Z(phi K)``."""
        if self.declared_degree is None or self.declared_equivariance == NO_EQUIVARIANCE:
            raise ValueError(f"{self.name} declares no transformation law")
        m = np.asarray(getattr(phi, "matrix", phi), dtype=float)
        n = m.shape[0]
        det = float(np.linalg.det(m))
        if det <= 0:
            raise ValueError("the transformation laws are stated for positive determinant")
        q = self.declared_degree
        if self.declared_equivariance == COVARIANT:
            return dilate(apply_linear(m, ZK), det ** ((q - 1) / n))
        return dilate(apply_linear(np.linalg.inv(m).T, ZK), det ** ((q + 1) / n))


def body_volume(body: Body) -> float:
    """Volume of a polytope, or of the Wulff shape of a sampled body's support values."""
    if isinstance(body, Polytope):
        return body.volume
    return Polytope.from_halfspaces(body.grid.directions, body.support_values).volume


def _require_symmetric(*bodies):
    for b in bodies:
        if not b.is_symmetric():
            raise NotSymmetricError("Blaschke sums need origin-symmetric bodies")


def normalized_blaschke_sum(K: Polytope, L: Polytope, p: float, cfg: SolverConfig | None = None,
                            return_report: bool = False):
    """Body with ``S_p(., .)/V = S_p(K, .)/V(K) + S_p(L, .)/V(L)``."""
    _require_symmetric(K, L)
    data = lp_surface_area_measure(K, p).scaled(1.0 / K.volume) + lp_surface_area_measure(L, p).scaled(1.0 / L.volume)
    body, report = solve_normalized_even(data, p, cfg)
    return (body, report) if return_report else body


def blaschke_sum(K: Polytope, L: Polytope, p: float, cfg: SolverConfig | None = None, return_report: bool = False):
    """``K #_p L``: the body with ``S_p = S_p(K, .) + S_p(L, .)``; needs ``p != n``."""
    _check_p(p, K.dim, plain=True)
    _require_symmetric(K, L)
    data = lp_surface_area_measure(K, p) + lp_surface_area_measure(L, p)
    return solve_even(data, p, cfg, return_report=return_report)


def curvature_data(K: Polytope, p: float, grid: DirectionGrid | None = None,
                   quadrature: str = "vertex", order: int = 2) -> DiscreteMeasure:
    """Measure with density ``(rho_K^{n+p} + rho_{-K}^{n+p}) / 2``.

    ``quadrature="vertex"`` samples the density at the grid directions and
    gives a grid measure, which is what the solvers take.  ``"cell"`` places
    atoms at the nodes of :func:`~lpblaschke.spherical.cell_quadrature`; it
    is not a grid measure but integrates against smooth kernels far more
    accurately when ``K`` has kinks between grid directions.
    """
    if not K.contains_origin_interior:
        raise OriginNotInteriorError("curvature images need the origin in the interior")
    grid = grid or default_grid(K.dim)
    q = K.dim + p
    if quadrature == "vertex":
        r = radial(K, grid.directions) ** q
        # r[anti] is rho_K(-u) = rho_{-K}(u); the sum is exactly even
        return DiscreteMeasure.on_grid(grid, 0.5 * (r + r[grid.antipode_index]) * grid.weights)
    if quadrature == "cell":
        pts, w = cell_quadrature(grid, order)
        dens = 0.5 * (radial(K, pts) ** q + radial(K, -pts) ** q)
        return DiscreteMeasure.from_atoms(pts, dens * w)
    raise ValueError(f"unknown quadrature {quadrature!r}")


def normalized_curvature_image(K: Polytope, p: float, grid: DirectionGrid | None = None,
                               cfg: SolverConfig | None = None, return_report: bool = False):
    """``Lambda~_c^p K``: ``S_p(., .)/V`` has density ``(rho_K^{n+p} + rho_{-K}^{n+p})/2``."""
    body, report = solve_normalized_even(curvature_data(K, p, grid), p, cfg)
    return (body, report) if return_report else body


def curvature_image(K: Polytope, p: float, grid: DirectionGrid | None = None,
                    cfg: SolverConfig | None = None, return_report: bool = False):
    """``Lambda_c^p K = V(Lambda~)^{1/(p-n)} Lambda~``; needs ``p != n``."""
    n = K.dim
    _check_p(p, n, plain=True)
    kt, report = normalized_curvature_image(K, p, grid, cfg, return_report=True)
    body = kt.scaled(kt.volume ** (1.0 / (p - n)))
    return (body, report) if return_report else body


def to_normalized(Z: BodyValuedOperator, p: float) -> BodyValuedOperator:
    """``K -> V(ZK)^{-1/p} ZK``; a degree ``q`` operator becomes degree ``q (p-n)/p``."""
    p = float(p)

    def apply(K):
        zk = Z(K)
        return dilate(zk, body_volume(zk) ** (-1.0 / p))

    n = Z.dim
    degree = None
    if Z.declared_degree is not None and n is not None:
        degree = Z.declared_degree * (p - n) / p
    return BodyValuedOperator(f"normalized({Z.name})", apply, degree, Z.declared_equivariance, n)


def from_normalized(Zt: BodyValuedOperator, p: float) -> BodyValuedOperator:
    """``K -> V(Z~K)^{1/(p-n)} Z~K``; a degree ``q`` operator becomes degree ``q p/(p-n)``."""
    p = float(p)
    n = Zt.dim
    if n is not None and abs(p - n) <= 1e-6:
        raise ExponentError("no plain operator exists for p = n")

    def apply(K):
        zk = Zt(K)
        return dilate(zk, body_volume(zk) ** (1.0 / (p - K.dim)))

    degree = None
    if Zt.declared_degree is not None and n is not None:
        degree = Zt.declared_degree * p / (p - n)
    return BodyValuedOperator(f"plain({Zt.name})", apply, degree, Zt.declared_equivariance, n)


def rotate_quarter(body: Body) -> Body:
    """Image under the planar quarter turn ``(x, y) -> (-y, x)``."""
    if body.dim != 2:
        raise ValueError("the quarter turn is only defined in the plane")
    if isinstance(body, Polytope):
        return apply_linear(QUARTER_TURN, body)
    # h_{psi K}(psi u) = h_K(u): move each value a quarter turn forward
    values = np.empty_like(body.support_values)
    values[body.grid.quarter_turn_index()] = body.support_values
    ev = body.evaluator
    return SampledBody(
        body.grid, values, None,
        (lambda x, _e=ev: _e(np.atleast_2d(x) @ QUARTER_TURN)) if ev is not None else None,
    )


# ---------------------------------------------------------------------------
# operator descriptors


def normalized_curvature_operator(dim: int, p: float, grid: DirectionGrid | None = None,
                                  cfg: SolverConfig | None = None) -> BodyValuedOperator:
    grid = grid or default_grid(dim)
    return BodyValuedOperator(
        f"Lambda~_c^{p:g}",
        lambda K: normalized_curvature_image(K, p, grid, cfg),
        -dim / p - 1.0,
        CONTRAVARIANT,
        dim,
    )


def curvature_operator(dim: int, p: float, grid: DirectionGrid | None = None,
                       cfg: SolverConfig | None = None) -> BodyValuedOperator:
    _check_p(p, dim, plain=True)
    grid = grid or default_grid(dim)
    return BodyValuedOperator(
        f"Lambda_c^{p:g}",
        lambda K: curvature_image(K, p, grid, cfg),
        (-dim / p - 1.0) * p / (p - dim),
        CONTRAVARIANT,
        dim,
    )


def rotated(Z: BodyValuedOperator) -> BodyValuedOperator:
    """``psi_{pi/2} Z``; turns a planar contravariant operator into a covariant one."""
    if Z.dim != 2:
        raise ValueError("the quarter turn is only defined in the plane")
    flip = {COVARIANT: CONTRAVARIANT, CONTRAVARIANT: COVARIANT}.get(Z.declared_equivariance, NO_EQUIVARIANCE)
    return replace(Z, name=f"psi({Z.name})", apply=lambda K: rotate_quarter(Z(K)), declared_equivariance=flip)


def identity_operator(dim: int) -> BodyValuedOperator:
    return BodyValuedOperator("identity", lambda K: K, 1.0, COVARIANT, dim)
