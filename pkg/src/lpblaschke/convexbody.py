"""Polytopes, sampled bodies and linear maps.

Polytopes keep both representations: the extreme points and the facets
``(normal, offset, area)``.  Halfspace systems are intersected through
polarity: with the origin in the interior, the facets of
``{x : u_i . x <= h_i}`` correspond to the vertices of ``conv{u_i / h_i}``.
The same dual hull yields the facet adjacency used for the exact facet
areas and for the Hessian of the volume with respect to the offsets.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import sparse
from scipy.spatial import ConvexHull, HalfspaceIntersection, cKDTree
from scipy.spatial import QhullError
from scipy.spatial.distance import cdist

from .spherical import DirectionGrid, DiscreteMeasure, default_grid

__all__ = [
    "DegenerateBodyError",
    "OriginNotInteriorError",
    "SingularMapError",
    "LinearMap",
    "Polytope",
    "SampledBody",
    "HalfspaceGeometry",
    "halfspace_geometry",
    "support",
    "support_on_grid",
    "radial",
    "volume",
    "surface_area_measure",
    "lp_surface_area_measure",
    "apply_linear",
    "dilate",
    "hull_with_points",
    "valuation_quadruple",
    "hausdorff_distance",
    "relative_hausdorff",
    "bodies_close",
    "mixed_volume_p",
]


class DegenerateBodyError(ValueError):
    pass


class OriginNotInteriorError(ValueError):
    pass


class SingularMapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear maps


@dataclass(frozen=True, eq=False)
class LinearMap:
    matrix: np.ndarray
    det: float
    kind: str  # "general" | "special" | "rotation"

    @classmethod
    def from_matrix(cls, matrix) -> "LinearMap":
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("linear map must be a square matrix")
        det = float(np.linalg.det(m))
        if det == 0.0 or not np.isfinite(det):
            raise SingularMapError("singular linear map")
        n = m.shape[0]
        if np.abs(m.T @ m - np.eye(n)).max() <= 1e-12 and det > 0:
            kind = "rotation"
        elif abs(det - 1.0) <= 1e-12:
            kind = "special"
        else:
            kind = "general"
        m.setflags(write=False)
        return cls(m, det, kind)

    @classmethod
    def rotation2d(cls, angle: float) -> "LinearMap":
        c, s = np.cos(angle), np.sin(angle)
        return cls.from_matrix([[c, -s], [s, c]])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @functools.cached_property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    @functools.cached_property
    def inverse_transpose(self) -> np.ndarray:
        return self.inverse.T

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return LinearMap.from_matrix(self.matrix @ other.matrix)
        return self.matrix @ other


QUARTER_TURN = np.array([[0.0, -1.0], [1.0, 0.0]])


# ---------------------------------------------------------------------------
# halfspace geometry


@dataclass(frozen=True, eq=False)
class HalfspaceGeometry:
    """Geometry of ``{x : normals[i] . x <= offsets[i]}`` indexed by input facet.

    ``edge_i, edge_j, edge_len`` list adjacent facet pairs with the
    (n-2)-dimensional measure of their common face (1 in the plane).
    """

    normals: np.ndarray
    offsets: np.ndarray
    areas: np.ndarray
    volume: float
    vertices: np.ndarray
    edge_i: np.ndarray
    edge_j: np.ndarray
    edge_len: np.ndarray
    edge_sin: np.ndarray
    edge_cos: np.ndarray

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def volume_hessian(self) -> sparse.csr_matrix:
        """Second derivatives of the volume in the offsets (sparse, symmetric)."""
        m = len(self.offsets)
        off = self.edge_len / self.edge_sin
        cot = self.edge_len * self.edge_cos / self.edge_sin
        diag = np.zeros(m)
        np.add.at(diag, self.edge_i, -cot)
        np.add.at(diag, self.edge_j, -cot)
        rows = np.concatenate([self.edge_i, self.edge_j, np.arange(m)])
        cols = np.concatenate([self.edge_j, self.edge_i, np.arange(m)])
        vals = np.concatenate([off, off, diag])
        return sparse.csr_matrix((vals, (rows, cols)), shape=(m, m))


def _dedupe_points(x, tol):
    if len(x) < 2:
        return x
    pairs = cKDTree(x).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        return x
    drop = np.zeros(len(x), dtype=bool)
    # keep the lower index of every close pair
    drop[pairs.max(axis=1)] = True
    return x[~drop]


def halfspace_geometry(normals, offsets) -> HalfspaceGeometry:
    """Intersect halfspaces whose offsets are all positive (origin interior)."""
    u = np.asarray(normals, dtype=float)
    h = np.asarray(offsets, dtype=float)
    n = u.shape[1]
    if np.any(h <= 0):
        raise OriginNotInteriorError("all offsets must be positive for the polar construction")
    dual = u / h[:, None]
    try:
        hull = ConvexHull(dual)
    except QhullError as exc:
        raise DegenerateBodyError(f"halfspace system is unbounded or degenerate: {exc}") from None
    a, b = hull.equations[:, :n], hull.equations[:, n]
    if np.any(b >= -1e-14 * np.abs(dual).max()):
        raise DegenerateBodyError("normals do not positively span space; intersection is unbounded")
    x = -a / b[:, None]
    simp = hull.simplices

    if n == 2:
        ei, ej = simp[:, 0], simp[:, 1]
        elen = np.ones(len(simp))
    elif n == 3:
        ei, ej, elen = [], [], []
        nb = hull.neighbors
        for k in range(3):
            t = np.arange(len(simp))
            other = nb[:, k]
            keep = t < other
            ei.append(simp[keep, (k + 1) % 3])
            ej.append(simp[keep, (k + 2) % 3])
            elen.append(np.linalg.norm(x[t[keep]] - x[other[keep]], axis=1))
        ei, ej, elen = np.concatenate(ei), np.concatenate(ej), np.concatenate(elen)
    else:
        raise DegenerateBodyError("only dimensions 2 and 3 are supported")

    ui, uj = u[ei], u[ej]
    cos = np.einsum("ij,ij->i", ui, uj)
    if n == 2:
        sin = np.abs(ui[:, 0] * uj[:, 1] - ui[:, 1] * uj[:, 0])
    else:
        sin = np.linalg.norm(np.cross(ui, uj), axis=1)
    good = sin > 1e-15
    ei, ej, elen, cos, sin = ei[good], ej[good], elen[good], cos[good], sin[good]
    hi, hj = h[ei], h[ej]
    areas = np.zeros(len(h))
    np.add.at(areas, ei, elen * (hj - hi * cos) / sin)
    np.add.at(areas, ej, elen * (hi - hj * cos) / sin)
    areas /= n - 1
    areas = np.maximum(areas, 0.0)
    vol = float(np.dot(h, areas) / n)
    scale = np.abs(x).max()
    verts = _dedupe_points(x, 1e-10 * scale)
    return HalfspaceGeometry(u, h, areas, vol, verts, ei, ej, elen, sin, cos)


# ---------------------------------------------------------------------------
# polytopes


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _merge_coplanar(hull, scale):
    """Union-find over neighbouring hull simplices that share a hyperplane."""
    eq = hull.equations
    n_s = len(eq)
    parent = np.arange(n_s)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in range(n_s):
        for t in hull.neighbors[s]:
            if t < s:
                continue
            if (np.abs(eq[s, :-1] - eq[t, :-1]).max() <= 1e-9
                    and abs(eq[s, -1] - eq[t, -1]) <= 1e-9 * scale):
                rs, rt = find(s), find(t)
                if rs != rt:
                    parent[max(rs, rt)] = min(rs, rt)
    return np.array([find(i) for i in range(n_s)])


@dataclass(frozen=True, eq=False)
class Polytope:
    """Full-dimensional convex polytope with cached facet areas."""

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    areas: np.ndarray

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        n = pts.shape[1]
        if n not in (2, 3):
            raise DegenerateBodyError("only dimensions 2 and 3 are supported")
        if len(pts) <= n:
            raise DegenerateBodyError("too few points for a full-dimensional hull")
        try:
            hull = ConvexHull(pts)
        except QhullError:
            raise DegenerateBodyError("points do not span a full-dimensional body") from None
        scale = np.abs(pts).max()
        groups = _merge_coplanar(hull, scale)
        simp = pts[hull.simplices]
        if n == 2:
            meas = np.linalg.norm(simp[:, 1] - simp[:, 0], axis=1)
        else:
            meas = 0.5 * np.linalg.norm(np.cross(simp[:, 1] - simp[:, 0], simp[:, 2] - simp[:, 0]), axis=1)
        keys = np.unique(groups)
        normals = hull.equations[keys, :n]
        normals = normals / np.linalg.norm(normals, axis=1)[:, None]
        verts = pts[hull.vertices]
        offsets = (verts @ normals.T).max(axis=0)
        areas = np.zeros(len(keys))
        np.add.at(areas, np.searchsorted(keys, groups), meas)
        if hull.volume <= 1e-14 * scale**n:
            raise DegenerateBodyError("hull has zero volume")
        return cls(_frozen(verts), _frozen(normals), _frozen(offsets), _frozen(areas))

    @classmethod
    def from_halfspaces(cls, normals, offsets) -> "Polytope":
        u = np.atleast_2d(np.asarray(normals, dtype=float))
        h = np.asarray(offsets, dtype=float).reshape(-1)
        norms = np.linalg.norm(u, axis=1)
        u, h = u / norms[:, None], h / norms
        if np.all(h > 0):
            geo = halfspace_geometry(u, h)
            scale = np.abs(geo.vertices).max()
            keep = geo.areas > 1e-12 * scale ** (u.shape[1] - 1)
            if geo.volume <= 0:
                raise DegenerateBodyError("empty interior")
            return cls(_frozen(geo.vertices), _frozen(u[keep]), _frozen(h[keep]), _frozen(geo.areas[keep]))
        return cls.from_vertices(_halfspace_vertices_general(u, h))

    @classmethod
    def from_json(cls, obj: dict) -> "Polytope":
        """Read ``{dim, vertices}``, ``{dim, facets}`` or the full form written by :meth:`to_json`.

        The full form (vertices plus facets with areas) is taken as is after
        validation, so writing it back reproduces the input exactly.
        """
        dim = int(obj["dim"])
        if "vertices" in obj and "facets" in obj and all("area" in f for f in obj["facets"]):
            return cls._from_full(dim, obj)
        if "vertices" in obj:
            v = np.asarray(obj["vertices"], dtype=float)
            if v.ndim != 2 or v.shape[1] != dim:
                raise ValueError("vertex rows must have length `dim`")
            return cls.from_vertices(v)
        if "facets" in obj:
            normals = np.array([f["normal"] for f in obj["facets"]], dtype=float)
            offsets = np.array([f["offset"] for f in obj["facets"]], dtype=float)
            if normals.shape[1] != dim:
                raise ValueError("facet normals must have length `dim`")
            return cls.from_halfspaces(normals, offsets)
        raise ValueError("body JSON needs `vertices` or `facets`")

    @classmethod
    def _from_full(cls, dim, obj):
        v = np.asarray(obj["vertices"], dtype=float)
        u = np.array([f["normal"] for f in obj["facets"]], dtype=float)
        h = np.array([f["offset"] for f in obj["facets"]], dtype=float)
        a = np.array([f["area"] for f in obj["facets"]], dtype=float)
        if v.ndim != 2 or v.shape[1] != dim or u.ndim != 2 or u.shape[1] != dim:
            raise ValueError("vertex and normal rows must have length `dim`")
        scale = max(np.abs(v).max(), 1.0)
        if np.abs(np.linalg.norm(u, axis=1) - 1).max() > 1e-9:
            raise DegenerateBodyError("facet normals must be unit vectors")
        if (v @ u.T - h).max() > 1e-9 * scale:
            raise DegenerateBodyError("vertices violate the facet inequalities")
        if np.any(a <= 0) or np.dot(h, a) <= 0:
            raise DegenerateBodyError("facet areas must be positive and the volume nonzero")
        return cls(_frozen(v), _frozen(u), _frozen(h), _frozen(a))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": self.vertices.tolist(),
            "facets": [
                {"normal": u.tolist(), "offset": float(h), "area": float(a)}
                for u, h, a in zip(self.normals, self.offsets, self.areas)
            ],
            "volume": self.volume,
        }

    # -- derived quantities -------------------------------------------------

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def volume(self) -> float:
        return float(np.dot(self.offsets, self.areas) / self.dim)

    @functools.cached_property
    def diameter(self) -> float:
        v = self.vertices
        step = max(1, 2_000_000 // len(v))
        return float(max(cdist(v[s:s + step], v).max() for s in range(0, len(v), step)))

    @property
    def contains_origin_interior(self) -> bool:
        return bool(self.offsets.min() > 1e-12 * max(self.diameter, 1e-300))

    def is_symmetric(self, tol: float = 1e-9) -> bool:
        """Origin symmetry, tested on the facet normals of ``K`` and ``-K``."""
        dirs = np.vstack([self.normals, -self.normals])
        gap = np.abs(support(self, dirs) - support(self, -dirs))
        return bool(gap.max() <= tol * max(self.diameter, 1.0))

    def support(self, x) -> np.ndarray:
        return support(self, x)

    def scaled(self, t: float) -> "Polytope":
        return dilate(self, t)

    def __neg__(self) -> "Polytope":
        return Polytope(_frozen(-self.vertices), _frozen(-self.normals), self.offsets, self.areas)

    @functools.cached_property
    def facet_simplices(self):
        """Simplicial decomposition of each facet.

        Returns ``(simplices, owner)``: ``simplices`` has shape ``(T, n, n)``
        (segments in the plane, triangles in space); ``owner[t]`` is the facet.
        """
        n = self.dim
        v = self.vertices
        tol = 1e-9 * max(np.abs(v).max(), 1e-300)
        inc = np.abs(v @ self.normals.T - self.offsets[None, :]) <= tol
        simplices, owner = [], []
        for f in range(len(self.offsets)):
            pts = v[inc[:, f]]
            u = self.normals[f]
            if n == 2:
                t = np.array([-u[1], u[0]])
                s = pts @ t
                simplices.append(np.stack([pts[np.argmin(s)], pts[np.argmax(s)]]))
                owner.append(f)
                continue
            c = pts.mean(axis=0)
            e1 = pts[np.argmax(np.linalg.norm(pts - c, axis=1))] - c
            e1 -= (e1 @ u) * u
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(u, e1)
            ang = np.arctan2((pts - c) @ e2, (pts - c) @ e1)
            ring = pts[np.argsort(ang)]
            for k in range(1, len(ring) - 1):
                simplices.append(np.stack([ring[0], ring[k], ring[k + 1]]))
                owner.append(f)
        return np.array(simplices), np.array(owner, dtype=int)

    def __repr__(self):
        return (f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, "
                f"facets={len(self.offsets)}, volume={self.volume:.6g})")


def _halfspace_vertices_general(u, h):
    from scipy.optimize import linprog

    n = u.shape[1]
    # Chebyshev centre: maximise r subject to u_i . c + r <= h_i
    res = linprog(
        np.r_[np.zeros(n), -1.0],
        A_ub=np.hstack([u, np.ones((len(u), 1))]),
        b_ub=h,
        bounds=[(None, None)] * n + [(0, None)],
        method="highs",
    )
    if res.status != 0 or res.x[-1] <= 1e-12:
        raise DegenerateBodyError("halfspace intersection has empty interior")
    c = res.x[:n]
    hs = HalfspaceIntersection(np.hstack([u, -h[:, None]]), c)
    return hs.intersections


# ---------------------------------------------------------------------------
# sampled bodies


@dataclass(frozen=True, eq=False)
class SampledBody:
    """Support (and optionally radial) samples on a direction grid.

    ``evaluator`` optionally computes the exact support function at
    arbitrary vectors (transform outputs carry their defining formula).
    """

    grid: DirectionGrid
    support_values: np.ndarray
    radial_values: np.ndarray | None = None
    evaluator: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def dim(self) -> int:
        return self.grid.dim

    def support(self, x) -> np.ndarray:
        return support(self, x)

    def scaled(self, t: float) -> "SampledBody":
        return dilate(self, t)

    def to_json(self) -> dict:
        return {
            "dim": self.grid.dim,
            "resolution": self.grid.resolution,
            "support_values": self.support_values.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SampledBody":
        grid = default_grid(int(obj["dim"]), int(obj["resolution"]))
        h = np.asarray(obj["support_values"], dtype=float)
        if h.shape != (grid.resolution,):
            raise ValueError("need one support value per grid direction")
        return cls(grid, h)


Body = Union[Polytope, SampledBody]


# ---------------------------------------------------------------------------
# operations


def support(body: Body, x) -> np.ndarray | float:
    """Support function ``h(body, x)``; vectorized over rows of ``x``."""
    xa = np.asarray(x, dtype=float)
    single = xa.ndim == 1
    xa = np.atleast_2d(xa)
    if isinstance(body, Polytope):
        out = (xa @ body.vertices.T).max(axis=1)
    elif isinstance(body, SampledBody):
        if body.evaluator is not None:
            out = np.asarray(body.evaluator(xa), dtype=float)
        else:
            norms = np.linalg.norm(xa, axis=1)
            out = np.zeros(len(xa))
            nz = norms > 0
            idx = body.grid.nearest(xa[nz])
            out[nz] = body.support_values[idx] * norms[nz]
    else:
        raise TypeError(f"not a body: {type(body).__name__}")
    return float(out[0]) if single else out


def support_on_grid(body: Body, grid: DirectionGrid) -> np.ndarray:
    if isinstance(body, SampledBody) and body.grid is grid:
        return body.support_values
    return support(body, grid.directions)


def radial(body: Polytope, u) -> np.ndarray | float:
    """Radial function of a polytope with the origin in its interior."""
    if not body.contains_origin_interior:
        raise OriginNotInteriorError("radial function needs the origin in the interior")
    ua = np.asarray(u, dtype=float)
    single = ua.ndim == 1
    ua = np.atleast_2d(ua)
    # rho_K(u) = 1 / h_{K polar}(u); the polar has vertices u_i / h_i
    polar = (body.normals / body.offsets[:, None]).T
    out = np.empty(len(ua))
    step = max(1, 4_000_000 // max(len(body.offsets), 1))
    for s in range(0, len(ua), step):
        out[s:s + step] = 1.0 / (ua[s:s + step] @ polar).max(axis=1)
    return float(out[0]) if single else out


def volume(body: Polytope) -> float:
    v = body.volume
    if not v > 0:
        raise DegenerateBodyError("degenerate body")
    return v


def surface_area_measure(body: Polytope, snap: bool = False, grid: DirectionGrid | None = None) -> DiscreteMeasure:
    """Atoms of mass ``A_i`` at the outer facet normals (optionally snapped to a grid)."""
    m = DiscreteMeasure.from_atoms(body.normals, body.areas)
    if snap:
        return m.snap(grid if grid is not None else default_grid(body.dim))
    return m


def lp_surface_area_measure(body: Polytope, p: float, snap: bool = False,
                            grid: DirectionGrid | None = None) -> DiscreteMeasure:
    """``S_p(K, .) = h_K^{1-p} S(K, .)``: atoms ``h_i^{1-p} A_i`` at the facet normals."""
    if not body.contains_origin_interior:
        raise OriginNotInteriorError("S_p needs the origin in the interior (some h_i <= 0)")
    m = DiscreteMeasure.from_atoms(body.normals, body.offsets ** (1.0 - p) * body.areas)
    if snap:
        return m.snap(grid if grid is not None else default_grid(body.dim))
    return m


def apply_linear(phi: LinearMap | np.ndarray, body: Body) -> Body:
    """Image ``phi K``; facet data follow by Nanson's formula (no re-hull)."""
    if not isinstance(phi, LinearMap):
        phi = LinearMap.from_matrix(phi)
    if isinstance(body, SampledBody):
        m = phi.matrix
        return SampledBody(
            body.grid,
            np.asarray(support(body, body.grid.directions @ m), dtype=float),
            None,
            (lambda x, _b=body, _m=m: support(_b, np.atleast_2d(x) @ _m)) if body.evaluator else None,
        )
    a = phi.matrix
    n_raw = body.normals @ phi.inverse  # rows: phi^{-t} u_i
    scale = np.linalg.norm(n_raw, axis=1)
    return Polytope(
        _frozen(body.vertices @ a.T),
        _frozen(n_raw / scale[:, None]),
        _frozen(body.offsets / scale),
        _frozen(abs(phi.det) * scale * body.areas),
    )


def dilate(body: Body, t: float) -> Body:
    if t <= 0:
        raise ValueError("dilation factor must be positive")
    if isinstance(body, SampledBody):
        ev = body.evaluator
        return SampledBody(
            body.grid,
            body.support_values * t,
            None if body.radial_values is None else body.radial_values * t,
            (lambda x, _e=ev: t * _e(x)) if ev is not None else None,
        )
    n = body.dim
    return Polytope(_frozen(body.vertices * t), body.normals, _frozen(body.offsets * t),
                    _frozen(body.areas * t ** (n - 1)))


def hull_with_points(seed, points) -> Polytope:
    """``[seed, +-x_1, ..., +-x_m]``: hull of the seed and the points with both signs."""
    base = seed.vertices if isinstance(seed, Polytope) else np.atleast_2d(np.asarray(seed, dtype=float))
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return Polytope.from_vertices(np.vstack([base, pts, -pts]))


def valuation_quadruple(P: Polytope, u, a: float, b: float):
    """Split ``P`` by the slab ``a <= x.u <= b``.

    Returns ``(K, L, U, I)`` with ``K = P cap {x.u <= b}``,
    ``L = P cap {x.u >= a}``, ``U = K cup L = P`` and ``I = K cap L``.
    """
    if not (a < 0 < b):
        raise ValueError("cuts must satisfy a < 0 < b so the origin stays interior")
    if not P.contains_origin_interior:
        raise OriginNotInteriorError("P must contain the origin in its interior")
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    hi, lo = support(P, u), -support(P, -u)
    if b <= lo or a >= hi:
        raise ValueError("cut outside body")

    def clip(extra_n, extra_h):
        if not extra_n:
            return P
        return Polytope.from_halfspaces(np.vstack([P.normals] + extra_n), np.concatenate([P.offsets, extra_h]))

    k_n, k_h = ([u], [b]) if b < hi else ([], [])
    l_n, l_h = ([-u], [-a]) if a > lo else ([], [])
    K = clip(k_n, k_h)
    L = clip(l_n, l_h)
    I = clip(k_n + l_n, k_h + l_h)
    return K, L, P, I


def hausdorff_distance(A: Body, B: Body, grid: DirectionGrid | None = None) -> float:
    """``max_u |h_A(u) - h_B(u)|`` over the grid directions (a lower bound of the sup)."""
    if grid is None:
        grid = next((x.grid for x in (A, B) if isinstance(x, SampledBody)), None) or default_grid(A.dim)
    return float(np.abs(support_on_grid(A, grid) - support_on_grid(B, grid)).max())


def relative_hausdorff(A: Body, B: Body, grid: DirectionGrid | None = None) -> float:
    """Hausdorff distance divided by the largest support value of ``B``."""
    if grid is None:
        grid = next((x.grid for x in (A, B) if isinstance(x, SampledBody)), None) or default_grid(A.dim)
    hb = support_on_grid(B, grid)
    return float(np.abs(support_on_grid(A, grid) - hb).max() / np.abs(hb).max())


def bodies_close(A: Body, B: Body, tol: float = 1e-6, grid: DirectionGrid | None = None) -> bool:
    if grid is None:
        grid = default_grid(A.dim)
    hb = support_on_grid(B, grid)
    return hausdorff_distance(A, B, grid) <= tol * (1.0 + np.abs(hb).max())


def mixed_volume_p(K: Polytope, L: Body, p: float) -> float:
    """``V_p(K, L) = (1/n) sum_i h_L(u_i)^p h_i^{1-p} A_i`` over the facets of ``K``."""
    if not K.contains_origin_interior:
        raise OriginNotInteriorError("V_p needs the origin in the interior of K")
    hl = support(L, K.normals)
    return float(np.dot(hl ** p, K.offsets ** (1.0 - p) * K.areas) / K.dim)
