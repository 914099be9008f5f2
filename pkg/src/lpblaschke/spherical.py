"""Discrete models of the unit sphere and of (even) Borel measures on it.

Grids are stored so that ``antipode_index[i] == (i + N/2) % N``: the first
half of the directions are representatives, the second half their exact
negations.  In dimension 2 the grid is additionally closed under the
quarter turn ``(x, y) -> (-y, x)``, which maps index ``k`` to ``k + N/4``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, cKDTree

__all__ = [
    "DirectionGrid",
    "DiscreteMeasure",
    "GridError",
    "MeasureError",
    "build_grid",
    "default_grid",
    "icosphere_resolution",
    "even_part",
    "cell_quadrature",
    "concentration_gap",
    "CONCENTRATION_THRESHOLD",
]

# Below this normalized gap a measure counts as concentrated on a great subsphere.
CONCENTRATION_THRESHOLD = 1e-8
DEFAULT_RESOLUTION = {2: 360, 3: 2562}


class GridError(ValueError):
    pass


class MeasureError(ValueError):
    pass


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """Antipodally closed set of unit directions with quadrature weights."""

    dim: int
    directions: np.ndarray
    weights: np.ndarray
    antipode_index: np.ndarray
    level: int | None = None
    # index tuples of the cells between directions (arcs in the plane,
    # spherical triangles in space); used for cell quadrature
    cells: np.ndarray | None = None

    @property
    def resolution(self) -> int:
        return len(self.directions)

    @property
    def half(self) -> int:
        return len(self.directions) // 2

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def quarter_turn_index(self) -> np.ndarray:
        """Index map ``k -> j`` with ``directions[j] == psi(directions[k])``."""
        if self.dim != 2:
            raise GridError("quarter turn is only defined in dimension 2")
        n = self.resolution
        return (np.arange(n) + n // 4) % n

    def nearest(self, x) -> np.ndarray:
        """Indices of the grid directions closest to the rows of ``x``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.argmax(x @ self.directions.T, axis=1)

    def __repr__(self):
        return f"DirectionGrid(dim={self.dim}, resolution={self.resolution})"


def icosphere_resolution(level: int) -> int:
    return 10 * 4**level + 2


def _circle_grid(resolution):
    if resolution < 4 or resolution % 4:
        raise GridError(
            f"dim-2 resolution must be a positive multiple of 4 (got {resolution})"
        )
    q = resolution // 4
    theta = 2.0 * np.pi * np.arange(q) / resolution
    first = np.column_stack([np.cos(theta), np.sin(theta)])
    # exact quarter turns keep the antipodal and rotational structure bit-exact
    quarters = [first]
    for _ in range(3):
        prev = quarters[-1]
        quarters.append(np.column_stack([-prev[:, 1], prev[:, 0]]))
    directions = np.vstack(quarters)
    weights = np.full(resolution, 2.0 * np.pi / resolution)
    antipode = (np.arange(resolution) + resolution // 2) % resolution
    cells = np.column_stack([np.arange(resolution), (np.arange(resolution) + 1) % resolution])
    return DirectionGrid(2, _frozen(directions), _frozen(weights), _frozen(antipode, int), None, _frozen(cells, int))


def _icosahedron():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    pts = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            pts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    pts = np.array(pts)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    faces = ConvexHull(pts).simplices
    return pts, faces


def _subdivide(vertices, faces):
    vertices = list(map(tuple, vertices))
    cache = {}

    def midpoint(i, j):
        key = (i, j) if i < j else (j, i)
        if key not in cache:
            m = np.add(vertices[i], vertices[j])
            m = m / np.sqrt(m @ m)
            cache[key] = len(vertices)
            vertices.append(tuple(m))
        return cache[key]

    out = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    return np.array(vertices), np.array(out)


def _spherical_triangle_areas(a, b, c):
    num = np.abs(np.einsum("ij,ij->i", a, np.cross(b, c)))
    den = 1.0 + np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", b, c) + np.einsum("ij,ij->i", c, a)
    return 2.0 * np.arctan2(num, den)


def _sphere_grid(resolution):
    level = None
    for lv in range(9):
        if icosphere_resolution(lv) == resolution:
            level = lv
            break
    if level is None:
        raise GridError(
            "dim-3 resolution must be an icosphere vertex count 10*4**L + 2 "
            f"(12, 42, 162, 642, 2562, ...), got {resolution}"
        )
    verts, faces = _icosahedron()
    for _ in range(level):
        verts, faces = _subdivide(verts, faces)
    verts /= np.linalg.norm(verts, axis=1)[:, None]

    tri_area = _spherical_triangle_areas(verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]])
    w = np.zeros(len(verts))
    for k in range(3):
        np.add.at(w, faces[:, k], tri_area / 3.0)

    _, partner = cKDTree(verts).query(-verts)
    if np.any(partner[partner] != np.arange(len(verts))) or np.any(partner == np.arange(len(verts))):
        raise GridError("icosphere is not antipodally closed")
    # representatives: lexicographically positive member of each pair
    reps = [i for i in range(len(verts)) if i < partner[i]]
    rep_dirs = verts[reps]
    rep_w = 0.5 * (w[reps] + w[partner[reps]])
    directions = np.vstack([rep_dirs, -rep_dirs])
    weights = np.concatenate([rep_w, rep_w])
    n = len(directions)
    antipode = (np.arange(n) + n // 2) % n
    new_index = np.empty(len(verts), dtype=int)
    new_index[reps] = np.arange(len(reps))
    new_index[partner[reps]] = np.arange(len(reps)) + len(reps)
    return DirectionGrid(3, _frozen(directions), _frozen(weights), _frozen(antipode, int),
                         level, _frozen(new_index[faces], int))


def build_grid(dim: int, resolution: int) -> DirectionGrid:
    """Build an antipodally symmetric direction grid.

    ``dim == 2``: ``resolution`` equally spaced angles (a multiple of 4).
    ``dim == 3``: an icosahedral subdivision with ``resolution`` vertices,
    weighted by one third of the incident spherical-triangle areas.
    """
    if dim == 2:
        return _circle_grid(int(resolution))
    if dim == 3:
        if resolution < 8:
            raise GridError(f"resolution below minimum (got {resolution})")
        return _sphere_grid(int(resolution))
    raise GridError(f"unsupported dimension {dim}; only 2 and 3 are available")


@functools.lru_cache(maxsize=16)
def default_grid(dim: int, resolution: int | None = None) -> DirectionGrid:
    if resolution is None:
        if dim not in DEFAULT_RESOLUTION:
            raise GridError(f"unsupported dimension {dim}")
        resolution = DEFAULT_RESOLUTION[dim]
    return build_grid(dim, resolution)


@functools.lru_cache(maxsize=8)
def cell_quadrature(grid: DirectionGrid, order: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Finer quadrature nodes obtained by splitting every grid cell.

    Each cell is cut into ``order`` pieces per edge (``order**2`` triangles
    on the 2-sphere) and each piece contributes its centre with its exact
    spherical measure.  Kinked integrands such as ``rho_K^q`` of a polytope
    are resolved much better than by the grid directions alone.  The node
    set is antipodally symmetric.
    """
    if grid.cells is None:
        raise GridError("this grid carries no cell structure")
    order = int(order)
    if order < 1:
        raise GridError("order must be at least 1")
    cells = grid.cells
    d = grid.directions
    if grid.dim == 2:
        a, b = d[cells[:, 0]], d[cells[:, 1]]
        span = np.arccos(np.clip(np.einsum("ij,ij->i", a, b), -1.0, 1.0))
        theta = np.arctan2(a[:, 1], a[:, 0])[:, None] + span[:, None] * ((np.arange(order) + 0.5) / order)
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=-1).reshape(-1, 2)
        return _frozen(pts), _frozen(np.repeat(span / order, order))

    def lift(bary):
        q = bary[0] * d[cells[:, 0]] + bary[1] * d[cells[:, 1]] + bary[2] * d[cells[:, 2]]
        return q / np.linalg.norm(q, axis=1)[:, None]

    pts, wts = [], []
    for i in range(order):
        for j in range(order - i):
            pieces = [((i, j), (i + 1, j), (i, j + 1))]
            if i + j < order - 1:
                pieces.append(((i + 1, j), (i + 1, j + 1), (i, j + 1)))
            for piece in pieces:
                bary = np.array([[x / order, y / order, 1.0 - (x + y) / order] for x, y in piece])
                pts.append(lift(bary.mean(axis=0)))
                wts.append(_spherical_triangle_areas(*(lift(row) for row in bary)))
    return _frozen(np.vstack(pts)), _frozen(np.concatenate(wts))


def _match_antipodes(directions, tol):
    n = len(directions)
    if n == 0:
        return np.zeros(0, dtype=int)
    dist, idx = cKDTree(directions).query(-directions)
    idx = np.where(dist <= tol, idx, -1)
    return idx


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Nonnegative atoms on the sphere.

    ``grid`` is set when the atoms sit on the directions of a
    :class:`DirectionGrid` (one mass per grid direction).  Otherwise the
    directions are arbitrary unit vectors (e.g. exact facet normals).
    ``antipode_index[i]`` is ``-1`` when ``-directions[i]`` carries no atom slot.
    """

    directions: np.ndarray
    masses: np.ndarray
    antipode_index: np.ndarray
    grid: DirectionGrid | None = None
    even: bool = field(default=False)

    @classmethod
    def on_grid(cls, grid: DirectionGrid, masses) -> "DiscreteMeasure":
        masses = np.asarray(masses, dtype=float)
        if masses.shape != (grid.resolution,):
            raise MeasureError("one mass per grid direction is required")
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise MeasureError("masses must be finite and nonnegative")
        even = bool(np.array_equal(masses, masses[grid.antipode_index]))
        return cls(grid.directions, _frozen(masses), grid.antipode_index, grid, even)

    @classmethod
    def from_atoms(cls, directions, masses, tol: float = 1e-9) -> "DiscreteMeasure":
        """Atoms at arbitrary directions; near-duplicates (within ``tol``) are merged."""
        d = np.atleast_2d(np.asarray(directions, dtype=float))
        m = np.asarray(masses, dtype=float).reshape(-1)
        if len(d) != len(m):
            raise MeasureError("directions and masses differ in length")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise MeasureError("masses must be finite and nonnegative")
        norms = np.linalg.norm(d, axis=1)
        if np.any(norms == 0):
            raise MeasureError("zero direction")
        d = d / norms[:, None]
        d, m = _merge_duplicates(d, m, tol)
        anti = _match_antipodes(d, tol)
        even = bool(np.all(anti >= 0) and np.array_equal(m, m[anti]))
        return cls(_frozen(d), _frozen(m), _frozen(anti, int), None, even)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.masses > 0)

    def is_even(self, rtol: float = 0.0) -> bool:
        if np.any(self.antipode_index < 0):
            sup = self.masses > 0
            if np.any(self.antipode_index[sup] < 0):
                return False
        anti = self.antipode_index
        ok = anti >= 0
        diff = np.abs(self.masses[ok] - self.masses[anti[ok]])
        return bool(np.all(diff <= rtol * np.maximum(self.masses[ok], self.masses[anti[ok]])))

    def scaled(self, c: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.directions, _frozen(self.masses * c), self.antipode_index, self.grid, self.even)

    def density(self) -> np.ndarray:
        """Masses divided by quadrature weights (grid measures only)."""
        if self.grid is None:
            raise MeasureError("density is only defined for grid measures")
        return self.masses / self.grid.weights

    def snap(self, grid: DirectionGrid) -> "DiscreteMeasure":
        """Move every atom to its nearest grid direction."""
        if self.grid is grid:
            return self
        out = np.zeros(grid.resolution)
        np.add.at(out, grid.nearest(self.directions), self.masses)
        return DiscreteMeasure.on_grid(grid, out)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        if self.grid is not None and other.grid is self.grid:
            return DiscreteMeasure.on_grid(self.grid, self.masses + other.masses)
        return DiscreteMeasure.from_atoms(
            np.vstack([self.directions, other.directions]),
            np.concatenate([self.masses, other.masses]),
        )

    def to_json(self) -> dict:
        return {
            "dim": int(self.dim),
            "directions": self.directions.tolist(),
            "masses": self.masses.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict, grid: DirectionGrid | None = None) -> "DiscreteMeasure":
        d = np.asarray(obj["directions"], dtype=float)
        if d.ndim != 2 or d.shape[1] != int(obj["dim"]):
            raise MeasureError("direction rows must have length `dim`")
        if grid is not None and d.shape == grid.directions.shape and np.allclose(d, grid.directions, atol=1e-12):
            return cls.on_grid(grid, obj["masses"])
        return cls.from_atoms(d, obj["masses"])


def _merge_duplicates(d, m, tol):
    if len(d) < 2:
        return d, m
    pairs = cKDTree(d).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        return d, m
    parent = np.arange(len(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(len(d))])
    keep = np.unique(roots)
    merged = np.zeros(len(keep))
    pos = np.searchsorted(keep, roots)
    np.add.at(merged, pos, m)
    return d[keep], merged


def even_part(m: DiscreteMeasure) -> DiscreteMeasure:
    """Average ``m`` with its reflection ``u -> -u``; total mass is preserved."""
    if m.grid is not None:
        anti = m.grid.antipode_index
        return DiscreteMeasure.on_grid(m.grid, 0.5 * (m.masses + m.masses[anti]))
    anti = m.antipode_index
    d, masses = m.directions, m.masses
    # one representative per antipodal pair; lone atoms get a zero-mass partner
    reps, partner_mass = [], []
    seen = np.zeros(len(d), dtype=bool)
    for i in range(len(d)):
        if seen[i]:
            continue
        seen[i] = True
        j = anti[i]
        if j >= 0:
            seen[j] = True
            partner_mass.append(masses[j])
        else:
            partner_mass.append(0.0)
        reps.append(i)
    reps = np.array(reps, dtype=int)
    pm = np.array(partner_mass)
    avg = 0.5 * (masses[reps] + pm)
    rd = d[reps]
    directions = np.vstack([rd, -rd])
    new_masses = np.concatenate([avg, avg])
    n = len(directions)
    antipode = (np.arange(n) + n // 2) % n
    return DiscreteMeasure(_frozen(directions), _frozen(new_masses), _frozen(antipode, int), None, True)


def second_moment(m: DiscreteMeasure) -> np.ndarray:
    total = m.total
    if not total > 0:
        raise MeasureError("zero total mass")
    d = m.directions
    return (d * m.masses[:, None]).T @ d / total


def concentration_gap(m: DiscreteMeasure) -> float:
    """Smallest eigenvalue of the normalized second-moment matrix of ``m``."""
    lam = np.linalg.eigvalsh(second_moment(m))
    return float(max(lam[0], 0.0))
