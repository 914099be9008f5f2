import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from conftest import cross, cube, square
from lpblaschke.convexbody import (
    DegenerateBodyError,
    LinearMap,
    OriginNotInteriorError,
    Polytope,
    SingularMapError,
    apply_linear,
    bodies_close,
    hausdorff_distance,
    hull_with_points,
    lp_surface_area_measure,
    mixed_volume_p,
    radial,
    support,
    surface_area_measure,
    valuation_quadruple,
    volume,
)
from lpblaschke.spherical import build_grid, default_grid, icosphere_resolution


def masses_at(measure, direction):
    d = np.asarray(direction, float)
    d = d / np.linalg.norm(d)
    hit = np.linalg.norm(measure.directions - d, axis=1) < 1e-9
    return measure.masses[hit].sum()


def test_support_examples():
    assert support(square(), [1, 1]) == 2
    assert support(cross(), np.array([1, 1]) / math.sqrt(2)) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert support(cube(), [0, 0, 0]) == 0


def test_support_is_positively_homogeneous(rng):
    K = hull_with_points(cube(), rng.normal(size=(5, 3)))
    x = rng.normal(size=(10, 3))
    for lam in (0.25, 3.0, 17.0):
        np.testing.assert_allclose(support(K, lam * x), lam * support(K, x), rtol=1e-15)


def test_radial_examples():
    assert radial(square(), [1, 0]) == pytest.approx(1)
    assert radial(square(), np.array([1, 1]) / math.sqrt(2)) == pytest.approx(math.sqrt(2))
    g = build_grid(3, icosphere_resolution(3))
    ball = Polytope.from_vertices(g.directions)
    u = np.array([[0.3, 0.4, 0.866]])
    u /= np.linalg.norm(u)
    assert radial(ball, u)[0] == pytest.approx(1, abs=5e-3)


def test_radial_requires_interior_origin():
    with pytest.raises(OriginNotInteriorError):
        radial(Polytope.from_vertices([[0, 0], [1, 0], [0, 1]]), [1, 0])


def test_volume_examples():
    assert volume(square()) == pytest.approx(4, rel=1e-14)
    assert volume(cross()) == pytest.approx(2, rel=1e-14)
    assert volume(cube()) == pytest.approx(8, rel=1e-14)


def test_surface_area_measure_examples():
    s = surface_area_measure(square())
    for e in ([1, 0], [0, 1], [-1, 0], [0, -1]):
        assert masses_at(s, e) == pytest.approx(2)
    s = surface_area_measure(cross())
    for e in ([1, 1], [-1, 1], [1, -1], [-1, -1]):
        assert masses_at(s, e) == pytest.approx(math.sqrt(2))
    s = surface_area_measure(cube())
    assert len(s.masses) == 6
    np.testing.assert_allclose(s.masses, 4)


def test_lp_surface_area_measure_examples():
    for p in (1.5, 2.0, 5.0):
        np.testing.assert_allclose(lp_surface_area_measure(square(), p).masses, 2)
    np.testing.assert_allclose(lp_surface_area_measure(cross(), 2.0).masses, 2)


@pytest.mark.parametrize("r,p", [(0.5, 1.5), (2.0, 3.0)])
def test_lp_surface_area_of_ball(r, p):
    g = default_grid(2)
    # vertices half a step off the grid so the edge normals are grid directions
    t = (np.arange(g.resolution) + 0.5) * 2 * math.pi / g.resolution
    ball = Polytope.from_vertices(r * np.column_stack([np.cos(t), np.sin(t)]))
    dens = lp_surface_area_measure(ball, p, snap=True, grid=g).masses / g.weights
    np.testing.assert_allclose(dens, r ** (2 - p), rtol=1e-3)


def test_lp_surface_area_origin_outside():
    with pytest.raises(OriginNotInteriorError):
        lp_surface_area_measure(Polytope.from_vertices(square().vertices + [2, 0]), 2)


def test_apply_linear_examples():
    K = apply_linear(np.eye(2), square())
    assert bodies_close(K, square())
    D = apply_linear(np.diag([2, 0.5]), square())
    assert bodies_close(D, square(2, 0.5))
    assert volume(D) == pytest.approx(4)
    S = apply_linear([[1, 1], [0, 1]], cross())
    assert volume(S) == pytest.approx(2)


def test_singular_map():
    with pytest.raises(SingularMapError):
        LinearMap.from_matrix([[1, 2], [2, 4]])


def test_linear_map_kinds():
    assert LinearMap.rotation2d(0.3).kind == "rotation"
    assert LinearMap.from_matrix([[1, 1], [0, 1]]).kind == "special"
    assert LinearMap.from_matrix(np.diag([2, 1])).kind == "general"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_volume_scales_by_determinant(seed, n):
    rng = np.random.default_rng(seed)
    K = Polytope.from_vertices(rng.normal(size=(12, n)))
    while True:
        a = rng.normal(size=(n, n))
        if 0.25 <= abs(np.linalg.det(a)) <= 4:
            break
    assert volume(apply_linear(a, K)) == pytest.approx(abs(np.linalg.det(a)) * volume(K), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_facet_data_invariants(seed, n):
    rng = np.random.default_rng(seed)
    K = Polytope.from_vertices(rng.normal(size=(15, n)))
    ref = ConvexHull(K.vertices)
    assert np.all(K.areas > 0)
    assert (K.vertices @ K.normals.T <= K.offsets + 1e-9).all()
    assert np.dot(K.offsets, K.areas) / n == pytest.approx(ref.volume, rel=1e-9)
    assert surface_area_measure(K).total == pytest.approx(ref.area, rel=1e-9)
    # each facet is touched by at least n vertices
    touch = np.abs(K.vertices @ K.normals.T - K.offsets) < 1e-9
    assert (touch.sum(axis=0) >= n).all()


def test_halfspace_round_trip(rng):
    for n in (2, 3):
        K = Polytope.from_vertices(rng.normal(size=(20, n)) + 0.1)
        back = Polytope.from_halfspaces(K.normals, K.offsets)
        key = lambda v: np.lexsort(v.T)  # noqa: E731
        np.testing.assert_allclose(back.vertices[key(back.vertices)], K.vertices[key(K.vertices)], atol=1e-9)


def test_json_round_trip_is_exact(rng):
    K = Polytope.from_vertices(rng.normal(size=(20, 3)))
    doc = K.to_json()
    again = Polytope.from_json(doc)
    assert again.to_json() == doc
    H = Polytope.from_json({"dim": 2, "facets": [{"normal": [1, 0], "offset": 1}, {"normal": [-1, 0], "offset": 1},
                                                {"normal": [0, 1], "offset": 1}, {"normal": [0, -1], "offset": 1}]})
    assert volume(H) == pytest.approx(4)


def test_hull_with_points_examples():
    seg = [[-1, 0], [1, 0]]
    assert bodies_close(hull_with_points(seg, [[0, 1]]), cross())
    assert bodies_close(hull_with_points(square(), [[0.2, 0.3]]), square())
    for s in (1.0, 0.1, 0.01):
        assert volume(hull_with_points(seg, [[0, s]])) == pytest.approx(2 * s)
    with pytest.raises(DegenerateBodyError):
        hull_with_points(seg, [[0.5, 0]])


def test_valuation_quadruple_slab():
    K, L, U, I = valuation_quadruple(square(), [0, 1], -0.5, 0.5)
    assert bodies_close(I, square(1, 0.5))
    assert volume(I) == pytest.approx(2)
    assert volume(K) + volume(L) == pytest.approx(volume(U) + volume(I))


def test_valuation_quadruple_degenerate_cut():
    K, L, U, I = valuation_quadruple(square(), [0, 1], -0.5, 1.5)
    assert K is U
    with pytest.raises(ValueError):
        valuation_quadruple(square(), [0, 1], 0.2, 0.5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([-3.0, -1.0, 2.0, 5.0]))
def test_quadruple_radial_max_min(seed, q):
    rng = np.random.default_rng(seed)
    P = Polytope.from_vertices(rng.normal(size=(12, 2)))
    P = hull_with_points(P, [[0.3, 0], [0, 0.3]])
    u = rng.normal(size=2)
    u /= np.linalg.norm(u)
    a, b = -0.5 * support(P, -u), 0.5 * support(P, u)
    K, L, U, I = valuation_quadruple(P, u, a, b)
    g = default_grid(2)
    r = {k: radial(B, g.directions) ** q for k, B in zip("KLUI", (K, L, U, I))}
    scale = max(np.abs(r["K"] + r["L"]).max(), 1.0)
    assert np.abs(r["U"] + r["I"] - r["K"] - r["L"]).max() <= 1e-9 * scale


def test_hausdorff_examples():
    g = default_grid(2)
    B = Polytope.from_vertices(g.directions)
    assert hausdorff_distance(square(), square()) == 0
    assert hausdorff_distance(B, B.scaled(2)) == pytest.approx(1)
    shifted = Polytope.from_vertices(square().vertices + [0.3, 0])
    assert hausdorff_distance(square(), shifted) == pytest.approx(0.3)


def test_mixed_volume_examples():
    assert mixed_volume_p(square(), square(), 2.5) == pytest.approx(4)
    g = build_grid(3, icosphere_resolution(4))
    B = Polytope.from_vertices(g.directions)
    assert mixed_volume_p(B, B, 2.0) == pytest.approx(4 * math.pi / 3, rel=5e-3)
    # four diagonal facets with h_cube = sqrt(2), S_2 mass 2: (1/2) * 4 * 2 * 2
    assert mixed_volume_p(cross(), square(), 2.0) == pytest.approx(8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1.1, 6.0))
def test_mixed_volume_self_is_volume(seed, p):
    rng = np.random.default_rng(seed)
    K = hull_with_points(cube(), rng.normal(size=(4, 3)))
    assert mixed_volume_p(K, K, p) == pytest.approx(volume(K), rel=1e-12)
