import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cross, cube, square
from lpblaschke.convexbody import (
    OriginNotInteriorError,
    Polytope,
    apply_linear,
    hull_with_points,
    lp_surface_area_measure,
    radial,
)
from lpblaschke.lptransform import (
    ZeroTransformError,
    calibrate_cnp,
    centroid_body,
    cnp_quadrature,
    cosine_transform,
    lp_zonoid,
    moment_body,
    projection_body,
    projection_body_boundary,
    support_point,
)
from lpblaschke.lptransform import _warn_even
from lpblaschke.verify import ball_polytope
from lpblaschke.spherical import DiscreteMeasure, build_grid, cell_quadrature, default_grid, icosphere_resolution


def moment(K, u, p, tau):
    return moment_body(K, p, tau).evaluator(np.asarray(u))[0] ** p


# -- frozen oracle values ----------------------------------------------------


def test_moments_match_slice_integration(oracle_values, oracle_bodies):
    worst = 0.0
    for rec in oracle_values["moments"]:
        got = moment(oracle_bodies[rec["body"]], rec["u"], rec["p"], rec["tau"])
        worst = max(worst, abs(got - rec["value"]) / rec["value"])
    assert worst < 1e-10


def test_one_sided_moments(oracle_values, oracle_bodies):
    for rec in oracle_values["one_sided"]:
        got = moment(oracle_bodies[rec["body"]], rec["u"], rec["p"], 1.0)
        assert got == pytest.approx(rec["value"], rel=1e-10)


def test_cnp_matches_polar_integration(oracle_values):
    for rec in oracle_values["cnp"]:
        assert calibrate_cnp(rec["dim"], rec["p"]).value == pytest.approx(rec["value"], rel=1e-9)


def test_curvature_transform_2d(oracle_values, oracle_bodies):
    g = default_grid(2)
    pts, w = cell_quadrature(g, 4)
    for rec in oracle_values["curvature_transform"]:
        K, p = oracle_bodies[rec["body"]], rec["p"]
        m = DiscreteMeasure.from_atoms(pts, radial(K, pts) ** (2 + p) * w)
        x = [math.cos(rec["alpha"]), math.sin(rec["alpha"])]
        assert cosine_transform(m, p, x) == pytest.approx(rec["value"], rel=1e-4)


# -- cosine transform ----------------------------------------------------------


def test_cosine_transform_examples():
    m = DiscreteMeasure.from_atoms([[0, 1], [0, -1]], [1, 1])
    assert cosine_transform(m, 2.5, [1, 0]) == 0
    assert cosine_transform(m, 2.5, [0, 1]) == pytest.approx(2)
    half = DiscreteMeasure.from_atoms([[1, 0], [-1, 0], [0, 1], [0, -1]], [0.5] * 4)
    for p in (1.2, 3.0, 7.5):
        assert cosine_transform(half, p, [1, 0]) == pytest.approx(1)


def test_cosine_transform_vectorized(rng):
    m = DiscreteMeasure.from_atoms(rng.normal(size=(6, 3)), rng.uniform(size=6))
    X = rng.normal(size=(4, 3))
    rows = cosine_transform(m, 1.7, X)
    assert rows.shape == (4,)
    assert rows[2] == pytest.approx(cosine_transform(m, 1.7, X[2]))


def test_exponent_must_exceed_one():
    m = DiscreteMeasure.from_atoms([[1, 0]], [1])
    with pytest.raises(ValueError):
        cosine_transform(m, 1.0, [1, 0])


def test_even_exponent_warns(caplog):
    m = DiscreteMeasure.from_atoms([[1, 0]], [1])
    _warn_even.cache_clear()
    with caplog.at_level(logging.WARNING, logger="lpblaschke"):
        cosine_transform(m, 4.0, [1, 0])
        cosine_transform(m, 4.0, [0, 1])
        cosine_transform(m, 3.0, [0, 1])
    hits = [r for r in caplog.records if "even integer" in r.getMessage()]
    assert len(hits) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1.1, 5.0), st.sampled_from([2, 3]))
def test_covariance_with_exact_normals(seed, p, n):
    rng = np.random.default_rng(seed)
    K = hull_with_points(np.eye(n), rng.normal(size=(6, n)))
    a = np.eye(n) + 0.4 * rng.normal(size=(n, n))
    if abs(np.linalg.det(a)) < 0.2:
        a = np.eye(n)
    x = rng.normal(size=n)
    lhs = cosine_transform(lp_surface_area_measure(apply_linear(a, K), p), p, x)
    rhs = abs(np.linalg.det(a)) * cosine_transform(lp_surface_area_measure(K, p), p, np.linalg.solve(a, x))
    assert lhs == pytest.approx(rhs, rel=1e-9)


# -- projection bodies -------------------------------------------------------------


def test_projection_body_of_square_is_disc():
    np.testing.assert_allclose(projection_body(square(), 2.0).support_values, 2.0, rtol=1e-12)


def test_projection_body_of_ball_is_round():
    g = build_grid(3, icosphere_resolution(3))
    B = Polytope.from_vertices(g.directions)
    h = projection_body(B, 2.5, grid=g).support_values
    # the polytope only approximates the ball; the spread tracks its facet pattern
    assert h.std() / h.mean() < 2e-3
    t = (np.arange(360) + 0.5) * math.pi / 180
    disc = Polytope.from_vertices(np.column_stack([np.cos(t), np.sin(t)]))
    h = projection_body(disc, 1.5, grid=default_grid(2)).support_values
    assert np.ptp(h) / h.mean() < 1e-6


def test_projection_body_is_symmetric(rng):
    K = hull_with_points(Polytope.from_vertices(rng.normal(size=(10, 2)) + 0.2), [[0.2, 0.1]])
    g = default_grid(2)
    h = projection_body(K, 2.3, grid=g).support_values
    np.testing.assert_array_equal(h, h[g.antipode_index])


def test_projection_tau_range():
    with pytest.raises(ValueError):
        projection_body(square(), 2.0, tau=1.5)


def test_boundary_projection_interior_matches():
    g = default_grid(2)
    a = projection_body(cross(), 1.7, 0.3, g).support_values
    b = projection_body_boundary(cross(), 1.7, 0.3, g).support_values
    np.testing.assert_array_equal(a, b)


def test_boundary_projection_triangle():
    T = Polytope.from_vertices([[0, 0], [1, 0], [0, 1]])
    p = 2.5
    Z = projection_body_boundary(T, p)
    # only the hypotenuse: normal (1,1)/sqrt2, h = 1/sqrt2, length sqrt2
    nu = np.array([1, 1]) / math.sqrt(2)
    mass = (1 / math.sqrt(2)) ** (1 - p) * math.sqrt(2)
    for u in ([1, 0], [0.6, -0.8], [-1, 0]):
        assert Z.evaluator(np.array(u))[0] == pytest.approx((abs(nu @ u) ** p * mass) ** (1 / p))


def test_boundary_projection_unit_square():
    Q = Polytope.from_vertices([[0, 0], [1, 0], [1, 1], [0, 1]])
    Z = projection_body_boundary(Q, 3.0, tau=0.5)
    u = np.array([0.6, 0.8])
    # facets with normals e1 and e2, h = 1 and length 1
    expect = sum((abs(u @ e) + 0.5 * (u @ e)) ** 3 for e in np.eye(2)) ** (1 / 3)
    assert Z.evaluator(u)[0] == pytest.approx(expect)


def test_boundary_projection_origin_outside():
    with pytest.raises(OriginNotInteriorError):
        projection_body_boundary(Polytope.from_vertices(square().vertices + [3, 0]), 2.0)


# -- centroid and moment bodies --------------------------------------------------


def test_cnp_examples():
    assert calibrate_cnp(2, 2.0).value == pytest.approx(0.25, rel=1e-14)
    assert cnp_quadrature(default_grid(2), 2.0) == pytest.approx(0.25, rel=1e-9)
    g = build_grid(3, icosphere_resolution(4))
    for e in ([1, 0, 0], [0.2, 0.5, -0.7]):
        assert cnp_quadrature(g, 2.5, e) == pytest.approx(calibrate_cnp(3, 2.5).value, rel=1e-3)


@pytest.mark.parametrize("p", [1.5, 2.5, 4.0])
def test_centroid_body_of_ball(p):
    B = ball_polytope(default_grid(3, icosphere_resolution(5)))
    h = centroid_body(B, p, grid=build_grid(3, icosphere_resolution(2))).support_values
    assert np.abs(h - 1).max() < 1e-3


def test_centroid_body_is_covariant(rng):
    K = hull_with_points(cube(), rng.normal(size=(4, 3)))
    a = np.eye(3) + 0.3 * rng.normal(size=(3, 3))
    X = rng.normal(size=(20, 3))
    lhs = centroid_body(apply_linear(a, K), 2.5).evaluator(X)
    rhs = centroid_body(K, 2.5).evaluator(X @ a)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


def test_moment_body_of_square():
    # int over [-1,1]^2 of x_1^2 is 4/3
    assert moment(square(), [1, 0], 2.0, 0.0) == pytest.approx(4 / 3, rel=1e-12)


@pytest.mark.parametrize("n,p", [(2, 1.5), (2, 3.0), (3, 2.5)])
def test_moment_body_is_dilated_centroid_body(n, p, rng):
    K = hull_with_points(np.eye(n), rng.normal(size=(6, n)))
    X = rng.normal(size=(15, n))
    scale = (calibrate_cnp(n, p).value * K.volume) ** (1 / p)
    np.testing.assert_allclose(moment_body(K, p).evaluator(X), scale * centroid_body(K, p).evaluator(X), rtol=1e-10)


def test_asymmetric_moment_body():
    disc = Polytope.from_vertices(default_grid(2).directions)
    e = np.array([1.0, 0.0])
    # x -> -x shows any symmetric body has a symmetric M^tau; asymmetry needs an off-center body
    M = moment_body(disc, 2.0, 0.5)
    assert M.evaluator(e)[0] == pytest.approx(M.evaluator(-e)[0], rel=1e-6)
    off = Polytope.from_vertices(default_grid(2).directions * [1, 1] + [0.3, 0])
    M = moment_body(off, 2.0, 0.5)
    assert abs(M.evaluator(e)[0] - M.evaluator(-e)[0]) > 0.1
    M0 = moment_body(off, 2.0, 0.0)
    assert M0.evaluator(e)[0] == pytest.approx(M0.evaluator(-e)[0], rel=1e-12)


def test_moment_origin_outside():
    with pytest.raises(OriginNotInteriorError):
        moment_body(Polytope.from_vertices(square().vertices + [2, 0]), 2.0)


# -- support points ------------------------------------------------------------------


def test_support_point_of_uniform_disc():
    g = default_grid(2)
    m = DiscreteMeasure.on_grid(g, g.weights)
    p = 2.5
    R = cosine_transform(m, p, [1, 0]) ** (1 / p)
    for a in (0.0, 0.3, 2.0):
        e = np.array([math.cos(a), math.sin(a)])
        np.testing.assert_allclose(support_point(m, p, e), R * e, atol=1e-6 * R)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1.2, 5.0))
def test_support_point_is_consistent(seed, p):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(8, 3))
    m = DiscreteMeasure.from_atoms(np.vstack([d, -d]), np.tile(rng.uniform(0.2, 1, 8), 2))
    e = rng.normal(size=3)
    e /= np.linalg.norm(e)
    v = support_point(m, p, e)
    h = lp_zonoid(m, p).evaluator
    assert v @ e == pytest.approx(h(e)[0], rel=1e-12)
    # directional derivative of h at e along u
    u = rng.normal(size=3)
    s = 1e-6
    fd = (h(e + s * u)[0] - h(e - s * u)[0]) / (2 * s)
    assert v @ u == pytest.approx(fd, rel=1e-5, abs=1e-7)


def test_support_point_zero_transform():
    m = DiscreteMeasure.from_atoms([[0, 1], [0, -1]], [1, 1])
    with pytest.raises(ZeroTransformError):
        support_point(m, 2.5, [1, 0])


def test_support_point_needs_even_measure():
    with pytest.raises(ValueError):
        support_point(DiscreteMeasure.from_atoms([[0, 1]], [1]), 2.5, [0, 1])

