import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import cKDTree

from conftest import cross, square
from lpblaschke.convexbody import Polytope, hausdorff_distance, hull_with_points, lp_surface_area_measure
from lpblaschke.lptransform import ball_volume
from lpblaschke.minkowski import (
    ConcentrationError,
    ExponentError,
    NormalMismatchError,
    NotEvenError,
    SolverConfig,
    residual,
    solve_even,
    solve_normalized_even,
)
from lpblaschke.spherical import DiscreteMeasure, MeasureError, build_grid, default_grid, icosphere_resolution

DIAGONALS = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]]) / math.sqrt(2)


def uniform(grid):
    return DiscreteMeasure.on_grid(grid, grid.weights)


def test_diagonal_data_gives_cross():
    K, rep = solve_normalized_even(DiscreteMeasure.from_atoms(DIAGONALS, np.ones(4)), 2.0)
    assert rep.converged and rep.final_residual <= 1e-8
    assert hausdorff_distance(K, cross()) < 1e-8
    np.testing.assert_allclose(K.offsets, 1 / math.sqrt(2), rtol=1e-8)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
def test_uniform_data_gives_ball_2d(p):
    g = default_grid(2)
    K, rep = solve_normalized_even(uniform(g), p)
    assert rep.converged
    np.testing.assert_allclose(K.offsets, math.pi ** (-1 / p), rtol=1e-3)


def test_uniform_data_gives_ball_3d():
    g = build_grid(3, icosphere_resolution(3))
    K, rep = solve_normalized_even(uniform(g), 2.5)
    assert rep.converged
    np.testing.assert_allclose(K.offsets, ball_volume(3) ** (-1 / 2.5), rtol=1e-3)


def test_critical_exponent_is_fine_when_normalized():
    K, _ = solve_normalized_even(uniform(default_grid(2)), 2.0)
    assert K.offsets.mean() == pytest.approx(0.5642, abs=1e-4)


def test_cube_round_trip():
    mu = lp_surface_area_measure(square(), 3.0)
    K = solve_even(mu, 3.0)
    assert hausdorff_distance(K, square()) < 1e-6


def test_uniform_plain_ball():
    K = solve_even(uniform(default_grid(2)), 3.0)
    np.testing.assert_allclose(K.offsets, 1.0, rtol=1e-3)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_doubling_data_rescales(p, rng):
    K0 = hull_with_points(square(), rng.normal(size=(3, 2)))
    mu = lp_surface_area_measure(K0, p)
    a = solve_even(mu, p)
    b = solve_even(mu.scaled(2.0), p)
    # S_p(tK) = t^(n-p) S_p(K)
    assert hausdorff_distance(b, a.scaled(2 ** (1 / (2 - p)))) < 1e-6 * np.abs(b.offsets).max()


def test_cube_with_three_dimensional_data(rng):
    K0 = hull_with_points(np.vstack([np.eye(3), -np.eye(3)]), rng.normal(size=(5, 3)))
    mu = lp_surface_area_measure(K0, 3.5)
    K = solve_even(mu, 3.5)
    assert hausdorff_distance(K, K0) < 1e-6
    assert residual(K, 3.5, mu, normalized=False) < 1e-6


@pytest.mark.parametrize("p", [1.5, 2.5, 4.0])
def test_residual_of_scaled_body(p, rng):
    K = hull_with_points(square(), rng.normal(size=(3, 2)))
    mu = lp_surface_area_measure(K, p).scaled(1 / K.volume)
    assert residual(K, p, mu) < 1e-12
    assert residual(K.scaled(2.0), p, mu) == pytest.approx(abs(2 ** -p - 1), rel=1e-10)


def test_residual_detects_other_bodies():
    mu = lp_surface_area_measure(square(), 2.5).scaled(0.25)
    rect = Polytope.from_vertices([[-2, -1], [2, -1], [2, 1], [-2, 1]])
    assert residual(rect, 2.5, mu) > 0.3
    with pytest.raises(NormalMismatchError):
        residual(cross(), 2.5, mu)


def test_rejects_concentrated_data():
    mu = DiscreteMeasure.from_atoms([[1, 0], [-1, 0]], [1, 1])
    with pytest.raises(ConcentrationError):
        solve_normalized_even(mu, 2.5)
    near = DiscreteMeasure.from_atoms([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 1, 1e-9, 1e-9])
    with pytest.raises(ConcentrationError):
        solve_normalized_even(near, 2.5)


def test_rejects_odd_data():
    with pytest.raises(NotEvenError):
        solve_normalized_even(DiscreteMeasure.from_atoms([[1, 0], [0, 1], [-1, -1]], [1, 1, 1]), 2.5)


def test_rejects_empty_data():
    with pytest.raises(MeasureError):
        solve_normalized_even(DiscreteMeasure.from_atoms(DIAGONALS, np.zeros(4)), 2.5)


@pytest.mark.parametrize("p", [1.0, 0.5, 12.5])
def test_exponent_range(p):
    with pytest.raises(ExponentError):
        solve_normalized_even(DiscreteMeasure.from_atoms(DIAGONALS, np.ones(4)), p)


def test_plain_problem_rejects_p_equal_n():
    with pytest.raises(ExponentError):
        solve_even(DiscreteMeasure.from_atoms(DIAGONALS, np.ones(4)), 2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(shrink=1.5)
    with pytest.raises(ValueError):
        SolverConfig(residual_tol=0)
    with pytest.raises(ValueError):
        SolverConfig(init="zeros")


def test_iteration_limit_returns_best_iterate():
    g = build_grid(3, icosphere_resolution(2))
    mu = DiscreteMeasure.on_grid(g, g.weights * (1 + 0.5 * g.directions[:, 2] ** 2))
    K, rep = solve_normalized_even(mu, 2.5, SolverConfig(max_iterations=1, init="random"))
    assert not rep.converged
    assert rep.iterations <= 1
    assert rep.final_residual > 1e-8
    assert K.is_symmetric()


def random_even_measure(rng, n, count):
    d = rng.normal(size=(count, n))
    m = rng.uniform(0.2, 1.0, count)
    return DiscreteMeasure.from_atoms(np.vstack([d, -d]), np.concatenate([m, m]))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]), st.sampled_from([1.5, 2.5, 3.0, 5.0]))
def test_random_data_properties(seed, n, p):
    rng = np.random.default_rng(seed)
    mu = random_even_measure(rng, n, 12)
    K, rep = solve_normalized_even(mu, p)
    assert rep.converged
    assert residual(K, p, mu) <= 1e-8
    hist = np.asarray(rep.objective_history)
    assert np.all(np.diff(hist) <= 1e-12 * np.maximum(1.0, np.abs(hist[:-1])))
    # mirrored parametrization keeps exact symmetry
    _, j = cKDTree(K.normals).query(-K.normals)
    np.testing.assert_array_equal(K.offsets[j], K.offsets)


@pytest.mark.parametrize("n,p", [(2, 2.5), (3, 1.5), (3, 3.0)])
def test_uniqueness_probe(n, p, rng):
    mu = random_even_measure(rng, n, 15)
    a, _ = solve_normalized_even(mu, p, SolverConfig(init="ones"))
    b, _ = solve_normalized_even(mu, p, SolverConfig(init="random", seed=7))
    assert hausdorff_distance(a, b) < 1e-5


def test_report_json():
    K, rep = solve_normalized_even(DiscreteMeasure.from_atoms(DIAGONALS, np.ones(4)), 2.0)
    doc = rep.to_json()
    assert set(doc) == {"iterations", "final_residual", "converged", "concentration_gap"}
    assert doc["converged"] is True
    assert doc["concentration_gap"] == pytest.approx(0.5)
