"""Brute-force and closed-form ground truth."""
import itertools
import math

import numpy as np
import pytest

from sib.errors import CommonPointError, DegenerateError, InvalidInputError, SizeError
from sib.geometry import Ball, Box, Point
from sib.oracle import (
    GridSpec,
    closed_form,
    default_box,
    grid_search,
    nested_search,
    smallest_enclosing_ball,
    solve_equal_radius_balls,
    solve_three_points,
    solve_two_sets_points,
)
from sib.solver import Problem, objective
from conftest import random_problem


def enclosing_radius(points, c):
    return max(float(np.linalg.norm(np.subtract(p, c))) for p in points)


# ---------------------------------------------------------------------------
# closed forms


@pytest.mark.parametrize("a,b,center,radius", [
    ((0, 0), (2, 0), (1, 0), 1.0),
    ((0, 0), (0, 6), (0, 3), 3.0),
    ((1, 1), (4, 5), (2.5, 3), 2.5),
])
def test_two_points(a, b, center, radius):
    c, r = solve_two_sets_points(a, b)
    assert c.tolist() == list(map(float, center)) and r == radius


def test_two_points_degenerate():
    with pytest.raises(DegenerateError):
        solve_two_sets_points((1, 1), (1, 1))


def test_three_points_obtuse():
    c, r = solve_three_points((0, 0), (4, 0), (1, 1))
    assert np.allclose(c, (2, 0)) and r == pytest.approx(2.0)


def test_three_points_equilateral():
    c, r = solve_three_points((0, 0), (2, 0), (1, math.sqrt(3)))
    assert np.allclose(c, (1, 1 / math.sqrt(3)), atol=1e-15)
    assert r == pytest.approx(2 / math.sqrt(3), rel=1e-15)


def test_three_points_collinear():
    c, r = solve_three_points((0, 0), (2, 0), (1, 0))
    assert np.allclose(c, (1, 0)) and r == 1.0
    with pytest.raises(DegenerateError):
        solve_three_points((1, 1), (1, 1), (1, 1))


def test_equal_radius_examples():
    c, r = solve_equal_radius_balls([(0, 0), (2, 0)], 0.5)
    assert np.allclose(c, (1, 0)) and r == 0.5
    c, r = solve_equal_radius_balls([(0, 0), (4, 0), (1, 1)], 1)
    assert np.allclose(c, (2, 0)) and r == pytest.approx(1.0)


def test_equal_radius_rejects_unequal_and_overlap():
    with pytest.raises(InvalidInputError):
        solve_equal_radius_balls([(0, 3), (-2, 0), (2, 0)], [3, 1, 1])
    with pytest.raises(CommonPointError):
        solve_equal_radius_balls([(0, 0), (1, 0)], 1)


def test_seb_against_brute_force():
    """Exhaustive SEB against a dense grid over candidate centers."""
    rng = np.random.default_rng(41)
    for _ in range(20):
        pts = rng.uniform(-5, 5, (int(rng.integers(2, 7)), 2))
        c, r = smallest_enclosing_ball(pts)
        assert enclosing_radius(pts, c) == pytest.approx(r, abs=1e-9)
        xs = np.linspace(-5, 5, 201)
        grid = np.stack(np.meshgrid(xs, xs), -1).reshape(-1, 2)
        far = np.max(np.linalg.norm(grid[:, None, :] - pts[None], axis=2), axis=1)
        assert r <= far.min() + 1e-12


def test_seb_three_dimensions():
    # regular tetrahedron inscribed in the unit sphere
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3)
    c, r = smallest_enclosing_ball(v)
    assert np.allclose(c, 0, atol=1e-12) and r == pytest.approx(1.0)


def test_seb_size_limit():
    with pytest.raises(SizeError):
        smallest_enclosing_ball(np.zeros((51, 2)))


def test_closed_form_scope(disks):
    assert closed_form(disks) is None
    assert closed_form(Problem.of("sum", [Point((0, 0)), Point((1, 0))])) is None
    c, r = closed_form(Problem.of("euclidean", [Point((0, 0)), Point((2, 0))]))
    assert r == 1.0


# ---------------------------------------------------------------------------
# grid search


def test_gridspec_validation():
    for kw in [dict(lo=(0, 0), hi=(0, 1)), dict(lo=(0, 0), hi=(1, 1), cells_per_axis=4),
               dict(lo=(0, 0), hi=(1, 1), shrink=1.0), dict(lo=(0, 0), hi=(1, 1), shrink=0.01),
               dict(lo=(0, 0), hi=(1, 1), refinements=0)]:
        with pytest.raises(InvalidInputError):
            GridSpec(**kw)


def test_grid_size_limit():
    p = Problem.of("euclidean", [Point((0, 0, 0, 0)), Point((1, 1, 1, 1))])
    with pytest.raises(SizeError):
        grid_search(p)


def test_grid_disks(disks):
    res = grid_search(disks, GridSpec((-6, -6), (6, 6), 64, 6, 0.2))
    assert np.allclose(res.x_hat, (0, 0), atol=1e-3)
    assert res.value == pytest.approx(1.0, abs=1e-4)
    assert res.value == objective(disks, res.x_hat)


def test_grid_two_points():
    p = Problem.of("euclidean", [Point((0, 0)), Point((2, 0))])
    assert grid_search(p).value == pytest.approx(1.0, abs=1e-6)


def test_grid_figure5(fig5):
    """The six max-norm squares have optimal radius 6.

    Lower bound: the squares at (2,-5) and (7,8), both of half-width 0.5,
    span y in [-5.5,-4.5] and [7.5,8.5]; a max-norm ball meeting both needs
    2r >= 12.  Upper bound: D(0.52973, 1.5) = 6 by direct evaluation.
    """
    problem, _ = fig5
    low, high = problem.sets[2], problem.sets[5]
    gap = (high.c[1] - high.h[1]) - (low.c[1] + low.h[1])
    assert gap == 12.0
    res = grid_search(problem, GridSpec((-10, -10), (10, 10), 128, 8))
    assert res.value == pytest.approx(gap / 2, abs=1e-4)
    assert objective(problem, (0.52973, 1.5)) == pytest.approx(6.0, abs=1e-12)


def test_default_box_contains_optimum(disks):
    lo, hi = default_box(disks)
    res = nested_search(disks)
    assert np.all(np.array(lo) < res.x_hat) and np.all(res.x_hat < np.array(hi))


def test_grid_matches_two_point_closed_form():
    rng = np.random.default_rng(42)
    for _ in range(100):
        a, b = rng.uniform(-5, 5, (2, 2))
        c, r = solve_two_sets_points(a, b)
        res = grid_search(Problem.of("euclidean", [Point(a), Point(b)]))
        assert abs(res.value - r) <= res.resolution
        assert res.value >= r - 1e-12


def test_grid_matches_three_point_closed_form():
    rng = np.random.default_rng(43)
    for _ in range(100):
        pts = rng.uniform(-5, 5, (3, 2))
        c, r = solve_three_points(*pts)
        assert enclosing_radius(pts, c) == pytest.approx(r, rel=1e-12)
        res = grid_search(Problem.of("euclidean", [Point(p) for p in pts]))
        assert abs(res.value - r) <= res.resolution
        assert res.value >= r - 1e-12


def test_grid_matches_equal_radius_closed_form():
    rng = np.random.default_rng(44)
    done = 0
    while done < 100:
        centers = rng.uniform(-5, 5, (int(rng.integers(2, 7)), 2))
        rad = rng.uniform(0.1, 1.5)
        try:
            c, r = solve_equal_radius_balls(centers, rad)
        except CommonPointError:
            continue
        done += 1
        res = grid_search(Problem.of("euclidean", [Ball(p, rad) for p in centers]))
        assert abs(res.value - r) <= res.resolution
        assert res.value >= r - 1e-12


@pytest.mark.parametrize("norm", ["euclidean", "sum", "max"])
def test_grid_error_bound(norm):
    """Value lies in [optimum, optimum + resolution]; the optimum comes from
    the nested golden-section search."""
    rng = np.random.default_rng(45)
    for _ in range(30):
        p = random_problem(rng, norm=norm)
        g, o = grid_search(p), nested_search(p)
        assert g.value >= o.value - 1e-9
        assert g.value <= o.value + g.resolution + 1e-12


def test_nested_matches_closed_forms():
    rng = np.random.default_rng(46)
    for _ in range(100):
        pts = rng.uniform(-5, 5, (int(rng.integers(2, 7)), 2))
        c, r = smallest_enclosing_ball(pts)
        res = nested_search(Problem.of("euclidean", [Point(p) for p in pts]))
        assert res.value == pytest.approx(r, abs=1e-9)
        assert np.allclose(res.x_hat, c, atol=1e-6)


def test_nested_three_dimensions():
    rng = np.random.default_rng(47)
    pts = rng.uniform(-3, 3, (5, 3))
    c, r = smallest_enclosing_ball(pts)
    res = nested_search(Problem.of("euclidean", [Point(p) for p in pts]), iterations=50)
    assert res.value == pytest.approx(r, abs=1e-6)
