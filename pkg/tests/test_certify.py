"""Optimality certificates, touching counts, support reduction, bounds."""
import math

import numpy as np
import pytest

from sib.certify import (
    certify_optimality,
    hull_fit,
    hull_membership,
    problem_radius_bounds,
    radius_bounds,
    support_reduction,
    touching_count,
)
from sib.errors import CommonPointError, InvalidInputError, PreconditionError, SizeError
from sib.geometry import Ball, Point
from sib.oracle import nested_search
from sib.solver import Problem, objective
from conftest import random_problem


def test_hull_membership_examples():
    assert np.allclose(hull_membership((1, 0), [(0, 0), (2, 0)]), (0.5, 0.5))
    lam = hull_membership((0, 0), [(0, 3), (-2, 0), (2, 0)])
    assert np.allclose(lam, (0, 0.5, 0.5))
    assert hull_membership((5, 5), [(0, 0), (1, 0), (0, 1)]) is None


def test_hull_fit_residual_is_distance_to_hull():
    fit = hull_fit((2, 2), [(0, 0), (1, 0), (0, 1)])
    assert not fit.inside
    # nearest hull point is (0.5, 0.5) on the hypotenuse
    assert fit.residual == pytest.approx(math.hypot(1.5, 1.5), rel=1e-12)


def test_hull_weights_are_convex():
    rng = np.random.default_rng(51)
    for _ in range(200):
        pts = rng.normal(size=(int(rng.integers(1, 8)), 2))
        w = rng.dirichlet(np.ones(len(pts)))
        x = w @ pts
        lam = hull_membership(x, pts)
        assert lam is not None
        assert lam.min() >= -1e-12 and abs(lam.sum() - 1) <= 1e-9
        assert np.count_nonzero(lam) <= 3
        assert np.linalg.norm(lam @ pts - x) <= 1e-7


def test_hull_size_limit():
    with pytest.raises(SizeError):
        hull_membership((0, 0), np.zeros((51, 2)))


def test_disks_certificate(disks):
    cert = certify_optimality(disks, (0, 0))
    assert cert.passed
    assert list(cert.active) == [1, 2]
    assert np.allclose(cert.projections, [(-1, 0), (1, 0)])
    assert np.allclose(cert.lam, (0.5, 0.5))
    assert cert.touching_count == 2
    assert "verdict: pass" in cert.as_text()


def test_circumcenter_certificate():
    # equal distances from (1, y) to (0,0) and (1,5): 1 + y^2 = (5 - y)^2
    p = Problem.of("euclidean", [Point((0, 0)), Point((2, 0)), Point((1, 5))])
    cert = certify_optimality(p, (1, 2.4))
    assert cert.passed and len(cert.active) == 3


def test_obtuse_certificate():
    p = Problem.of("euclidean", [Point((0, 0)), Point((4, 0)), Point((1, 1))])
    cert = certify_optimality(p, (2, 0))
    assert cert.passed
    assert list(cert.active) == [0, 1]
    assert np.allclose(cert.lam, (0.5, 0.5))


def test_non_optimal_point_fails(disks):
    cert = certify_optimality(disks, (0.3, 0.2))
    assert cert.verdict == "fail"
    assert cert.hull_residual > 0.1


def test_certificate_common_point():
    p = Problem.of("euclidean", [Ball((0, 0), 1), Ball((1, 0), 1)])
    with pytest.raises(CommonPointError):
        certify_optimality(p, (0.5, 0))


def test_sum_and_max_certificates(fig4, fig5):
    cert = certify_optimality(fig4[0], (0.5, -0.25))
    assert cert.passed and cert.sufficient_only
    assert "(sufficient)" in cert.as_text()
    cert = certify_optimality(fig5[0], (0.52973, 1.5), 1e-3)
    assert cert.passed and cert.sufficient_only
    # away from the optimum the sufficient check cannot succeed
    assert certify_optimality(fig4[0], (2, 0)).verdict == "inconclusive"


def test_touching_count_examples(disks, fig3):
    assert touching_count(disks, (0, 0), 1.0, 1e-9) == 2
    two = Problem.of("euclidean", [Point((0, 0)), Point((2, 0))])
    assert touching_count(two, (1, 0), 1.0, 0.0) == 2
    problem = fig3[0]
    x = (-1.05556, 3.05556)
    assert touching_count(problem, x, objective(problem, x), 1e-3) >= 2


def test_support_reduction_examples(disks, fig3):
    assert support_reduction(disks, (0, 0)) == [1, 2]
    pts = [Point((0, 0))] * 5 + [Point((2, 0))] * 5 + [Point((1, 0.1)), Point((0.5, 0)), Point((1.5, -0.2))]
    assert len(support_reduction(Problem.of("euclidean", pts), (1, 0))) == 2
    problem = fig3[0]
    opt = nested_search(problem)
    J = support_reduction(problem, opt.x_hat)
    assert 2 <= len(J) <= 3


def test_support_reduction_needs_certificate(disks):
    with pytest.raises(PreconditionError):
        support_reduction(disks, (0.5, 0.5))
    with pytest.raises(PreconditionError):
        support_reduction(Problem.of("sum", [Point((0, 0)), Point((2, 0))]), (1, 0))


def test_radius_bounds_examples():
    b = radius_bounds([(0, 0), (2, 0)], [0, 0], 2)
    # two centers: l = min(m + 1, n) = 2, so the upper bound is diam / 2
    assert (b.diam, b.ell, b.lower, b.upper) == (2.0, 2, 1.0, 1.0)
    b = radius_bounds([(0, 3), (-2, 0), (2, 0)], [3, 1, 1], 2)
    # pairwise distances sqrt(13), sqrt(13), 4
    assert b.diam == 4.0 and b.ell == 3
    assert b.lower == -1.0
    assert b.upper == pytest.approx(4 / math.sqrt(3) - 1, rel=1e-15)
    b = radius_bounds([(0, 0), (1, 0), (2, 0)], [0, 0, 0], 2)
    assert b.lower == 1.0 and b.upper == pytest.approx(2 / math.sqrt(3))


def test_radius_bounds_scope(fig3):
    with pytest.raises(InvalidInputError):
        problem_radius_bounds(fig3[0])


def test_soundness_on_random_instances():
    """Oracle optima certify at tol 1e-4; clearly worse points fail; a pass
    means the value is within 1e-4 of the optimum."""
    rng = np.random.default_rng(52)
    done = 0
    while done < 40:
        p = random_problem(rng)
        opt = nested_search(p)
        if opt.value < 0.05:
            continue
        done += 1
        assert certify_optimality(p, opt.x_hat, 1e-4).passed
        assert touching_count(p, opt.x_hat, opt.value, 1e-6) >= 2
        for y in rng.uniform(-5, 5, (20, 2)):
            if objective(p, y) > opt.value + 0.1:
                assert not certify_optimality(p, y, 1e-4).passed
        for y in opt.x_hat + rng.normal(scale=1e-3, size=(20, 2)):
            if certify_optimality(p, y, 1e-4).passed:
                assert abs(objective(p, y) - opt.value) <= 1e-4
