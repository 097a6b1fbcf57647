"""Independent ground truth for small instances.

``grid_search`` scans the objective on a regular grid and zooms in around
the best cell; ``nested_search`` minimises D one coordinate at a time by
golden-section search, which is exact for convex functions and resolves
the flat valleys a grid struggles with.  Neither uses subgradients.  The
closed-form solvers cover two points, three points in the plane, and
balls of a common radius (which reduce to the smallest enclosing ball of
their centers).
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend
from .errors import CommonPointError, DegenerateError, InvalidInputError, SizeError
from .geometry import Ball, Box, NormKind, Point, as_vector, norm_eval, set_center
from .solver import Problem, objective

MAX_GRID_DIM = 3
MAX_SEB_POINTS = 50


@dataclass(frozen=True)
class GridSpec:
    lo: tuple
    hi: tuple
    cells_per_axis: int = 128
    refinements: int = 16
    shrink: float = 0.25

    def __post_init__(self):
        lo = as_vector(self.lo, name="lo")
        hi = as_vector(self.hi, len(lo), "hi")
        if not np.all(lo < hi):
            raise InvalidInputError(f"grid box needs lo < hi, got {lo.tolist()} / {hi.tolist()}")
        cells = int(self.cells_per_axis)
        if cells < 8:
            raise InvalidInputError(f"cells_per_axis must be >= 8, got {cells}")
        if int(self.refinements) < 1:
            raise InvalidInputError("refinements must be >= 1")
        # the zoomed window must still cover the neighbours of the best cell
        if not (2.0 / cells < self.shrink < 1.0):
            raise InvalidInputError(
                f"shrink must lie in ({2.0 / cells:g}, 1), got {self.shrink}"
            )
        object.__setattr__(self, "lo", tuple(lo.tolist()))
        object.__setattr__(self, "hi", tuple(hi.tolist()))
        object.__setattr__(self, "cells_per_axis", cells)
        object.__setattr__(self, "refinements", int(self.refinements))
        object.__setattr__(self, "shrink", float(self.shrink))


@dataclass(frozen=True)
class OracleResult:
    x_hat: np.ndarray
    value: float
    resolution: float


def default_box(problem: Problem):
    """Bounding box of the set centers, padded on every side by the largest
    per-axis set extent plus the span of the centers."""
    centers = np.array([set_center(s) for s in problem.sets])
    lo, hi = centers.min(axis=0), centers.max(axis=0)
    extent = 0.0
    for s in problem.sets:
        if isinstance(s, Ball):
            extent = max(extent, s.r)
        elif isinstance(s, Box):
            extent = max(extent, max(s.h))
    pad = extent + float(np.max(hi - lo))
    if pad <= 0:
        pad = 1.0
    return tuple((lo - pad).tolist()), tuple((hi + pad).tolist())


def default_grid(problem: Problem, **kw) -> GridSpec:
    lo, hi = default_box(problem)
    return GridSpec(lo, hi, **kw)


def _threads(threads) -> int:
    if threads is None:
        env = os.environ.get("SIB_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _evaluate(kern, packed, pts, threads):
    if threads == 1 or len(pts) < 4096:
        return kern.objective_many(*packed, pts)
    chunks = np.array_split(pts, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(
            lambda c: kern.objective_many(*packed, np.ascontiguousarray(c)), chunks
        ))
    return np.concatenate(parts)


def grid_search(problem: Problem, spec: Optional[GridSpec] = None, *,
                threads=None, kernels=None) -> OracleResult:
    """Multi-level brute-force minimisation of D over a box.

    Each level evaluates D at the centers of ``cells_per_axis**m`` cells,
    then shrinks the window by ``spec.shrink`` around the best point seen so
    far.  The window is widened when needed to keep every cell that could
    still hold the minimizer, so the returned value stays within the final
    cell radius of the optimum over the initial box.  Ties go to the lowest
    linear cell index, independent of how the evaluation is split across
    threads.
    """
    m = problem.dimension
    if m > MAX_GRID_DIM:
        raise SizeError(f"grid search supports m <= {MAX_GRID_DIM}, got m={m}")
    spec = spec or default_grid(problem)
    if len(spec.lo) != m:
        raise InvalidInputError(f"grid box has dimension {len(spec.lo)}, problem has {m}")
    kern = kernels if kernels is not None else backend.kernels
    packed = problem.packed()
    nthreads = _threads(threads)

    lo = np.asarray(spec.lo, dtype=float)
    hi = np.asarray(spec.hi, dtype=float)
    cells = spec.cells_per_axis
    best_x, best_v = None, np.inf
    width = (hi - lo) / cells
    for _ in range(spec.refinements):
        width = (hi - lo) / cells
        axes = [lo[j] + (np.arange(cells) + 0.5) * width[j] for j in range(m)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.ascontiguousarray(np.stack([g.ravel() for g in mesh], axis=1))
        vals = _evaluate(kern, packed, pts, nthreads)
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_v = float(vals[i])
            best_x = pts[i].copy()
        # D is 1-Lipschitz, so a cell whose center exceeds best_v by more
        # than the cell radius cannot hold the minimizer; keep every other
        # cell inside the next window.
        radius = norm_eval(problem.norm, width / 2)
        keep = pts[vals <= best_v + radius]
        half = spec.shrink * (hi - lo) / 2
        lo = np.minimum(best_x - half, keep.min(axis=0) - width / 2)
        hi = np.maximum(best_x + half, keep.max(axis=0) + width / 2)

    return OracleResult(
        x_hat=best_x,
        value=objective(problem, best_x),
        resolution=norm_eval(problem.norm, width),
    )


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden(f, a, b, iterations):
    """Minimise a convex scalar function on [a, b] by golden-section search."""
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def nested_search(problem: Problem, lo=None, hi=None, *, iterations: int = 80,
                  kernels=None) -> OracleResult:
    """Minimise D over a box by nested golden-section search.

    For each value of the first coordinate the remaining coordinates are
    minimised recursively; the partial minimum of a convex function is
    convex, so every level is a one-dimensional convex search.  ``m <= 3``;
    the cost is ``iterations**m`` evaluations of D.  ``resolution`` is the
    final bracket width in the problem norm.
    """
    m = problem.dimension
    if m > MAX_GRID_DIM:
        raise SizeError(f"nested search supports m <= {MAX_GRID_DIM}, got m={m}")
    if lo is None or hi is None:
        lo, hi = default_box(problem)
    lo = as_vector(lo, m, "lo")
    hi = as_vector(hi, m, "hi")
    if not np.all(lo < hi):
        raise InvalidInputError("box needs lo < hi")
    kern = kernels if kernels is not None else backend.kernels
    packed = problem.packed()
    x = np.zeros((1, m))

    def value():
        return float(kern.objective_many(*packed, x)[0])

    def search(j):
        # minimise over coordinates j.. with x[0, :j] held fixed
        def f(t):
            x[0, j] = t
            return value() if j == m - 1 else search(j + 1)[1]
        t, _ = _golden(f, lo[j], hi[j], iterations)
        x[0, j] = t
        if j == m - 1:
            return [t], value()
        rest, v = search(j + 1)
        return [t] + rest, v

    point, _ = search(0)
    x_hat = np.array(point)
    width = (hi - lo) * _GOLDEN ** iterations
    return OracleResult(x_hat=x_hat, value=objective(problem, x_hat),
                        resolution=norm_eval(problem.norm, width))


# ---------------------------------------------------------------------------
# closed forms (euclidean)


def solve_two_sets_points(a, b):
    """Smallest ball meeting two points: the midpoint and half the distance."""
    a = as_vector(a, name="a")
    b = as_vector(b, len(a), "b")
    if np.array_equal(a, b):
        raise DegenerateError("the two points coincide")
    return (a + b) / 2, float(np.linalg.norm(b - a)) / 2


def _circumcenter_2d(a1, a2, a3):
    A = 2 * np.array([a2 - a1, a3 - a1])
    rhs = np.array([a2 @ a2 - a1 @ a1, a3 @ a3 - a1 @ a1])
    return np.linalg.solve(A, rhs)


def solve_three_points(a1, a2, a3):
    """Smallest enclosing circle of three points in the plane.

    With a non-acute angle (collinear points included) the answer is the
    midpoint of the opposite side, otherwise the circumcenter.
    """
    a1 = as_vector(a1, 2, "a1")
    a2 = as_vector(a2, 2, "a2")
    a3 = as_vector(a3, 2, "a3")
    pts = [a1, a2, a3]
    if np.array_equal(a1, a2) and np.array_equal(a2, a3):
        raise DegenerateError("all three points coincide")
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        if np.dot(pts[j] - pts[i], pts[k] - pts[i]) <= 0:
            center = (pts[j] + pts[k]) / 2
            return center, float(np.linalg.norm(pts[k] - pts[j])) / 2
    center = _circumcenter_2d(a1, a2, a3)
    return center, float(np.linalg.norm(center - a1))


def _ball_through(pts: np.ndarray):
    """Center of the smallest ball with every row of ``pts`` on its boundary
    (center in their affine hull); ``None`` if affinely dependent."""
    p0 = pts[0]
    A = (pts[1:] - p0).T
    G = A.T @ A
    if np.linalg.matrix_rank(G) < G.shape[0]:
        return None
    mu = np.linalg.solve(2 * G, np.diag(G))
    return p0 + A @ mu


def smallest_enclosing_ball(points):
    """Exhaustive smallest enclosing ball of a finite point set.

    Tries every subset of 2..m+1 points as the boundary support and keeps
    the smallest candidate ball containing all points.
    """
    pts = np.array([as_vector(p, name="point") for p in points], dtype=float)
    n, m = pts.shape
    if n > MAX_SEB_POINTS:
        raise SizeError(f"exhaustive SEB supports at most {MAX_SEB_POINTS} points, got {n}")
    if n == 1:
        return pts[0].copy(), 0.0
    scale = max(1.0, float(np.max(np.abs(pts))))
    slack = 1e-9 * scale
    best_c, best_r = None, np.inf
    for size in range(2, min(m + 1, n) + 1):
        for idx in itertools.combinations(range(n), size):
            c = _ball_through(pts[list(idx)])
            if c is None:
                continue
            r = float(np.linalg.norm(pts[idx[0]] - c))
            if r >= best_r:
                continue
            if np.all(np.linalg.norm(pts - c, axis=1) <= r + slack):
                best_c, best_r = c, r
    if best_c is None:
        # every point identical
        return pts[0].copy(), 0.0
    return best_c, best_r


def solve_equal_radius_balls(centers, r):
    """Smallest intersecting ball for euclidean balls of one common radius.

    The center is the smallest enclosing ball center of the ball centers and
    the radius shrinks by ``r``.  ``r`` may be a sequence of radii, which
    must then all be equal.
    """
    if np.ndim(r) > 0:
        radii = np.asarray(r, dtype=float)
        if radii.size != len(centers):
            raise InvalidInputError("one radius per center required")
        if not np.all(radii == radii[0]):
            raise InvalidInputError(
                f"radii must be equal for this closed form, got {radii.tolist()}"
            )
        r = float(radii[0])
    r = float(r)
    if r < 0:
        raise InvalidInputError("radius must be >= 0")
    if len(centers) < 2:
        raise InvalidInputError("n >= 2 required")
    center, R = smallest_enclosing_ball(centers)
    if R - r <= 0:
        raise CommonPointError(center)
    return center, R - r


def closed_form(problem: Problem):
    """Closed-form answer when one applies, else ``None``.

    Handles euclidean instances of points only, or balls/points of a common
    radius.
    """
    if problem.norm is not NormKind.EUCLIDEAN:
        return None
    if not all(isinstance(s, (Point, Ball)) for s in problem.sets):
        return None
    radii = [s.r if isinstance(s, Ball) else 0.0 for s in problem.sets]
    if len(set(radii)) != 1:
        return None
    centers = [np.asarray(s.c) for s in problem.sets]
    return solve_equal_radius_balls(centers, radii[0])
