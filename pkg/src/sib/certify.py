"""Post-hoc optimality checks for a candidate center.

Under the euclidean norm a point ``x`` is optimal exactly when it lies in
the convex hull of its nearest points on the active sets; that test is
decisive.  Under the sum and max norms the check is that 0 lies in the
convex hull of the subgradient selections available at ``x``.  Those
selections need not exhaust the subdifferential, so a pass is sufficient
for optimality but a miss is only "inconclusive".
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CommonPointError, InvalidInputError, PreconditionError, SizeError
from .geometry import Ball, NormKind, Point, as_vector, project, subgradient_extremes
from .solver import Problem, active_set, distances

MAX_HULL_POINTS = 50
HULL_TOL = 1e-7
WEIGHT_FLOOR = -1e-10

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class HullFit:
    weights: np.ndarray  # one per input point, zero off the support
    support: tuple
    residual: float
    inside: bool


def hull_fit(x, points, tol: float = HULL_TOL) -> HullFit:
    """Search subsets of at most m+1 points for barycentric weights of ``x``.

    Subsets are tried by size, then lexicographically; the first one with
    weights >= -1e-10 and residual <= ``tol`` wins.  If none does, the
    result carries the euclidean distance from ``x`` to the hull (the best
    residual over feasible subsets) and ``inside=False``.
    """
    x = as_vector(x, name="x")
    pts = np.array([as_vector(p, len(x), "point") for p in points], dtype=float)
    n = len(pts)
    if n == 0:
        raise InvalidInputError("at least one point required")
    if n > MAX_HULL_POINTS:
        raise SizeError(f"hull membership supports at most {MAX_HULL_POINTS} points, got {n}")
    m = len(x)
    best = None
    for size in range(1, min(m + 1, n) + 1):
        for idx in itertools.combinations(range(n), size):
            sub = pts[list(idx)]
            p0 = sub[0]
            A = (sub[1:] - p0).T
            if size > 1 and np.linalg.matrix_rank(A) < size - 1:
                continue
            if size > 1:
                mu = np.linalg.lstsq(A, x - p0, rcond=None)[0]
                lam = np.concatenate([[1.0 - mu.sum()], mu])
            else:
                lam = np.array([1.0])
            if lam.min() < WEIGHT_FLOOR:
                continue
            lam = np.clip(lam, 0.0, None)
            lam /= lam.sum()
            resid = float(np.linalg.norm(lam @ sub - x))
            if best is None or resid < best[2]:
                best = (idx, lam, resid)
            if resid <= tol:
                w = np.zeros(n)
                w[list(idx)] = lam
                return HullFit(w, tuple(idx), resid, True)
    idx, lam, resid = best
    w = np.zeros(n)
    w[list(idx)] = lam
    return HullFit(w, tuple(idx), resid, False)


def hull_membership(x, points, tol: float = HULL_TOL) -> Optional[np.ndarray]:
    """Convex weights (at most m+1 nonzero) expressing ``x`` from ``points``,
    or ``None`` when ``x`` is farther than ``tol`` from their hull."""
    fit = hull_fit(x, points, tol)
    return fit.weights if fit.inside else None


@dataclass(frozen=True)
class Certificate:
    point: tuple
    value: float
    tol: float
    active: tuple
    projections: tuple
    # euclidean: the projections; otherwise the subgradient selections
    generators: tuple
    lam: np.ndarray
    support: tuple
    hull_residual: float
    touching_count: int
    verdict: str
    sufficient_only: bool = field(default=False)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def as_text(self) -> str:
        def vec(v):
            return "(" + ", ".join(f"{t:.6g}" for t in v) + ")"
        lines = [
            f"verdict: {self.verdict}" + (" (sufficient)" if self.sufficient_only and self.passed else ""),
            f"point: {vec(self.point)}",
            f"value: {self.value:.10g}",
            f"tol: {self.tol:.3g}",
            f"active: {list(self.active)}",
            "projections: " + " ".join(vec(p) for p in self.projections),
            "generators: " + " ".join(vec(g) for g in self.generators),
            "lambda: " + vec(self.lam),
            f"hull_residual: {self.hull_residual:.3e}",
            f"touching_count: {self.touching_count}",
        ]
        return "\n".join(lines)


def default_tol(value: float) -> float:
    return 1e-6 * max(1.0, value)


def touching_count(problem: Problem, x, r: float, tol: float) -> int:
    """How many sets lie at distance within ``tol`` of ``r`` from ``x``."""
    d = distances(problem, x)
    return int(np.sum(np.abs(d - r) <= tol))


def certify_optimality(problem: Problem, x, tol: Optional[float] = None) -> Certificate:
    """Check whether ``x`` is an optimal center.

    ``tol`` is both the active-set tolerance and the hull residual allowed;
    by default ``1e-6 * max(1, D(x))``.
    """
    x = as_vector(x, problem.dimension, "x")
    d = distances(problem, x)
    value = float(d.max())
    if value <= 0:
        raise CommonPointError(x)
    tol = default_tol(value) if tol is None else float(tol)
    active = active_set(problem, x, tol)
    projections = [project(problem.norm, problem.sets[i], x).omega for i in active]
    touching = touching_count(problem, x, value, tol)

    if problem.norm is NormKind.EUCLIDEAN:
        generators = projections
        fit = hull_fit(x, generators, tol)
        verdict = PASS if fit.inside and touching >= 2 else FAIL
        sufficient = False
    else:
        generators = []
        for i in active:
            for g in subgradient_extremes(problem.norm, problem.sets[i], x, tol):
                if not any(np.array_equal(g, h) for h in generators):
                    generators.append(g)
        fit = hull_fit(np.zeros(problem.dimension), generators, tol)
        verdict = PASS if fit.inside and touching >= 2 else INCONCLUSIVE
        sufficient = True

    return Certificate(
        point=tuple(x.tolist()),
        value=value,
        tol=tol,
        active=tuple(active),
        projections=tuple(tuple(p.tolist()) for p in projections),
        generators=tuple(tuple(np.asarray(g).tolist()) for g in generators),
        lam=fit.weights,
        support=fit.support,
        hull_residual=fit.residual,
        touching_count=touching,
        verdict=verdict,
        sufficient_only=sufficient,
    )


def support_reduction(problem: Problem, x, tol: Optional[float] = None,
                      radius_tol: float = 1e-6, grid=None) -> list:
    """Indices J, 2 <= |J| <= m+1, whose sets alone give the same smallest ball.

    Taken from the support of the hull weights in the euclidean
    certificate.  The claim is re-checked: the certificate must pass on the
    sub-problem, and for m <= 3 the sub-problem's radius, re-solved
    independently by ``oracle.nested_search`` (or ``oracle.grid_search`` when
    a ``grid`` spec is given), must match ``D(x)`` within ``radius_tol``.
    """
    from .oracle import MAX_GRID_DIM, grid_search, nested_search

    if problem.norm is not NormKind.EUCLIDEAN:
        raise PreconditionError("support reduction is defined for the euclidean norm")
    cert = certify_optimality(problem, x, tol)
    if not cert.passed:
        raise PreconditionError(f"certificate fails at x={list(cert.point)}")
    J = sorted(cert.active[k] for k in cert.support if cert.lam[k] > 0)
    if len(J) < 2:
        J = sorted(set(J) | set(cert.active[:2]))
    sub = problem.subproblem(J)
    if not certify_optimality(sub, x, tol).passed:
        raise PreconditionError(f"reduced set {J} does not certify at x")
    if problem.dimension <= MAX_GRID_DIM:
        res = grid_search(sub, grid) if grid is not None else nested_search(sub)
        if abs(res.value - cert.value) > radius_tol:
            raise PreconditionError(
                f"reduced set {J} has radius {res.value!r}, full instance {cert.value!r}"
            )
    return J


@dataclass(frozen=True)
class RadiusBounds:
    lower: float
    upper: float
    diam: float
    ell: int


def radius_bounds(centers, radii, m: int) -> RadiusBounds:
    """Bracket the optimal radius for euclidean balls by the diameter of
    their centers:

    ``diam/2 - max r <= radius <= sqrt((l-1)/(2l)) * diam - min r``
    with ``l = min(m+1, n)``.
    """
    pts = np.array([as_vector(c, m, "center") for c in centers], dtype=float)
    radii = np.asarray(radii, dtype=float)
    n = len(pts)
    if n < 2 or len(radii) != n:
        raise InvalidInputError("need n >= 2 centers and one radius per center")
    diam = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            diam = max(diam, float(np.linalg.norm(pts[i] - pts[j])))
    ell = min(m + 1, n)
    lower = diam / 2 - float(radii.max())
    upper = math.sqrt((ell - 1) / (2 * ell)) * diam - float(radii.min())
    return RadiusBounds(lower=lower, upper=upper, diam=diam, ell=ell)


def problem_radius_bounds(problem: Problem) -> RadiusBounds:
    if problem.norm is not NormKind.EUCLIDEAN or not all(
        isinstance(s, (Point, Ball)) for s in problem.sets
    ):
        raise InvalidInputError("radius bounds need euclidean ball/point targets")
    centers = [s.c for s in problem.sets]
    radii = [s.r if isinstance(s, Ball) else 0.0 for s in problem.sets]
    return radius_bounds(centers, radii, problem.dimension)
