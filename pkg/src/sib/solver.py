"""Objective, active sets, step schedules and the subgradient iteration.

The objective is ``D(x) = max_i d(x; sets[i])``; its minimum is the radius
of the smallest ball meeting every set and its minimizer the center.  The
iteration is ``x_{k+1} = x_k - alpha_k g_k`` with ``g_k`` a subgradient of
the distance to the smallest-index active set, and the reported value is
the running minimum ``V_k = min_{j<=k} D(x_j)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import backend
from .errors import CommonPointError, InvalidInputError
from .geometry import (
    NormKind,
    TargetSet,
    as_vector,
    distance,
    distance_subgradient,
    set_center,
    sets_dimension,
)


@dataclass(frozen=True)
class Problem:
    """``n >= 2`` closed convex targets in R^m under one norm.

    The sets are presumed to have no common point; this is not checked
    upfront, but :func:`solve` aborts with :class:`CommonPointError` as soon
    as an iterate lands in all of them.
    """

    dimension: int
    norm: NormKind
    sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "norm", NormKind.parse(self.norm))
        sets = tuple(self.sets)
        if len(sets) < 2:
            raise InvalidInputError(f"n >= 2 required, got {len(sets)} set(s)")
        dim = int(self.dimension)
        if dim < 1:
            raise InvalidInputError(f"dimension must be positive, got {self.dimension}")
        if sets_dimension(sets) != dim:
            raise InvalidInputError(
                f"sets have dimension {sets[0].dimension}, problem has {dim}"
            )
        object.__setattr__(self, "dimension", dim)
        object.__setattr__(self, "sets", sets)

    @classmethod
    def of(cls, norm, sets: Sequence[TargetSet]) -> "Problem":
        return cls(sets[0].dimension, norm, tuple(sets))

    @property
    def n(self) -> int:
        return len(self.sets)

    def subproblem(self, indices) -> "Problem":
        return Problem(self.dimension, self.norm, tuple(self.sets[i] for i in indices))

    def centroid(self) -> np.ndarray:
        return np.mean([set_center(s) for s in self.sets], axis=0)

    def packed(self):
        return backend.pack(self.norm, self.sets)


@dataclass(frozen=True)
class StepSchedule:
    """Step sizes ``c / k**s`` with ``s`` in (0.5, 1].

    Every admitted schedule has a divergent sum and a convergent sum of
    squares; ``c_over_k`` is the ``s = 1`` member.
    """

    family: str = "c_over_k"
    c: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        if self.family not in ("c_over_k", "c_over_k_pow"):
            raise InvalidInputError(f"unknown step family {self.family!r}")
        c, s = float(self.c), float(self.s)
        if self.family == "c_over_k":
            s = 1.0
        if not (math.isfinite(c) and c > 0):
            raise InvalidInputError(f"step constant c must be positive, got {self.c!r}")
        if not (0.5 < s <= 1.0):
            raise InvalidInputError(f"step exponent s must lie in (0.5, 1], got {self.s!r}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)


def default_checkpoints(iterations: int) -> tuple:
    """1, 10, 100, ... up to ``iterations``, which is always included."""
    out, k = [], 1
    while k < iterations:
        out.append(k)
        k *= 10
    out.append(int(iterations))
    return tuple(out)


@dataclass(frozen=True)
class SolveConfig:
    start: tuple
    iterations: int = 100_000
    schedule: StepSchedule = field(default_factory=StepSchedule)
    checkpoints: Optional[tuple] = None
    active_tol: float = 0.0
    # (tol, window): stop once V has not dropped by more than tol for window
    # iterations.  Off by default.
    early_stop: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(float(t) for t in as_vector(self.start, name="start")))
        iters = int(self.iterations)
        if iters < 1:
            raise InvalidInputError(f"iterations must be positive, got {self.iterations}")
        object.__setattr__(self, "iterations", iters)
        cps = default_checkpoints(iters) if self.checkpoints is None else self.checkpoints
        cps = tuple(sorted({int(k) for k in cps}))
        if not cps or cps[0] < 1 or cps[-1] > iters:
            raise InvalidInputError(f"checkpoints must lie in [1, {iters}], got {list(cps)}")
        object.__setattr__(self, "checkpoints", cps)
        if self.active_tol < 0:
            raise InvalidInputError("active_tol must be >= 0")
        if self.early_stop is not None:
            tol, window = self.early_stop
            if tol < 0 or int(window) < 1:
                raise InvalidInputError(f"bad early_stop {self.early_stop!r}")
            object.__setattr__(self, "early_stop", (float(tol), int(window)))


@dataclass(frozen=True)
class TraceRow:
    k: int
    x: tuple
    V: float


@dataclass(frozen=True)
class SolveTrace:
    rows: tuple
    best_point: np.ndarray
    best_value: float
    best_iteration: int
    iterations_run: int
    stopped_early: bool = False
    gap_bound: Optional[float] = None


# ---------------------------------------------------------------------------


def objective(problem: Problem, x) -> float:
    """D(x): the largest distance from ``x`` to a target set."""
    x = as_vector(x, problem.dimension, "x")
    return max(distance(problem.norm, s, x) for s in problem.sets)


def distances(problem: Problem, x) -> np.ndarray:
    x = as_vector(x, problem.dimension, "x")
    return np.array([distance(problem.norm, s, x) for s in problem.sets])


def active_set(problem: Problem, x, tol: float = 0.0) -> list:
    """Indices ``i`` with ``d(x; sets[i]) >= D(x) - tol``, ascending (0-based)."""
    if tol < 0:
        raise InvalidInputError("tol must be >= 0")
    d = distances(problem, x)
    top = float(d.max())
    return [i for i in range(problem.n) if d[i] >= top - tol]


def solver_subgradient(problem: Problem, x) -> np.ndarray:
    """Subgradient of D at ``x`` from the smallest-index active set."""
    x = as_vector(x, problem.dimension, "x")
    if objective(problem, x) <= 0:
        raise CommonPointError(x)
    i = active_set(problem, x, 0.0)[0]
    return distance_subgradient(problem.norm, problem.sets[i], x)


def step_size(schedule: StepSchedule, k: int) -> float:
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if schedule.s == 1.0:
        return schedule.c / float(k)
    return schedule.c / math.pow(float(k), schedule.s)


def _zeta_tail(p: float, start: int = 100_000) -> float:
    # sum_{k>=1} k**-p: direct sum below ``start``, Euler-Maclaurin beyond
    k = np.arange(1, start, dtype=float)
    head = float(np.sum(k ** -p))
    n = float(start)
    tail = n ** (1 - p) / (p - 1) + 0.5 * n ** -p + p * n ** (-p - 1) / 12
    return head + tail


def step_square_sum(schedule: StepSchedule) -> float:
    """sum_k alpha_k**2 over all k >= 1."""
    if schedule.s == 1.0:
        return schedule.c ** 2 * math.pi ** 2 / 6
    return schedule.c ** 2 * _zeta_tail(2 * schedule.s)


def step_sums(schedule: StepSchedule, ks) -> np.ndarray:
    """Partial sums ``alpha_1 + ... + alpha_k`` for each ``k`` in ``ks``."""
    ks = np.asarray(ks, dtype=np.int64)
    kmax = int(ks.max())
    idx = np.arange(1, kmax + 1, dtype=float)
    steps = schedule.c / idx if schedule.s == 1.0 else schedule.c / idx ** schedule.s
    return np.cumsum(steps)[ks - 1]


def gap_bound(schedule: StepSchedule, k: int, dist_to_solution: float) -> float:
    """Upper bound on ``V_k - V_opt``.

    ``(d**2 + sum alpha**2) / (2 * sum_{i<=k} alpha_i)`` where ``d`` is the
    euclidean distance from the start point to the solution set.  Passing the
    distance to one particular solution gives a (possibly loose) bound when
    the solution set is not a singleton.
    """
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if dist_to_solution < 0:
        raise InvalidInputError("dist_to_solution must be >= 0")
    denom = 2.0 * float(step_sums(schedule, [k])[0])
    return (dist_to_solution ** 2 + step_square_sum(schedule)) / denom


def solve(problem: Problem, config: SolveConfig, *, dist_to_solution=None,
          kernels=None) -> SolveTrace:
    """Run the subgradient method for exactly ``config.iterations`` steps.

    Row ``k`` holds the iterate before the ``k``-th update (row 1 is the
    start point) together with ``V_k``.  ``kernels`` picks a backend module
    (see :func:`sib.backend.get_kernels`); the default is the one selected
    at import.
    """
    start = as_vector(config.start, problem.dimension, "start")
    kern = kernels if kernels is not None else backend.kernels
    norm_code, kind, center, half, scal, dual = problem.packed()
    early_tol, early_window = config.early_stop if config.early_stop else (-1.0, 0)
    cp_k, cp_x, cp_v, best_x, best_v, best_k, last_k, status = kern.run_subgradient(
        norm_code, kind, center, half, scal, dual,
        np.ascontiguousarray(start, dtype=np.float64),
        config.iterations, config.schedule.c, config.schedule.s,
        np.asarray(config.checkpoints, dtype=np.int64),
        early_tol, early_window, config.active_tol,
    )
    if status == 1:
        raise CommonPointError(best_x, int(best_k))
    rows = tuple(
        TraceRow(int(k), tuple(float(t) for t in x), float(v))
        for k, x, v in zip(cp_k, cp_x, cp_v)
    )
    bound = None
    if dist_to_solution is not None:
        bound = gap_bound(config.schedule, int(last_k), float(dist_to_solution))
    return SolveTrace(
        rows=rows,
        best_point=np.asarray(best_x, dtype=float),
        best_value=float(best_v),
        best_iteration=int(best_k),
        iterations_run=int(last_k),
        stopped_early=status == 2,
        gap_bound=bound,
    )
