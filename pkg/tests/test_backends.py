"""The compiled kernels and the pure-Python fallback agree bit for bit."""
import numpy as np
import pytest

from sib import backend
from sib.errors import CommonPointError
from sib.geometry import Halfspace
from sib.oracle import grid_search, default_grid
from sib.solver import Problem, SolveConfig, StepSchedule, objective, solve
from conftest import random_problem

try:
    CY = backend.get_kernels("cython")
except ImportError:
    CY = None
PY = backend.get_kernels("python")

needs_cython = pytest.mark.skipif(CY is None, reason="compiled extension not built")


def with_halfspace(rng, problem):
    a = rng.normal(size=problem.dimension)
    return Problem.of(problem.norm, list(problem.sets) + [Halfspace(a, -abs(rng.normal()) - 5)])


def test_backend_selected():
    assert backend.BACKEND in ("cython", "python")
    assert backend.kernels is (CY if backend.BACKEND == "cython" else PY)
    with pytest.raises(ValueError):
        backend.get_kernels("fortran")


@pytest.mark.parametrize("norm", ["euclidean", "sum", "max"])
def test_python_objective_matches_geometry(norm):
    rng = np.random.default_rng(31)
    for _ in range(30):
        p = with_halfspace(rng, random_problem(rng, norm=norm, m=int(rng.integers(1, 4))))
        pts = rng.uniform(-6, 6, (50, p.dimension))
        vals = PY.objective_many(*p.packed(), pts)
        expected = [objective(p, x) for x in pts]
        assert np.allclose(vals, expected, rtol=1e-14, atol=1e-14)


@needs_cython
@pytest.mark.parametrize("norm", ["euclidean", "sum", "max"])
def test_objective_many_identical(norm):
    rng = np.random.default_rng(32)
    for _ in range(30):
        p = with_halfspace(rng, random_problem(rng, norm=norm, m=int(rng.integers(1, 4))))
        pts = rng.uniform(-6, 6, (500, p.dimension))
        a = CY.objective_many(*p.packed(), pts)
        b = PY.objective_many(*p.packed(), pts)
        assert a.tobytes() == b.tobytes()


@needs_cython
@pytest.mark.parametrize("norm", ["euclidean", "sum", "max"])
@pytest.mark.parametrize("schedule", [StepSchedule(), StepSchedule("c_over_k_pow", 0.7, 0.8)])
def test_solve_traces_identical(norm, schedule):
    rng = np.random.default_rng(33)
    for _ in range(8):
        p = with_halfspace(rng, random_problem(rng, norm=norm))
        cfg = SolveConfig(rng.uniform(-3, 3, 2), 5000, schedule, checkpoints=range(1, 5001, 101))
        try:
            a = solve(p, cfg, kernels=CY)
        except CommonPointError:
            with pytest.raises(CommonPointError):
                solve(p, cfg, kernels=PY)
            continue
        b = solve(p, cfg, kernels=PY)
        assert a.rows == b.rows
        assert a.best_point.tobytes() == b.best_point.tobytes()
        assert (a.best_value, a.best_iteration) == (b.best_value, b.best_iteration)


@needs_cython
def test_early_stop_identical():
    rng = np.random.default_rng(34)
    p = random_problem(rng)
    cfg = SolveConfig((0, 0), 50_000, early_stop=(1e-5, 200))
    a, b = solve(p, cfg, kernels=CY), solve(p, cfg, kernels=PY)
    assert a.rows == b.rows and a.iterations_run == b.iterations_run


@needs_cython
def test_grid_identical_across_backends_and_threads(disks):
    spec = default_grid(disks, cells_per_axis=64, refinements=4)
    ref = grid_search(disks, spec, threads=1, kernels=PY)
    for kern, threads in [(CY, 1), (CY, 4), (PY, 3)]:
        res = grid_search(disks, spec, threads=threads, kernels=kern)
        assert res.x_hat.tobytes() == ref.x_hat.tobytes()
        assert res.value == ref.value
