"""Shared instances and random problem generators."""
from pathlib import Path

import numpy as np
import pytest

from sib.geometry import Ball, Box, Point
from sib.problemfile import parse_problem
from sib.solver import Problem

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name):
    return parse_problem((DATA / name).read_bytes())


@pytest.fixture(scope="session")
def fig3():
    return load("fig3.json")


@pytest.fixture(scope="session")
def fig4():
    return load("fig4.json")


@pytest.fixture(scope="session")
def fig5():
    return load("fig5.json")


@pytest.fixture(scope="session")
def disks():
    return Problem.of("euclidean", [Ball((0, 3), 3), Ball((-2, 0), 1), Ball((2, 0), 1)])


def random_set(rng, kind, m, spread=3.0, size=(0.1, 1.5)):
    c = rng.uniform(-spread, spread, m)
    if kind == "point":
        return Point(c)
    if kind == "ball":
        return Ball(c, rng.uniform(*size))
    return Box(c, rng.uniform(*size, m))


def random_problem(rng, norm="euclidean", m=2, kinds=("point", "ball", "box"),
                   n_max=8, spread=3.0):
    n = int(rng.integers(2, n_max + 1))
    return Problem.of(norm, [random_set(rng, rng.choice(kinds), m, spread) for _ in range(n)])


# ---------------------------------------------------------------------------
# acceptance report: one line per criterion, printed after every run

ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE[criterion] = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    print(ACCEPTANCE[criterion])
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(str(k).split(".")[0]), str(k))):
        terminalreporter.write_line(ACCEPTANCE[key])
