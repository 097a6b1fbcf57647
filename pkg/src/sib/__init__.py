"""Smallest intersecting ball of convex sets via the subgradient method.

Find the center and radius of the smallest ball (in the euclidean, sum or
max norm) that meets every one of a finite family of points, balls, boxes
and halfspaces, check the answer with optimality certificates, and compare
it against brute-force ground truth.
"""
from .backend import BACKEND
from .certify import (
    Certificate,
    RadiusBounds,
    certify_optimality,
    hull_membership,
    problem_radius_bounds,
    radius_bounds,
    support_reduction,
    touching_count,
)
from .errors import (
    CommonPointError,
    DegenerateError,
    InvalidInputError,
    ParseError,
    PreconditionError,
    SIBError,
    SizeError,
    UnsupportedFeatureError,
)
from .geometry import Ball, Box, Halfspace, NormKind, Point, distance, project
from .oracle import GridSpec, OracleResult, closed_form, grid_search, nested_search
from .problemfile import parse_problem, serialize_problem, trace_csv
from .solver import (
    Problem,
    SolveConfig,
    SolveTrace,
    StepSchedule,
    active_set,
    gap_bound,
    objective,
    solve,
    step_size,
)

__version__ = "0.1.0"
