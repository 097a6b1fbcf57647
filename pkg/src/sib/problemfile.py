"""JSON problem files and CSV traces.

A problem file looks like::

    {"dimension": 2, "norm": "euclidean",
     "sets": [{"type": "point", "c": [0, 0]},
              {"type": "ball", "c": [3, 0], "r": 1},
              {"type": "box", "c": [0, 5], "h": 0.5},
              {"type": "halfspace", "a": [0, 1], "b": -4}],
     "start": [1, 1], "iterations": 100000,
     "step": {"family": "c_over_k", "c": 1},
     "checkpoints": [1, 10, 100]}

Only ``dimension``, ``norm`` and ``sets`` are required.  Balls are balls of
the problem norm.
"""
from __future__ import annotations

import json
from decimal import ROUND_HALF_EVEN, Decimal

from .errors import InvalidInputError, ParseError, UnsupportedFeatureError
from .geometry import Ball, Box, Halfspace, NormKind, Point
from .solver import Problem, SolveConfig, StepSchedule

TOP_KEYS = {"dimension", "norm", "sets", "start", "iterations", "step", "checkpoints"}
SET_KEYS = {
    "point": {"type", "c"},
    "ball": {"type", "c", "r"},
    "box": {"type", "c", "h"},
    "halfspace": {"type", "a", "b"},
}
STEP_KEYS = {"family", "c", "s"}
DEFAULT_ITERATIONS = 100_000


def _num(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _vec(value, dim, where):
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array of {dim} numbers, got {value!r}")
    if len(value) != dim:
        raise ParseError(f"{where}: expected {dim} entries, got {len(value)}")
    return [_num(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _parse_set(obj, i, dim):
    where = f"sets[{i}]"
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    kind = obj.get("type")
    if kind not in SET_KEYS:
        if isinstance(kind, str) and kind.endswith("_ball"):
            raise UnsupportedFeatureError(
                f"{where}.type: {kind!r} — balls are always balls of the problem norm; "
                "mixing norms is not supported"
            )
        raise ParseError(f"{where}.type: unknown set type {kind!r}")
    for key in obj:
        if key not in SET_KEYS[kind]:
            if key.endswith("_ball") or key == "norm":
                raise UnsupportedFeatureError(
                    f"{where}.{key}: cross-norm targets are not supported"
                )
            raise ParseError(f"{where}.{key}: unknown key for a {kind}")
    for key in SET_KEYS[kind]:
        if key not in obj:
            raise ParseError(f"{where}.{key}: missing")
    try:
        if kind == "point":
            return Point(_vec(obj["c"], dim, f"{where}.c"))
        if kind == "ball":
            return Ball(_vec(obj["c"], dim, f"{where}.c"), _num(obj["r"], f"{where}.r"))
        if kind == "box":
            h = obj["h"]
            h = [_num(h, f"{where}.h")] * dim if not isinstance(h, list) else _vec(h, dim, f"{where}.h")
            return Box(_vec(obj["c"], dim, f"{where}.c"), h)
        return Halfspace(_vec(obj["a"], dim, f"{where}.a"), _num(obj["b"], f"{where}.b"))
    except InvalidInputError as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_problem(data):
    """Parse a problem file (bytes or str) into ``(Problem, SolveConfig)``.

    Missing run settings get defaults: start at the centroid of the set
    centers, 100000 iterations, steps 1/k, checkpoints at powers of ten.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"problem file is not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in doc:
        if key not in TOP_KEYS:
            if key.endswith("_ball"):
                raise UnsupportedFeatureError(f"{key}: cross-norm targets are not supported")
            raise ParseError(f"{key}: unknown key")
    for key in ("dimension", "norm", "sets"):
        if key not in doc:
            raise ParseError(f"{key}: missing")

    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError(f"dimension: expected a positive integer, got {dim!r}")
    if doc["norm"] not in ("euclidean", "sum", "max"):
        raise ParseError(f"norm: expected euclidean, sum or max, got {doc['norm']!r}")
    norm = NormKind(doc["norm"])
    sets = doc["sets"]
    if not isinstance(sets, list):
        raise ParseError("sets: expected an array")
    if len(sets) < 2:
        raise ParseError(f"sets: n >= 2 required, got {len(sets)}")
    parsed = [_parse_set(obj, i, dim) for i, obj in enumerate(sets)]
    problem = Problem(dim, norm, tuple(parsed))

    if "start" in doc:
        start = _vec(doc["start"], dim, "start")
    else:
        start = problem.centroid().tolist()
    iterations = doc.get("iterations", DEFAULT_ITERATIONS)
    if isinstance(iterations, bool) or not isinstance(iterations, int) or iterations < 1:
        raise ParseError(f"iterations: expected a positive integer, got {iterations!r}")

    schedule = StepSchedule()
    if "step" in doc:
        step = doc["step"]
        if not isinstance(step, dict):
            raise ParseError("step: expected an object")
        for key in step:
            if key not in STEP_KEYS:
                raise ParseError(f"step.{key}: unknown key")
        try:
            schedule = StepSchedule(
                step.get("family", "c_over_k"),
                _num(step.get("c", 1.0), "step.c"),
                _num(step.get("s", 1.0), "step.s"),
            )
        except InvalidInputError as exc:
            raise ParseError(f"step: {exc}") from None

    checkpoints = None
    if "checkpoints" in doc:
        cps = doc["checkpoints"]
        if not isinstance(cps, list) or not all(
            isinstance(k, int) and not isinstance(k, bool) for k in cps
        ):
            raise ParseError("checkpoints: expected an array of integers")
        checkpoints = tuple(cps)
    try:
        config = SolveConfig(start, iterations, schedule, checkpoints)
    except InvalidInputError as exc:
        raise ParseError(str(exc)) from None
    return problem, config


def _num_out(v):
    f = float(v)
    return int(f) if f.is_integer() and abs(f) < 2 ** 53 else f


def problem_to_dict(problem: Problem, config: SolveConfig | None = None) -> dict:
    sets = []
    for s in problem.sets:
        if isinstance(s, Point):
            sets.append({"type": "point", "c": [_num_out(v) for v in s.c]})
        elif isinstance(s, Ball):
            sets.append({"type": "ball", "c": [_num_out(v) for v in s.c], "r": _num_out(s.r)})
        elif isinstance(s, Box):
            sets.append({"type": "box", "c": [_num_out(v) for v in s.c],
                         "h": [_num_out(v) for v in s.h]})
        else:
            sets.append({"type": "halfspace", "a": [_num_out(v) for v in s.a], "b": _num_out(s.b)})
    doc = {"dimension": problem.dimension, "norm": problem.norm.value, "sets": sets}
    if config is not None:
        doc["start"] = [_num_out(v) for v in config.start]
        doc["iterations"] = config.iterations
        doc["step"] = {"family": config.schedule.family, "c": _num_out(config.schedule.c),
                       "s": _num_out(config.schedule.s)}
        doc["checkpoints"] = list(config.checkpoints)
    return doc


def serialize_problem(problem: Problem, config: SolveConfig | None = None) -> bytes:
    return json.dumps(problem_to_dict(problem, config), indent=2).encode("utf-8")


# ---------------------------------------------------------------------------
# trace output

_Q = Decimal("0.00001")


def fmt5(value: float) -> str:
    """Fixed 5-decimal string, round-half-even on the exact binary value."""
    text = str(Decimal(float(value)).quantize(_Q, rounding=ROUND_HALF_EVEN))
    return "0.00000" if text == "-0.00000" else text


def trace_csv(trace, dimension: int) -> str:
    header = ["k"] + [f"x{j + 1}" for j in range(dimension)] + ["V"]
    lines = [",".join(header)]
    for row in trace.rows:
        lines.append(",".join([str(row.k)] + [fmt5(v) for v in row.x] + [fmt5(row.V)]))
    return "\n".join(lines) + "\n"
