"""Norms, target sets, distances, projections and distance subgradients.

Three norms on R^m are supported (``euclidean``, ``sum`` and ``max``) and
four kinds of closed convex target: a point, a ball of the problem norm,
an axis-aligned box and a halfspace ``{y : <a, y> <= b}``.  Every formula
here is closed form.

Nearest points under the sum and max norms are generally not unique.  The
selections below are deterministic and always return a member of the
nearest-point set, so the subgradient built from them is valid.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidInputError, PreconditionError

MEMBERSHIP_TOL = 1e-12


class NormKind(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    SUM = "sum"
    MAX = "max"

    @property
    def dual(self) -> "NormKind":
        if self is NormKind.SUM:
            return NormKind.MAX
        if self is NormKind.MAX:
            return NormKind.SUM
        return NormKind.EUCLIDEAN

    @classmethod
    def parse(cls, value) -> "NormKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(
                f"unknown norm {value!r}; expected one of euclidean, sum, max"
            ) from None


def as_vector(v, dim: int | None = None, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a finite 1-D float array, optionally of length ``dim``."""
    try:
        arr = np.asarray(v, dtype=float)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} is not numeric: {v!r}") from None
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries: {arr.tolist()}")
    if dim is not None and arr.shape[0] != dim:
        raise InvalidInputError(
            f"{name} has dimension {arr.shape[0]}, expected {dim}"
        )
    return arr


def _coords(v, name) -> tuple:
    arr = as_vector(v, name=name)
    if arr.shape[0] == 0:
        raise InvalidInputError(f"{name} must have at least one coordinate")
    return tuple(float(t) for t in arr)


# ---------------------------------------------------------------------------
# target sets


@dataclass(frozen=True)
class Point:
    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", _coords(self.c, "point c"))

    @property
    def dimension(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class Ball:
    """Closed ball of the *problem* norm; ``r == 0`` is the point ``c``."""

    c: tuple
    r: float

    def __post_init__(self):
        object.__setattr__(self, "c", _coords(self.c, "ball c"))
        r = float(self.r)
        if not np.isfinite(r) or r < 0:
            raise InvalidInputError(f"ball radius must be finite and >= 0, got {self.r!r}")
        object.__setattr__(self, "r", r)

    @property
    def dimension(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod [c_i - h_i, c_i + h_i]``."""

    c: tuple
    h: tuple

    def __post_init__(self):
        c = _coords(self.c, "box c")
        h = self.h
        if np.isscalar(h):
            h = [h] * len(c)
        h = _coords(h, "box h")
        if len(h) != len(c):
            raise InvalidInputError(
                f"box h has dimension {len(h)}, expected {len(c)}"
            )
        if min(h) <= 0:
            raise InvalidInputError(f"box half-widths must be positive, got {list(h)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "h", h)

    @property
    def dimension(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class Halfspace:
    """The set ``{y : <a, y> <= b}``."""

    a: tuple
    b: float

    def __post_init__(self):
        a = _coords(self.a, "halfspace a")
        if not any(a):
            raise InvalidInputError("halfspace normal must be nonzero")
        b = float(self.b)
        if not np.isfinite(b):
            raise InvalidInputError(f"halfspace offset must be finite, got {self.b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dimension(self) -> int:
        return len(self.a)


TargetSet = Union[Point, Ball, Box, Halfspace]


def set_center(s: TargetSet) -> np.ndarray:
    """A representative point of ``s``: its center, or for a halfspace the
    point of its boundary plane closest to the origin."""
    if isinstance(s, Halfspace):
        a = np.asarray(s.a)
        return a * (s.b / float(a @ a))
    return np.asarray(s.c, dtype=float)


def set_extent(norm: NormKind, s: TargetSet) -> float:
    """Distance from :func:`set_center` to the farthest point of ``s``
    (zero for halfspaces, whose extent is unbounded)."""
    if isinstance(s, Ball):
        return s.r
    if isinstance(s, Box):
        return norm_eval(norm, s.h)
    return 0.0


def contains(s: TargetSet, y, norm: NormKind = NormKind.EUCLIDEAN,
             tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership test with absolute tolerance ``tol``."""
    y = as_vector(y, s.dimension, "y")
    if isinstance(s, Point):
        return bool(np.all(np.abs(y - np.asarray(s.c)) <= tol))
    if isinstance(s, Ball):
        return norm_eval(norm, y - np.asarray(s.c)) <= s.r + tol
    if isinstance(s, Box):
        return bool(np.all(np.abs(y - np.asarray(s.c)) <= np.asarray(s.h) + tol))
    return float(np.dot(s.a, y)) <= s.b + tol


# ---------------------------------------------------------------------------
# norms


def _norm(norm: NormKind, v: np.ndarray) -> float:
    if norm is NormKind.EUCLIDEAN:
        return float(np.sqrt(np.dot(v, v)))
    if norm is NormKind.SUM:
        return float(np.sum(np.abs(v)))
    return float(np.max(np.abs(v))) if v.size else 0.0


def norm_eval(norm, v) -> float:
    """||v|| under ``norm``.

    >>> norm_eval("sum", [3, -4])
    7.0
    """
    return _norm(NormKind.parse(norm), as_vector(v, name="v"))


def dual_norm_eval(norm, v) -> float:
    """||v||_* : the euclidean norm is self-dual, sum and max are dual to
    each other."""
    return _norm(NormKind.parse(norm).dual, as_vector(v, name="v"))


def norm_subdifferential_contains(norm, v, g, tol: float = 1e-9) -> bool:
    """Whether ``g`` is in the subdifferential of the norm at ``v``.

    Uses the characterisation ``||g||_* <= 1`` and ``<g, v> = ||v||``.
    """
    norm = NormKind.parse(norm)
    v = as_vector(v, name="v")
    g = as_vector(g, v.shape[0], "g")
    if _norm(norm.dual, g) > 1.0 + tol:
        return False
    return float(np.dot(g, v)) >= _norm(norm, v) - tol


# ---------------------------------------------------------------------------
# distance, projection, subgradient


@dataclass(frozen=True)
class ProjectionResult:
    omega: np.ndarray
    dist: float


def _check(norm, s: TargetSet, x):
    norm = NormKind.parse(norm)
    x = as_vector(x, s.dimension, "x")
    return norm, x


def _deficits(s: TargetSet, x: np.ndarray) -> np.ndarray:
    # per-axis distance outside the box (a point is a box of zero width)
    h = np.asarray(s.h) if isinstance(s, Box) else 0.0
    return np.maximum(np.abs(x - np.asarray(s.c)) - h, 0.0)


def distance(norm, s: TargetSet, x) -> float:
    """d(x; s) = inf { ||x - w|| : w in s }."""
    norm, x = _check(norm, s, x)
    if isinstance(s, Ball):
        return max(_norm(norm, x - np.asarray(s.c)) - s.r, 0.0)
    if isinstance(s, Halfspace):
        a = np.asarray(s.a)
        return max(float(np.dot(a, x)) - s.b, 0.0) / _norm(norm.dual, a)
    return _norm(norm, _deficits(s, x))


def project(norm, s: TargetSet, x) -> ProjectionResult:
    """A nearest point of ``s`` to ``x`` and the distance."""
    norm, x = _check(norm, s, x)
    if isinstance(s, Point):
        omega = np.asarray(s.c, dtype=float)
    elif isinstance(s, Box):
        c, h = np.asarray(s.c), np.asarray(s.h)
        omega = np.clip(x, c - h, c + h)
    elif isinstance(s, Ball):
        c = np.asarray(s.c)
        t = _norm(norm, x - c)
        omega = x.copy() if t <= s.r else c + (s.r / t) * (x - c)
    else:
        a = np.asarray(s.a)
        excess = float(np.dot(a, x)) - s.b
        if excess <= 0:
            omega = x.copy()
        elif norm is NormKind.EUCLIDEAN:
            omega = x - (excess / float(np.dot(a, a))) * a
        elif norm is NormKind.SUM:
            j = int(np.argmax(np.abs(a)))
            omega = x.copy()
            omega[j] -= excess / a[j]
        else:
            omega = x - (excess / float(np.sum(np.abs(a)))) * np.sign(a)
    return ProjectionResult(omega=omega, dist=distance(norm, s, x))


def distance_subgradient(norm, s: TargetSet, x) -> np.ndarray:
    """One element of the subdifferential of ``d(.; s)`` at ``x`` outside ``s``.

    Ties are broken toward the smallest index (max norm) and toward 0 for a
    zero component (sum norm).
    """
    norm, x = _check(norm, s, x)
    dist = distance(norm, s, x)
    if dist <= 0:
        raise PreconditionError(
            f"subgradient requested at x={x.tolist()} which lies in the target set"
        )
    if isinstance(s, Halfspace):
        a = np.asarray(s.a, dtype=float)
        return a / _norm(norm.dual, a)
    if norm is NormKind.EUCLIDEAN:
        w = project(norm, s, x).omega
        diff = x - w
        return diff / _norm(norm, diff)

    diff = x - np.asarray(s.c)
    if isinstance(s, Ball):
        mag = np.abs(diff)
        active = mag > 0
    else:
        mag = _deficits(s, x)
        active = mag > 0
    if norm is NormKind.SUM:
        return np.where(active, np.sign(diff), 0.0)
    j = int(np.argmax(mag))
    g = np.zeros_like(x)
    g[j] = np.sign(diff[j])
    return g


def subgradient_extremes(norm, s: TargetSet, x, tol: float = 0.0) -> list:
    """Every subgradient selection the tie-breaking rules could emit at ``x``.

    Coordinates whose tie status is within ``tol`` are enumerated both ways,
    so the result lists extreme points of ``d(.; s)``'s subdifferential as
    seen by :func:`distance_subgradient` (duplicates removed, order fixed).
    For the euclidean norm and halfspaces there is exactly one.
    """
    norm, x = _check(norm, s, x)
    if norm is NormKind.EUCLIDEAN or isinstance(s, Halfspace):
        return [distance_subgradient(norm, s, x)]
    if distance(norm, s, x) <= 0:
        raise PreconditionError(
            f"subgradient requested at x={x.tolist()} which lies in the target set"
        )
    diff = x - np.asarray(s.c)
    sign = np.where(diff >= 0, 1.0, -1.0)
    if isinstance(s, Ball):
        mag = np.abs(diff)
    else:
        mag = _deficits(s, x)
    m = x.shape[0]
    out = []
    if norm is NormKind.SUM:
        choices = []
        for i in range(m):
            if mag[i] > tol:
                choices.append((float(np.sign(diff[i])),))
            elif isinstance(s, (Ball, Point)):
                # zero component of x - c: any value in [-1, 1]
                choices.append((-1.0, 0.0, 1.0))
            elif abs(abs(diff[i]) - _halfwidth(s, i)) <= tol:
                # x sits on the face plane: normal cone admits 0 or the sign
                choices.append((0.0, sign[i]))
            else:
                choices.append((0.0,))
        for combo in itertools.product(*choices):
            out.append(np.array(combo, dtype=float))
    else:
        top = float(np.max(mag))
        for j in range(m):
            if mag[j] >= top - tol and mag[j] > 0:
                g = np.zeros(m)
                g[j] = sign[j]
                out.append(g)
    uniq = []
    for g in out:
        if not any(np.array_equal(g, u) for u in uniq):
            uniq.append(g)
    return uniq


def _halfwidth(s: TargetSet, i: int) -> float:
    return s.h[i] if isinstance(s, Box) else 0.0


def sets_dimension(sets: Sequence[TargetSet]) -> int:
    dims = {s.dimension for s in sets}
    if len(dims) != 1:
        raise InvalidInputError(f"target sets have mixed dimensions {sorted(dims)}")
    return dims.pop()
