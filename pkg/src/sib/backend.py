"""Kernel backend selection and problem packing.

The compiled ``_speedups`` extension is used when it imports; otherwise
the pure-Python ``_purepy`` module.  Set ``SIB_PURE_PYTHON=1`` to force the
fallback.  Both expose ``objective_many`` and ``run_subgradient`` over the
flat arrays produced by :func:`pack`.
"""
import os

import numpy as np

from . import _purepy
from .geometry import Ball, Box, Halfspace, NormKind, Point

NORM_CODES = {NormKind.EUCLIDEAN: 0, NormKind.SUM: 1, NormKind.MAX: 2}

try:
    if os.environ.get("SIB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python requested")
    from . import _speedups as _compiled
except ImportError:
    _compiled = None

kernels = _compiled if _compiled is not None else _purepy
BACKEND = "cython" if _compiled is not None else "python"


def get_kernels(name=None):
    """Kernel module by name (``"cython"`` or ``"python"``); default is the
    one selected at import."""
    if name is None:
        return kernels
    if name == "python":
        return _purepy
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled extension sib._speedups is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def pack(norm, sets):
    """Flatten target sets into ``(norm_code, kind, center, half, scal, dual)``.

    Points become zero-width boxes.  ``center`` holds the normal ``a`` for
    halfspaces, ``scal`` the ball radius or halfspace offset, ``dual`` the
    dual norm of ``a``.
    """
    norm = NormKind.parse(norm)
    n = len(sets)
    m = sets[0].dimension
    kind = np.zeros(n, dtype=np.intc)
    center = np.zeros((n, m))
    half = np.zeros((n, m))
    scal = np.zeros(n)
    dual = np.ones(n)
    for i, s in enumerate(sets):
        if isinstance(s, Point):
            center[i] = s.c
        elif isinstance(s, Box):
            center[i] = s.c
            half[i] = s.h
        elif isinstance(s, Ball):
            kind[i] = 1
            center[i] = s.c
            scal[i] = s.r
        elif isinstance(s, Halfspace):
            kind[i] = 2
            a = np.asarray(s.a)
            center[i] = a
            scal[i] = s.b
            if norm is NormKind.EUCLIDEAN:
                dual[i] = float(np.sqrt(np.dot(a, a)))
            elif norm is NormKind.SUM:
                dual[i] = float(np.max(np.abs(a)))
            else:
                dual[i] = float(np.sum(np.abs(a)))
        else:
            raise TypeError(f"unsupported target set {s!r}")
    return NORM_CODES[norm], kind, center, half, scal, dual
