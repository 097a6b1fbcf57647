"""Pure-Python kernels, used when the compiled extension is unavailable.

Same contract and the same floating-point operation order as
``_speedups.pyx``; results are bit-identical.  ``objective_many`` is
vectorised over points with numpy but accumulates coordinates in the same
sequential order as the scalar code.
"""
import math

import numpy as np

KIND_BOX = 0
KIND_BALL = 1
KIND_HALF = 2

NORM_EUC = 0
NORM_SUM = 1
NORM_MAX = 2


def _sign(v):
    if v > 0:
        return 1.0
    if v < 0:
        return -1.0
    return 0.0


def _dist(norm, kind, c, h, scal, dual, x, m):
    acc = 0.0
    if kind == KIND_HALF:
        for j in range(m):
            acc += c[j] * x[j]
        d = acc - scal
        if d < 0:
            d = 0.0
        return d / dual
    for j in range(m):
        d = math.fabs(x[j] - c[j])
        if kind == KIND_BOX:
            d = d - h[j]
            if d < 0:
                d = 0.0
        if norm == NORM_EUC:
            acc += d * d
        elif norm == NORM_SUM:
            acc += d
        elif d > acc:
            acc = d
    if norm == NORM_EUC:
        acc = math.sqrt(acc)
    if kind == KIND_BALL:
        acc = acc - scal
        if acc < 0:
            acc = 0.0
    return acc


def _objective(norm, sets, x, m):
    best = -1.0
    arg = 0
    for i, (kind, c, h, scal, dual) in enumerate(sets):
        d = _dist(norm, kind, c, h, scal, dual, x, m)
        if d > best:
            best = d
            arg = i
    return best, arg


def _subgradient(norm, kind, c, h, dual, x, m):
    if kind == KIND_HALF:
        return [c[j] / dual for j in range(m)]
    if norm == NORM_EUC:
        g = [0.0] * m
        nrm = 0.0
        for j in range(m):
            if kind == KIND_BOX:
                lo = c[j] - h[j]
                hi = c[j] + h[j]
                w = x[j]
                if w < lo:
                    w = lo
                if w > hi:
                    w = hi
                diff = x[j] - w
            else:
                diff = x[j] - c[j]
            g[j] = diff
            nrm += diff * diff
        nrm = math.sqrt(nrm)
        return [gj / nrm for gj in g]
    if norm == NORM_SUM:
        g = [0.0] * m
        for j in range(m):
            diff = x[j] - c[j]
            if kind == KIND_BOX:
                mag = math.fabs(diff) - h[j]
                g[j] = _sign(diff) if mag > 0 else 0.0
            else:
                g[j] = _sign(diff)
        return g
    top = -1.0
    jbest = 0
    for j in range(m):
        mag = math.fabs(x[j] - c[j])
        if kind == KIND_BOX:
            mag = mag - h[j]
            if mag < 0:
                mag = 0.0
        if mag > top:
            top = mag
            jbest = j
    g = [0.0] * m
    g[jbest] = _sign(x[jbest] - c[jbest])
    return g


def _unpack(kind, center, half, scal, dual):
    return [
        (int(kind[i]), [float(t) for t in center[i]], [float(t) for t in half[i]],
         float(scal[i]), float(dual[i]))
        for i in range(len(kind))
    ]


def objective_many(norm, kind, center, half, scal, dual, points):
    points = np.asarray(points, dtype=np.float64)
    npts, m = points.shape
    best = np.full(npts, -1.0)
    for i in range(len(kind)):
        k = int(kind[i])
        acc = np.zeros(npts)
        if k == KIND_HALF:
            for j in range(m):
                acc += center[i, j] * points[:, j]
            d = np.maximum(acc - scal[i], 0.0) / dual[i]
        else:
            for j in range(m):
                d = np.abs(points[:, j] - center[i, j])
                if k == KIND_BOX:
                    d = np.maximum(d - half[i, j], 0.0)
                if norm == NORM_EUC:
                    acc += d * d
                elif norm == NORM_SUM:
                    acc += d
                else:
                    acc = np.maximum(acc, d)
            if norm == NORM_EUC:
                acc = np.sqrt(acc)
            if k == KIND_BALL:
                acc = np.maximum(acc - scal[i], 0.0)
            d = acc
        best = np.maximum(best, d)
    return best


def run_subgradient(norm, kind, center, half, scal, dual, x0, iterations, c, s,
                    checkpoints, early_tol, early_window, active_tol=0.0):
    sets = _unpack(kind, center, half, scal, dual)
    m = len(x0)
    x = [float(t) for t in x0]
    best_x = list(x)
    checkpoints = [int(t) for t in checkpoints]
    ncp = len(checkpoints)
    rows_k, rows_x, rows_v = [], [], []
    ci = 0
    best_v = -1.0
    best_k = 0
    last_k = 0
    status = 0
    ref_v = 0.0
    last_improve = 1
    early = early_tol >= 0 and early_window > 0
    norm = int(norm)

    k = 1
    while k <= iterations:
        last_k = k
        v, arg = _objective(norm, sets, x, m)
        if best_v < 0 or v < best_v:
            best_v = v
            best_k = k
            best_x = list(x)
        if v <= 0:
            status = 1
            break
        while ci < ncp and checkpoints[ci] < k:
            ci += 1
        if ci < ncp and checkpoints[ci] == k:
            rows_k.append(k)
            rows_x.append(list(x))
            rows_v.append(best_v)
            ci += 1
        if early:
            if k == 1 or best_v < ref_v - early_tol:
                ref_v = best_v
                last_improve = k
            elif k - last_improve >= early_window:
                status = 2
                break
        if k == iterations:
            break
        if active_tol > 0:
            for i, (kd, cc, hh, sc, du) in enumerate(sets):
                if _dist(norm, kd, cc, hh, sc, du, x, m) >= v - active_tol:
                    arg = i
                    break
        kind_i, ci_c, ci_h, _, ci_dual = sets[arg]
        g = _subgradient(norm, kind_i, ci_c, ci_h, ci_dual, x, m)
        if s == 1.0:
            alpha = c / float(k)
        else:
            alpha = c / math.pow(float(k), s)
        for j in range(m):
            x[j] = x[j] - alpha * g[j]
        k += 1
    if status != 0 and (not rows_k or rows_k[-1] != last_k):
        rows_k.append(last_k)
        rows_x.append(list(x))
        rows_v.append(best_v)

    return (np.array(rows_k, dtype=np.int64),
            np.array(rows_x, dtype=np.float64).reshape(len(rows_k), m),
            np.array(rows_v, dtype=np.float64),
            np.array(best_x, dtype=np.float64), best_v, best_k, last_k, status)
