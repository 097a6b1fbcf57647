# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: objective evaluation and the subgradient iteration.

Mirrors ``sib._purepy`` operation for operation; both must stay
bit-identical (see tests/test_backends.py).  Built without fast-math and
with FP contraction disabled.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, pow

cnp.import_array()

# set kinds, shared with sib.backend
DEF KIND_BOX = 0
DEF KIND_BALL = 1
DEF KIND_HALF = 2

DEF NORM_EUC = 0
DEF NORM_SUM = 1
DEF NORM_MAX = 2


cdef inline double _sign(double v) noexcept nogil:
    if v > 0:
        return 1.0
    if v < 0:
        return -1.0
    return 0.0


cdef double _dist(int norm, int kind, const double[:, ::1] center,
                  const double[:, ::1] half, const double[::1] scal,
                  const double[::1] dual, Py_ssize_t i,
                  const double* x, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t j
    cdef double acc = 0.0
    cdef double d
    if kind == KIND_HALF:
        for j in range(m):
            acc += center[i, j] * x[j]
        d = acc - scal[i]
        if d < 0:
            d = 0.0
        return d / dual[i]
    for j in range(m):
        d = fabs(x[j] - center[i, j])
        if kind == KIND_BOX:
            d = d - half[i, j]
            if d < 0:
                d = 0.0
        if norm == NORM_EUC:
            acc += d * d
        elif norm == NORM_SUM:
            acc += d
        elif d > acc:
            acc = d
    if norm == NORM_EUC:
        acc = sqrt(acc)
    if kind == KIND_BALL:
        acc = acc - scal[i]
        if acc < 0:
            acc = 0.0
    return acc


cdef double _objective(int norm, const int[::1] kind, const double[:, ::1] center,
                       const double[:, ::1] half, const double[::1] scal,
                       const double[::1] dual, const double* x, Py_ssize_t m,
                       Py_ssize_t* arg) noexcept nogil:
    cdef Py_ssize_t i, n = kind.shape[0]
    cdef double best = -1.0
    cdef double d
    for i in range(n):
        d = _dist(norm, kind[i], center, half, scal, dual, i, x, m)
        if d > best:
            best = d
            arg[0] = i
    return best


cdef void _subgradient(int norm, int kind, const double[:, ::1] center,
                       const double[:, ::1] half, const double[::1] dual,
                       Py_ssize_t i, const double* x, double* g,
                       Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t j, jbest
    cdef double diff, lo, hi, w, nrm, mag, top
    if kind == KIND_HALF:
        for j in range(m):
            g[j] = center[i, j] / dual[i]
        return
    if norm == NORM_EUC:
        nrm = 0.0
        for j in range(m):
            if kind == KIND_BOX:
                lo = center[i, j] - half[i, j]
                hi = center[i, j] + half[i, j]
                w = x[j]
                if w < lo:
                    w = lo
                if w > hi:
                    w = hi
                diff = x[j] - w
            else:
                diff = x[j] - center[i, j]
            g[j] = diff
            nrm += diff * diff
        nrm = sqrt(nrm)
        for j in range(m):
            g[j] = g[j] / nrm
        return
    if norm == NORM_SUM:
        for j in range(m):
            diff = x[j] - center[i, j]
            if kind == KIND_BOX:
                mag = fabs(diff) - half[i, j]
                g[j] = _sign(diff) if mag > 0 else 0.0
            else:
                g[j] = _sign(diff)
        return
    # max norm: single coordinate of largest deficit, smallest index on ties
    top = -1.0
    jbest = 0
    for j in range(m):
        mag = fabs(x[j] - center[i, j])
        if kind == KIND_BOX:
            mag = mag - half[i, j]
            if mag < 0:
                mag = 0.0
        if mag > top:
            top = mag
            jbest = j
    for j in range(m):
        g[j] = 0.0
    g[jbest] = _sign(x[jbest] - center[i, jbest])


def objective_many(int norm, const int[::1] kind, const double[:, ::1] center,
                   const double[:, ::1] half, const double[::1] scal,
                   const double[::1] dual, const double[:, ::1] points):
    """D at every row of ``points``."""
    cdef Py_ssize_t p, npts = points.shape[0], m = points.shape[1]
    cdef Py_ssize_t arg = 0
    out = np.empty(npts, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for p in range(npts):
            ov[p] = _objective(norm, kind, center, half, scal, dual,
                               &points[p, 0], m, &arg)
    return out


def run_subgradient(int norm, const int[::1] kind, const double[:, ::1] center,
                    const double[:, ::1] half, const double[::1] scal,
                    const double[::1] dual, const double[::1] x0,
                    long long iterations, double c, double s,
                    const long long[::1] checkpoints,
                    double early_tol, long long early_window,
                    double active_tol=0.0):
    """Run ``iterations`` subgradient steps from ``x0``.

    Returns ``(cp_k, cp_x, cp_v, best_x, best_v, best_k, last_k, status)``
    where ``status`` is 0 on normal completion, 1 when an iterate with
    D == 0 was hit (it is then ``best_x`` with ``best_v == 0``) and 2 on
    early stop.  Rows are the checkpoints reached, plus the stopping
    iteration on early stop.
    """
    cdef Py_ssize_t m = x0.shape[0]
    cdef Py_ssize_t ncp = checkpoints.shape[0]
    cdef Py_ssize_t j, ci = 0, nrows = 0, arg = 0
    cdef Py_ssize_t i, n = kind.shape[0]
    cdef long long k, last_k = 0, best_k = 0, last_improve = 1
    cdef double v, alpha, best_v = -1.0, ref_v = 0.0
    cdef int status = 0
    cdef bint early = early_tol >= 0 and early_window > 0

    x_arr = np.array(x0, dtype=np.float64)
    g_arr = np.zeros(m, dtype=np.float64)
    best_arr = np.array(x0, dtype=np.float64)
    cp_k = np.zeros(ncp + 1, dtype=np.int64)
    cp_x = np.zeros((ncp + 1, m), dtype=np.float64)
    cp_v = np.zeros(ncp + 1, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] g = g_arr
    cdef double[::1] bx = best_arr
    cdef long long[::1] rk = cp_k
    cdef double[:, ::1] rx = cp_x
    cdef double[::1] rv = cp_v

    with nogil:
        k = 1
        while k <= iterations:
            last_k = k
            v = _objective(norm, kind, center, half, scal, dual, &x[0], m, &arg)
            if best_v < 0 or v < best_v:
                best_v = v
                best_k = k
                for j in range(m):
                    bx[j] = x[j]
            if v <= 0:
                status = 1
                break
            while ci < ncp and checkpoints[ci] < k:
                ci += 1
            if ci < ncp and checkpoints[ci] == k:
                rk[nrows] = k
                for j in range(m):
                    rx[nrows, j] = x[j]
                rv[nrows] = best_v
                nrows += 1
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
                for i in range(n):
                    if _dist(norm, kind[i], center, half, scal, dual, i,
                             &x[0], m) >= v - active_tol:
                        arg = i
                        break
            _subgradient(norm, kind[arg], center, half, dual, arg, &x[0], &g[0], m)
            if s == 1.0:
                alpha = c / <double>k
            else:
                alpha = c / pow(<double>k, s)
            for j in range(m):
                x[j] = x[j] - alpha * g[j]
            k += 1
        if status != 0 and (nrows == 0 or rk[nrows - 1] != last_k):
            rk[nrows] = last_k
            for j in range(m):
                rx[nrows, j] = x[j]
            rv[nrows] = best_v
            nrows += 1

    return (cp_k[:nrows].copy(), cp_x[:nrows].copy(), cp_v[:nrows].copy(),
            best_arr, best_v, best_k, last_k, status)
