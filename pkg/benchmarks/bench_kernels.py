"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--iters N] [--points N] [--repeat R]

Runs the subgradient loop on the Figure 3 instance (seven euclidean boxes)
and a batch objective evaluation, once per backend, and checks that both
backends return identical numbers.
"""
import argparse
import statistics
import time
from pathlib import Path

import numpy as np

from sib import backend
from sib.problemfile import parse_problem
from sib.solver import SolveConfig, solve

DATA = Path(__file__).resolve().parent.parent / "data"


def best_of(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iters", type=int, default=200_000)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    problem, _ = parse_problem((DATA / "fig3.json").read_bytes())
    config = SolveConfig((2, 2), args.iters)
    pts = np.random.default_rng(0).uniform(-10, 10, (args.points, 2))
    packed = problem.packed()

    names = ["python"]
    try:
        backend.get_kernels("cython")
        names.insert(0, "cython")
    except ImportError:
        print("compiled extension not built; timing the fallback only")

    rows, results = [], {}
    for name in names:
        kern = backend.get_kernels(name)
        s_best, s_med, trace = best_of(lambda: solve(problem, config, kernels=kern), args.repeat)
        o_best, o_med, vals = best_of(lambda: kern.objective_many(*packed, pts), args.repeat)
        results[name] = (trace, vals)
        rows.append((name, s_best, args.iters / s_best, o_best, args.points / o_best))

    print(f"{'backend':8} {'solve [s]':>10} {'iter/s':>12} {'objective [s]':>14} {'points/s':>12}")
    for name, s, sr, o, orate in rows:
        print(f"{name:8} {s:10.4f} {sr:12.3e} {o:14.4f} {orate:12.3e}")
    if len(rows) == 2:
        print(f"speedup: solve x{rows[1][1] / rows[0][1]:.1f}, objective x{rows[1][3] / rows[0][3]:.1f}")
        (ta, va), (tb, vb) = results["cython"], results["python"]
        same = ta.rows == tb.rows and va.tobytes() == vb.tobytes()
        print(f"identical results: {same}")


if __name__ == "__main__":
    main()
