"""Compare the compiled and numpy backends of the exponential-sum kernel.

Usage: python benchmarks/bench_core.py [--nodes M] [--points N] [--repeat R]
"""

import argparse
import time

import numpy as np

from whasym import core


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run(nodes, points, repeat):
    rng = np.random.default_rng(7)
    coef = rng.standard_normal(nodes) + 1j * rng.standard_normal(nodes)
    rate = -np.abs(rng.standard_normal(nodes)) - 1j * rng.uniform(-30.0, 30.0, nodes)
    h = 20.0 / points
    t = h * np.arange(points)
    cases = {
        "exp_sum": lambda b: core.exp_sum(coef, rate, t, backend=b),
        "exp_sum_uniform": lambda b: core.exp_sum_uniform(coef, rate, 0.0, h, points, backend=b),
    }
    print(f"{nodes} nodes x {points} points, best of {repeat}, threads={core.thread_count()}")
    results = {}
    for name, fn in cases.items():
        ref = fn("python")
        row = {"python": _time(lambda: fn("python"), repeat)}
        if core.BACKEND == "compiled":
            row["compiled"] = _time(lambda: fn("compiled"), repeat)
            diff = np.max(np.abs(fn("compiled") - ref)) / np.max(np.abs(ref))
        for backend, sec in row.items():
            print(f"  {name:16s} {backend:9s} {sec * 1e3:9.2f} ms  {nodes * points / sec / 1e6:8.1f} Mterm/s")
        if "compiled" in row:
            print(f"  {name:16s} speedup   {row['python'] / row['compiled']:9.2f}x  rel diff {diff:.1e}")
        else:
            print("  compiled backend unavailable; build with `pip install -e . --no-build-isolation`")
        results[name] = row
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=20000)
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    run(args.nodes, args.points, args.repeat)


if __name__ == "__main__":
    main()
