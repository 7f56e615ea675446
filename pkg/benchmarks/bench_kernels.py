"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Both backends
are timed on the same workloads and their answers are checked for equality.
"""

from __future__ import annotations

import argparse
import itertools
import random
import statistics
import time
from fractions import Fraction

from lconvex import _kernels_py, kernels, mcmf
from lconvex.graphcore import random_tree
from lconvex.gridconvex import GridFunction, TreeGrid, is_lconvex

try:
    from lconvex import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def lconvex_workload(seed: int):
    rng = random.Random(seed)
    tree = random_tree(9, rng)
    grid = TreeGrid(tree, 2)
    a, b = rng.randrange(9), rng.randrange(9)
    zz = grid.base

    def fn(x):
        return Fraction(zz.dist(x[0], a) + 2 * zz.dist(x[1], b) + zz.dist(x[0], x[1]))

    g = GridFunction.from_callable(grid, itertools.product(range(9), repeat=2), fn)
    return lambda: is_lconvex(grid, g)


def dual_workload(seed: int):
    rng = random.Random(seed)
    insts = [mcmf.random_instance(rng, 6, 3) for _ in range(10)]
    return lambda: [mcmf.dual_brute_force(inst, 4).omega for inst in insts]


def timed(fn, repeat: int):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = [("numpy", _kernels_py)]
    if _compiled is not None:
        backends.append(("compiled", _compiled))
    else:
        print("compiled extension not available; timing the fallback only")
    workloads = [("midpoint pair scan (81 points)", lconvex_workload(1)), ("dual enumeration (10 x n=6, radius 4)", dual_workload(2))]
    saved = kernels._impl
    try:
        for name, work in workloads:
            results = {}
            for label, impl in backends:
                kernels._impl = impl
                results[label] = timed(work, args.repeat)
            line = ", ".join(f"{label} {sec * 1e3:9.2f} ms" for label, (sec, _) in results.items())
            if len(results) == 2:
                (t0, r0), (t1, r1) = results["numpy"], results["compiled"]
                assert r0 == r1, f"backends disagree on {name}"
                line += f", speed-up x{t0 / t1:.1f}"
            print(f"{name:40s} {line}")
    finally:
        kernels._impl = saved


if __name__ == "__main__":
    main()
