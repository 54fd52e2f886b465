"""Compare the compiled and numpy shot-noise kernels.

Usage: python benchmarks/bench_kernels.py [--reps R] [--terms n] [--grid G]

Prints the wall time per call and per kernel evaluation for each backend,
the speed-up, and the largest absolute difference between their outputs.
"""

import argparse
import time

import numpy as np

from ftsm import _kernels_py
from ftsm.kernel import KernelParams, kernel_table

try:
    from ftsm import _kernels_ext
except ImportError:
    _kernels_ext = None


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--terms", type=int, default=500)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    gen = np.random.default_rng(0)
    times = np.sort(gen.uniform(1e-9, 1.0, (args.reps, args.terms)), axis=1)
    weights = gen.standard_normal((args.reps, args.terms, 1))
    grid = np.linspace(0.0, 1.0, args.grid + 1)[1:]
    evals = args.reps * args.terms * grid.size / 2  # sorted rows stop at t on average halfway

    print(f"R={args.reps} n={args.terms} G={grid.size}  (~{evals:.3g} kernel evaluations per call)")
    for H, alpha in ((0.8, 1.6), (0.6, 1.9), (1.6, 0.7)):
        table = kernel_table(KernelParams(H, alpha))
        t_py, out_py = _time(lambda: _kernels_py.kernel_weighted_sum(weights, times, grid, table), args.repeat)
        line = f"H={H} alpha={alpha}  python {t_py * 1e3:9.2f} ms ({t_py / evals * 1e9:6.1f} ns/eval)"
        if _kernels_ext is not None:
            t_cy, out_cy = _time(lambda: _kernels_ext.kernel_weighted_sum(weights, times, grid, table), args.repeat)
            diff = float(np.max(np.abs(out_cy - out_py)))
            line += (f"  cython {t_cy * 1e3:9.2f} ms ({t_cy / evals * 1e9:6.1f} ns/eval)"
                     f"  speed-up {t_py / t_cy:5.1f}x  max|diff| {diff:.2e}")
        else:
            line += "  cython extension not built"
        print(line)


if __name__ == "__main__":
    main()
