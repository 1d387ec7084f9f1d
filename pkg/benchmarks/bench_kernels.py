#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy twins.

The two hot kernels are the pairwise squared-distance sweep (gradient and
smoothness evaluations) and the capped-simplex projection (every window,
every iteration).  Run directly:

    python benchmarks/bench_kernels.py

Pass --repeat to change the number of timed calls per case.
"""

import argparse
import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from tvglearn import _kernels  # noqa: E402


def _time(fn, *args, repeat):
    fn(*args)  # warmup (and JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def bench_pairwise(repeat):
    print("pairwise_sq_dists (n nodes, s samples)")
    print(f"{'case':>16} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    rng = np.random.default_rng(0)
    for n, s in ((20, 200), (50, 200), (100, 300), (200, 500)):
        x = rng.normal(size=(n, s))
        t_nb = _time(_kernels.pairwise_sq_dists_numba, x, repeat=repeat)
        t_np = _time(_kernels.pairwise_sq_dists_numpy, x, repeat=repeat)
        print(f"{f'n={n} s={s}':>16} {t_nb * 1e6:>10.1f}us {t_np * 1e6:>10.1f}us "
              f"{t_np / t_nb:>8.2f}x")


def bench_projection(repeat):
    print("\ncapped_simplex_project (m edges)")
    print(f"{'case':>16} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    rng = np.random.default_rng(1)
    for m in (190, 1225, 4950, 19900):
        w = rng.normal(0.0, 2.0, size=m)
        k = 0.1 * m
        t_nb = _time(
            _kernels.capped_simplex_project_numba, w, k, 1e-10, repeat=repeat
        )
        t_np = _time(
            _kernels.capped_simplex_project_numpy, w, k, 1e-10, repeat=repeat
        )
        print(f"{f'm={m}':>16} {t_nb * 1e6:>10.1f}us {t_np * 1e6:>10.1f}us "
              f"{t_np / t_nb:>8.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=50)
    args = parser.parse_args()
    if not _kernels._HAVE_NUMBA:
        print("numba is not importable; nothing to compare", file=sys.stderr)
        return 1
    bench_pairwise(args.repeat)
    bench_projection(args.repeat)
    return 0


if __name__ == "__main__":
    sys.exit(main())
