"""Compare the numba kernels with their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

The kernel timings run in-process.  ``--end-to-end`` also times a genus-4
enumeration and the N_p oracle sweep in fresh interpreters, once with
numba and once with CHABAUTY_BOUNDS_NO_NUMBA=1.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from chabauty_bounds import kernels
from chabauty_bounds._accel import HAVE_NUMBA
from chabauty_bounds.stable import _cell_permutations


def scan_cases():
    # (p, num, den, n0, cutoff) sized like the oracle cross-checks
    return [(2, 1, 100, 0, 5_000), (3, 1, 50, 20, 20_000), (2, 1, 1000, 0, 200_000)]


def perm_cases():
    rng = np.random.default_rng(0)
    out = []
    for size, cells in [(6, (6,)), (8, (4, 4)), (8, (8,))]:
        a = rng.integers(0, 2, size=(size, size))
        mat = ((a + a.T) % 3).astype(np.int64)
        out.append((f"V={size} cells={cells}", mat, _cell_permutations(cells)))
    return out


def bench(fn, args, repeat):
    fn(*args)  # warm up, includes jit compilation
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def end_to_end(repeat):
    snippet = ("import time;from chabauty_bounds import cli;import io;"
               "t=time.perf_counter();cli.main(['graph','enumerate','--genus','4'],io.StringIO());"
               "a=time.perf_counter()-t;t=time.perf_counter();"
               "cli.main(['oracle','np','--max-den','20'],io.StringIO());"
               "print(f'{a:.3f} {time.perf_counter()-t:.3f}')")
    print("\nend to end (fresh interpreter, best of", repeat, ")")
    print(f"{'backend':<8} {'enumerate g=4':>14} {'oracle np':>10}")
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, CHABAUTY_BOUNDS_NO_NUMBA=flag)
        runs = []
        for _ in range(repeat):
            res = subprocess.run([sys.executable, "-c", snippet], env=env, capture_output=True, text=True, check=True)
            runs.append(tuple(map(float, res.stdout.split())))
        print(f"{label:<8} {min(r[0] for r in runs):>13.3f}s {min(r[1] for r in runs):>9.3f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy column is timed")

    print(f"{'kernel':<40} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for case in scan_cases():
        t_np = bench(kernels.last_violator_numpy, case, args.repeat)
        row = f"{'last_violator ' + str(case):<40} {t_np * 1e3:>8.2f}ms"
        if HAVE_NUMBA:
            assert kernels.last_violator_jit(*case) == kernels.last_violator_numpy(*case)
            t_jit = bench(kernels.last_violator_jit, case, args.repeat)
            row += f" {t_jit * 1e3:>8.2f}ms {t_np / t_jit:>7.1f}x"
        print(row)
    for label, mat, perms in perm_cases():
        t_np = bench(kernels.best_permutation_numpy, (mat, perms), args.repeat)
        row = f"{'best_permutation ' + label:<40} {t_np * 1e3:>8.2f}ms"
        if HAVE_NUMBA:
            t_jit = bench(kernels.best_permutation_jit, (mat, perms), args.repeat)
            row += f" {t_jit * 1e3:>8.2f}ms {t_np / t_jit:>7.1f}x"
        print(row)
    if args.end_to_end:
        end_to_end(min(args.repeat, 3))


if __name__ == "__main__":
    main()
