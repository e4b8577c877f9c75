"""Time the compiled and pure-Python simplex kernels on the same LPs.

    python benchmarks/bench_simplex.py [--sizes 8 16 32 64] [--repeat 5]

Each size ``n`` is a random feasible, bounded LP with ``n`` variables and
``2n`` inequality rows; both kernels solve identical copies.
"""

import argparse
import time

import numpy as np

from gptcheck import _kernels
from gptcheck.lp import lp_solve


def make_problem(n, rng):
    A = rng.uniform(-1, 1, size=(2 * n, n))
    b = rng.uniform(0.5, 1.5, size=2 * n)  # x = 0 is feasible
    A = np.vstack([A, np.eye(n), -np.eye(n)])
    b = np.concatenate([b, np.ones(2 * n)])
    return rng.normal(size=n), A, b


def best_time(kernel, problem, repeat):
    c, A, b = problem
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        sol = lp_solve(c, A_ub=A, b_ub=b, maximize=True, kernel=kernel)
        times.append(time.perf_counter() - t0)
    return min(times), sol.value


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _kernels.compiled_kernel is None:
        print("compiled kernel not built; only the python kernel is timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>5} {'python ms':>11} {'compiled ms':>12} {'speedup':>8}")
    for n in args.sizes:
        problem = make_problem(n, rng)
        tp, vp = best_time(_kernels.python_kernel, problem, args.repeat)
        if _kernels.compiled_kernel is None:
            print(f"{n:>5} {tp * 1e3:>11.2f} {'-':>12} {'-':>8}")
            continue
        tc, vc = best_time(_kernels.compiled_kernel, problem, args.repeat)
        assert abs(vp - vc) <= 1e-9 * max(1.0, abs(vp)), (vp, vc)
        print(f"{n:>5} {tp * 1e3:>11.2f} {tc * 1e3:>12.2f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
