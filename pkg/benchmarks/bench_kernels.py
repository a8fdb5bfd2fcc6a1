"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from polcoherence import _kernels_py

try:
    from polcoherence import _kernels as _compiled
except ImportError:
    _compiled = None


def cases(n, rng):
    eta = rng.uniform(0, 2 * math.pi, n)
    u = rng.random(n)
    cum = np.array([0.4267766953, 0.5, 0.5732233047, 1.0])
    return {
        "cos_sum": lambda m: m.cos_sum(eta, 0.0),
        "singles_moments": lambda m: m.singles_moments(eta, math.pi, 0.6, -0.3, 1.0),
        "tally": lambda m: m.tally(u, cum),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"n = {args.n:,}, best of {args.repeat}")
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}")
    for name, fn in cases(args.n, rng).items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _compiled is None:
            print(f"{name:<18}{t_py * 1e3:>12.2f}{'n/a':>13}{'':>9}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_compiled), number=1, repeat=args.repeat))
        print(f"{name:<18}{t_py * 1e3:>12.2f}{t_c * 1e3:>13.2f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
