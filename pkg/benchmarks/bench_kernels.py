"""Time the numba and numpy kernel backends on representative inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from gfaccess import code as cc
from gfaccess.kernels import _numba, _numpy


def cases(rng):
    code = cc.build_code(7, 3, 3)
    small = cc.build_code(5, 2, 5)
    obs = rng.random(code.length) < 0.7
    cols = np.sort(rng.choice(code.size, 8, replace=False)).astype(np.int64)
    combos = next(cc._combos(small.size, 5, batch=20000))
    lg = np.log1p(rng.exponential(10.0, 4096))
    coeffs = rng.normal(0, 50, 101)
    n, n_t = 1000, 100
    g_hat = (rng.standard_normal((n, n_t)) + 1j * rng.standard_normal((n, n_t))) / np.sqrt(2)
    other = (rng.standard_normal((n, 3, n_t)) + 1j * rng.standard_normal((n, 3, n_t))) / np.sqrt(2)
    err = np.zeros_like(g_hat)
    return {
        "cover_mask (q=7,k=3,t=3)": ("cover_mask", (code.symbols, obs, code.q)),
        "cover_counts (8 columns)": ("cover_counts", (code.symbols, cols, code.q, code.length)),
        "count_covered_outside (20k 5-sets)": ("count_covered_outside", (small.symbols, small.q, combos)),
        "log_sum_terms (4096 nodes, N_T=100)": ("log_sum_terms", (lg, coeffs, 3.0)),
        "mf_power_terms (1000 trials, N_T=100)": ("mf_power_terms", (g_hat, other, err, 10.0)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, (fn, inputs) in cases(rng).items():
        f_np, f_nb = getattr(_numpy, fn), getattr(_numba, fn)
        f_nb(*inputs)  # compile outside the timing
        t_np = min(timeit.repeat(lambda: f_np(*inputs), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: f_nb(*inputs), number=1, repeat=args.repeat))
        print(f"{name:40s} {1e3 * t_np:10.3f} {1e3 * t_nb:10.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
