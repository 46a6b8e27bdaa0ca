"""Time every hot kernel on its numba and numpy paths.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Prints one line per kernel with both timings, the speed-up and the largest
difference between the two outputs.  The numba path is warmed up once so
compilation is not counted.
"""

import argparse
import math
import time

import numpy as np

from linnikps import _kernels, arith
from linnikps._accel import HAVE_NUMBA


def _cases(scale):
    rng = np.random.default_rng(12345)
    n_sieve = int(2**18 * scale)
    base = arith.small_primes(math.isqrt(10**7))
    primes = arith.primes_between(5 * 10**5, 5 * 10**5 + int(5 * 10**5 * scale)).astype(np.float64)
    w = np.log(primes).astype(np.complex128)
    ts = np.linspace(-1e-5, 1e-5, int(64 * scale) or 1)
    M = int(256 * scale) or 4
    tab = arith.tables_for(max(4 * M, 100))
    A = tab.mu[: 4 * M + 1].astype(np.float64)
    B = tab.lambda_log[: 4 * M + 1].copy()
    chi = arith.chi4_character().values
    small = arith.primes_between(500, 500 + int(2000 * scale)).astype(np.float64) ** 1.05
    N = 3 * float(np.median(small))
    idx = np.arange(small.size, dtype=np.int64)
    z = np.zeros(0, dtype=np.int64)
    m_max = int(10**6 * scale)
    wts = arith.chi4_array(np.arange(m_max + 1))
    n_res = (rng.integers(1, 10**6, size=int(10**6 * scale))).astype(np.int64)
    w_res = rng.standard_normal(n_res.size).astype(np.complex128)
    x = np.linspace(0, 200, int(20000 * scale))
    v = np.exp(-x / 50)
    ys = np.linspace(0, 2, 50)
    return {
        "sieve_segment": (10**7, 10**7 + n_sieve, base),
        "phase_sum": (primes, w, 3e-6, 1.05),
        "phase_sum_grid": (primes, w, ts, 1.05),
        "bilinear_sum": (M // 2 + 1, M, A, 2 * M + 1, 4 * M, B, 0, 4 * M * M, chi, 0.1, 1.05),
        "triple_search": (small, idx, N, 5.0, False, z, z, z),
        "pair_count": (small, 2 * float(np.median(small)), 5.0),
        "window_divisor_sums": (m_max, 100, 3000, wts),
        "residue_sums": (n_res, w_res, 97),
        "cos_transform": (x, v, ys),
    }


def _max_diff(a, b):
    if isinstance(a, tuple):
        return max(_max_diff(x, y) for x, y in zip(a, b))
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a.astype(np.complex128) - b.astype(np.complex128)))) / scale


def _time(fn, args, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path can run")
    cases = _cases(args.scale)
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speed-up':>10}{'rel diff':>12}")
    for name, (nb, np_fn) in _kernels.KERNELS.items():
        a = cases[name]
        t_np, out_np = _time(np_fn, a, args.repeat)
        if HAVE_NUMBA:
            nb(*a)  # compile
            t_nb, out_nb = _time(nb, a, args.repeat)
            diff = _max_diff(out_nb, out_np)
            print(f"{name:<22}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}{diff:>12.2e}")
        else:
            print(f"{name:<22}{'-':>12}{t_np:>12.4f}{'-':>10}{'-':>12}")


if __name__ == "__main__":
    main()
