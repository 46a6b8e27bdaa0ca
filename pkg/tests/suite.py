"""Instances shared by the solver, CLI and acceptance tests."""

import math

import numpy as np

from linnikps import arith
from linnikps.oscillatory import ExpSumSpec

GOLDEN_SOLVE = [(1000, 1.01, 2)] + [
    (N, c, eps) for N in (100, 1000, 10000) for c in (1.01, 1.05) for eps in (1, 5)
]

GOLDEN_BINARY = [(50, 1.01, 2)] + [
    (N0, c, eps) for N0 in (100, 1000, 10000) for c in (1.01, 1.05) for eps in (1, 5)
]


def golden_name(N, c, eps):
    return f"solve_N{N}_c{c}_eps{eps}_linnik.json"


def random_specs(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        X = float(rng.uniform(50, 1e4))
        c = float(rng.choice([1.05, 1.2, 1.5, 2.5]))
        # keep |t| X^c moderate so the phases themselves are well conditioned
        t = float(rng.uniform(-1, 1)) * min(1.0, 1e4 / X**c)
        d = int(rng.integers(1, 13))
        l = int(rng.integers(0, d))
        while math.gcd(l, d) != 1:
            l = (l + 1) % d
        lo = float(rng.uniform(X / 2, X))
        hi = float(rng.uniform(lo, X))
        out.append(ExpSumSpec(X, c, t, residue=(l, d), interval=(lo, hi) if hi > lo else None))
    return out


def random_chars(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = int(rng.integers(1, 13))
        g = arith.characters_mod(d)
        y = float(rng.uniform(20, 1e4))
        c = float(rng.choice([1.05, 1.2, 2.5]))
        t = float(rng.uniform(-1, 1)) * min(1.0, 1e4 / y**c)
        out.append((y, g[int(rng.integers(0, len(g)))], t, c, float(rng.uniform(0.1, 0.9))))
    return out


def random_errors(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = int(rng.integers(1, 20))
        a = int(rng.integers(0, d))
        while math.gcd(a, d) != 1:
            a = (a + 1) % d
        out.append((float(rng.uniform(100, 1e4)), float(rng.uniform(-1e-3, 1e-3)), d, a,
                    float(rng.choice([1.05, 1.2])), float(rng.uniform(0.2, 0.8))))
    return out



# one line per acceptance criterion, filled in as they run
ACCEPTANCE_LINES = []
