"""Linnik primes ``p = x^2 + y^2 + 1``, ``r(n)`` and Hooley divisor-window statistics."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, arith
from .errors import ParameterError


def _chi4_weights(n_max):
    return arith.chi4_array(np.arange(n_max + 1))


def r2_table(n_max):
    """``r(n) = 4 sum_{d|n} chi4(d)`` for ``0 <= n <= n_max`` (entry 0 is unused and set to 0)."""
    n_max = int(n_max)
    if n_max < 1:
        raise ParameterError("n_max must be positive")
    s, _ = _kernels.window_divisor_sums(n_max, 1, n_max, _chi4_weights(n_max))
    out = 4 * s
    out[0] = 0
    return out


def r2(n):
    """Number of ``(x, y)`` in Z^2 with ``x^2 + y^2 = n``, from the divisor formula."""
    n = int(n)
    if n < 1:
        raise ParameterError("n must be positive")
    tab = arith.tables_for(n)
    return 4 * sum(arith.chi4(d) for d in tab.divisors(n))


def two_square_witness(m):
    """Smallest ``x >= 0`` with ``m - x^2 = y^2``, ``y >= x``; ``None`` if there is none."""
    x = 0
    while 2 * x * x <= m:
        y2 = m - x * x
        y = math.isqrt(y2)
        if y * y == y2:
            return x, y
        x += 1
    return None


@dataclass(frozen=True)
class LinnikPrime:
    p: int
    x: int
    y: int
    r_weight: int


LINNIK_HEADER = ("p", "x", "y", "r_weight")


def linnik_primes(lo, hi):
    """Every prime ``p`` in ``(lo, hi]`` with ``r(p - 1) > 0``, with its minimal-``x`` witness."""
    hi_i = int(math.floor(hi))
    if hi_i < 2:
        return []
    tab = arith.tables_for(hi_i)
    primes = tab.primes[(tab.primes > lo) & (tab.primes <= hi_i)]
    if primes.size == 0:
        return []
    r = r2_table(hi_i)
    out = []
    for p in primes.tolist():
        w = int(r[p - 1])
        if w == 0:
            continue
        x, y = two_square_witness(p - 1)
        out.append(LinnikPrime(p, x, y, w))
    return out


def linnik_rows(records):
    return [(q.p, q.x, q.y, q.r_weight) for q in records]


# ---------------------------------------------------------------------------
# Hooley statistics


def hooley_window(X, omega):
    """Open window ``(sqrt(X) (log X)^-omega, sqrt(X) (log X)^omega)`` as real endpoints."""
    if X < 3:
        raise ParameterError("X must be at least 3 so that log X > 1")
    if omega <= 0:
        raise ParameterError("omega must be positive")
    L = math.log(X) ** omega
    return math.sqrt(X) / L, math.sqrt(X) * L


def _integer_window(lo, hi):
    """Integers strictly inside ``(lo, hi)``."""
    d_lo = int(math.floor(lo)) + 1
    d_hi = int(math.ceil(hi)) - 1
    return d_lo, d_hi


def _window_stats(X, omega):
    Xi = int(math.floor(X))
    lo, hi = hooley_window(X, omega)
    d_lo, d_hi = _integer_window(lo, hi)
    tab = arith.tables_for(max(Xi, 2))
    primes = tab.primes[tab.primes <= Xi]
    m_max = max(Xi - 1, 1)
    s, cnt = _kernels.window_divisor_sums(m_max, d_lo, d_hi, _chi4_weights(m_max))
    return primes, s[primes - 1], cnt[primes - 1]


def hooley_rho_moment(X, omega):
    """``sum_{p <= X} |sum_{d | p-1, d in window} chi4(d)|^2`` and ``X (log log X)^7 / log X``."""
    _, s, _ = _window_stats(X, omega)
    value = float(np.sum(s.astype(np.int64) ** 2))
    comparison = X * math.log(math.log(X)) ** 7 / math.log(X)
    return value, comparison


def hooley_window_count(X, omega):
    """Number of primes ``p <= X`` with a divisor of ``p - 1`` in the window.

    Returned with ``X (log log X)^3 / (log X)^(1 + 2 theta0)``.
    """
    from .solver import theta0

    _, _, cnt = _window_stats(X, omega)
    count = int(np.count_nonzero(cnt))
    comparison = X * math.log(math.log(X)) ** 3 / math.log(X) ** (1 + 2 * theta0())
    return count, comparison


HOOLEY_HEADER = ("X", "omega", "statistic", "value", "comparison", "ratio")


def hooley_rows(Xs, omega):
    rows = []
    for X in Xs:
        v, cmp_ = hooley_rho_moment(X, omega)
        rows.append((X, omega, "rho_moment", v, cmp_, v / cmp_))
        n, cmp_ = hooley_window_count(X, omega)
        rows.append((X, omega, "window_count", n, cmp_, n / cmp_))
    return rows
