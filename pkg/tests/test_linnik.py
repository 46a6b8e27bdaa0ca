import math

import numpy as np
import pytest

from linnikps import linnik, solver
from linnikps.errors import ParameterError

import oracles


@pytest.mark.parametrize("n,r", [(1, 4), (2, 4), (3, 0), (5, 8), (25, 12), (65, 16)])
def test_r2_examples(n, r):
    assert linnik.r2(n) == r == oracles.lattice_count(n)


def test_r2_table_matches_lattice_scan():
    n_max = 10**5
    assert np.array_equal(linnik.r2_table(n_max)[1:], oracles.lattice_counts(n_max)[1:])


def test_r2_rejects():
    with pytest.raises(ParameterError):
        linnik.r2(0)
    with pytest.raises(ParameterError):
        linnik.r2_table(0)


def test_witness_minimal():
    assert linnik.two_square_witness(0) == (0, 0)
    assert linnik.two_square_witness(6) is None
    for m in range(0, 2000):
        assert linnik.two_square_witness(m) == oracles.two_square_brute(m)


def test_linnik_small():
    got = [(q.p, q.x, q.y) for q in linnik.linnik_primes(1, 10)]
    assert got == [(2, 0, 1), (3, 1, 1), (5, 0, 2)]


def test_linnik_ten_to_twenty():
    got = [(q.p, q.x, q.y) for q in linnik.linnik_primes(10, 20)]
    assert got == [(11, 1, 3), (17, 0, 4), (19, 3, 3)]


def test_linnik_enumeration_complete():
    lo, hi = 1000, 30000
    got = linnik.linnik_primes(lo, hi)
    want = [p for p in oracles.primes_in(lo, hi) if oracles.two_square_brute(p - 1) is not None]
    assert [q.p for q in got] == want
    for q in got:
        assert q.x * q.x + q.y * q.y + 1 == q.p
        assert 0 <= q.x <= q.y
        assert q.r_weight == oracles.lattice_count(q.p - 1) > 0


def test_linnik_rows():
    recs = linnik.linnik_primes(1, 20)
    rows = linnik.linnik_rows(recs)
    assert rows[0] == (2, 0, 1, 4)
    assert len(rows[0]) == len(linnik.LINNIK_HEADER)


def test_linnik_empty():
    assert linnik.linnik_primes(0, 1) == []
    assert linnik.linnik_primes(24, 28) == []


# ---------------------------------------------------------------------------
# Hooley statistics


def test_hooley_window_x10():
    lo, hi = linnik.hooley_window(10, 1)
    assert lo == pytest.approx(math.sqrt(10) / math.log(10))
    assert hi == pytest.approx(math.sqrt(10) * math.log(10))
    # divisors 2..7 are inside; p - 1 in {1, 2, 4, 6}; only 6 has chi4 mass (d = 3)
    assert linnik.hooley_rho_moment(10, 1)[0] == 1.0
    assert linnik.hooley_window_count(10, 1)[0] == 3


@pytest.mark.parametrize("X,omega", [(10, 1), (100, 0.5), (1000, 1), (5000, 0.3), (20000, 2)])
def test_hooley_against_divisor_scan(X, omega):
    moment, count = oracles.hooley_brute(X, omega)
    assert linnik.hooley_rho_moment(X, omega)[0] == moment
    assert linnik.hooley_window_count(X, omega)[0] == count


def test_hooley_open_endpoints():
    # X = 16, omega chosen so the upper end lands on an integer
    omega = math.log(2) / math.log(math.log(16))
    lo, hi = linnik.hooley_window(16, omega)
    assert hi == pytest.approx(8.0)
    moment, count = oracles.hooley_brute(16, omega)
    assert linnik.hooley_window_count(16, omega)[0] == count


def test_hooley_count_bounds():
    for X in (100, 1000, 10**4):
        pi_x = len(oracles.primes_upto(X))
        prev = -1
        for omega in (0.1, 0.3, 1.0, 3.0):
            n, _ = linnik.hooley_window_count(X, omega)
            assert prev <= n <= pi_x
            prev = n
        assert linnik.hooley_rho_moment(X, 0.5)[0] >= 0


def test_hooley_comparisons():
    X = 1e4
    _, c1 = linnik.hooley_rho_moment(X, 1.0)
    _, c2 = linnik.hooley_window_count(X, 1.0)
    L = math.log(X)
    assert c1 == pytest.approx(X * math.log(L) ** 7 / L)
    assert c2 == pytest.approx(X * math.log(L) ** 3 / L ** (1 + 2 * solver.theta0()))


def test_hooley_rejects():
    with pytest.raises(ParameterError):
        linnik.hooley_window(2, 1)
    with pytest.raises(ParameterError):
        linnik.hooley_window(100, 0)


def test_hooley_trend_logged():
    rows = linnik.hooley_rows([1e4, 1e5, 1e6], 1.0)
    assert len(rows) == 6
    rho = [r[5] for r in rows if r[2] == "rho_moment"]
    cnt = [r[5] for r in rows if r[2] == "window_count"]
    print(f"Hooley rho ratios {rho}; window-count ratios {cnt}")
    assert sum(b <= a for a, b in zip(rho, rho[1:])) >= 1
