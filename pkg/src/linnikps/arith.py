"""Arithmetic tables, Dirichlet characters and two classical inequalities.

The tables come from a segmented multiplicative sieve: each segment of
``[1, limit]`` is factored against the primes up to ``sqrt(limit)`` and the
cofactor left over is the single large prime, if any.
"""

import math
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .errors import CapacityError, ParameterError

MAX_LIMIT = 10**8
MAX_CHAR_MODULUS = 10**4
SEGMENT = 1 << 18


def small_primes(n):
    """Primes ``<= n`` by a plain Eratosthenes sieve."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mark[p]:
            mark[p * p::p] = False
    return np.flatnonzero(mark).astype(np.int64)


def primes_between(lo, hi):
    """Primes ``p`` with ``lo < p <= hi`` from a segmented sieve."""
    lo = max(1, int(math.floor(lo)))
    hi = int(math.floor(hi))
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    base = small_primes(math.isqrt(hi))
    out = []
    start = lo + 1
    while start <= hi:
        stop = min(start + SEGMENT, hi + 1)
        mark = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            first = max(p * p, ((start + p - 1) // p) * p)
            if first >= stop:
                continue
            mark[first - start::p] = False
        if start <= 1:
            mark[: 2 - start] = False
        out.append(np.flatnonzero(mark) + start)
        start = stop
    return np.concatenate(out).astype(np.int64)


@dataclass(frozen=True, eq=False)
class ArithmeticTables:
    """Per-``n`` values for ``0 <= n <= limit``; index 0 is padding."""

    limit: int
    primes: np.ndarray
    spf: np.ndarray
    phi: np.ndarray
    mu: np.ndarray
    tau: np.ndarray
    lambda_log: np.ndarray

    def is_prime(self, n):
        return n >= 2 and self.spf[n] == n

    def divisors(self, n):
        """Sorted divisors of ``n`` via the smallest-prime-factor table."""
        divs = [1]
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            divs = [d * p**j for d in divs for j in range(e + 1)]
        return sorted(divs)

    def factor(self, n):
        out = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def rows(self):
        for n in range(1, self.limit + 1):
            yield n, int(self.phi[n]), int(self.mu[n]), int(self.tau[n]), float(self.lambda_log[n])


def build_tables(limit):
    """Sieve ``phi, mu, tau, Lambda`` and smallest prime factors up to ``limit``."""
    if not isinstance(limit, (int, np.integer)) or isinstance(limit, bool):
        raise ParameterError(f"limit must be an integer, got {limit!r}")
    limit = int(limit)
    if limit < 2:
        raise ParameterError(f"limit must be >= 2, got {limit}")
    if limit > MAX_LIMIT:
        raise CapacityError(f"limit {limit} exceeds the sieve capacity {MAX_LIMIT}")
    base = small_primes(math.isqrt(limit))
    spf = np.zeros(limit + 1, dtype=np.int64)
    phi = np.zeros(limit + 1, dtype=np.int64)
    mu = np.zeros(limit + 1, dtype=np.int8)
    tau = np.zeros(limit + 1, dtype=np.int32)
    lam = np.zeros(limit + 1, dtype=np.float64)
    for lo in range(1, limit + 1, SEGMENT):
        hi = min(lo + SEGMENT, limit + 1)
        s, f, m, t, L = _kernels.sieve_segment(lo, hi, base)
        spf[lo:hi] = s
        phi[lo:hi] = f
        mu[lo:hi] = m
        tau[lo:hi] = t
        lam[lo:hi] = L
    primes = np.flatnonzero(spf[2:] == np.arange(2, limit + 1)) + 2
    for arr in (spf, phi, mu, tau, lam, primes):
        arr.setflags(write=False)
    return ArithmeticTables(limit, primes.astype(np.int64), spf, phi, mu, tau, lam)


_cache_lock = threading.Lock()
_cached = None


def tables_for(n):
    """Shared tables covering at least ``n``, grown by doubling."""
    global _cached
    n = max(2, int(math.ceil(n)))
    if n > MAX_LIMIT:
        raise CapacityError(f"{n} exceeds the sieve capacity {MAX_LIMIT}")
    with _cache_lock:
        if _cached is None or _cached.limit < n:
            size = max(n, 1 << 16)
            if _cached is not None:
                size = max(size, min(2 * _cached.limit, MAX_LIMIT))
            _cached = build_tables(min(size, MAX_LIMIT))
        return _cached


# ---------------------------------------------------------------------------
# characters


def chi4(n):
    """The non-principal character modulo 4."""
    r = n % 4
    if r == 1:
        return 1
    if r == 3:
        return -1
    return 0


def chi4_array(n):
    n = np.asarray(n)
    r = n % 4
    return np.where(r == 1, 1, np.where(r == 3, -1, 0)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    values: np.ndarray
    is_principal: bool
    is_primitive: bool
    index: tuple = ()

    def __call__(self, n):
        return self.values[np.asarray(n) % self.modulus]

    @property
    def is_real(self):
        return bool(np.all(self.values.imag == 0))


def _primitive_root(p, e):
    """A generator of (Z/p^e)* for an odd prime p."""
    q = p**e
    order = q - q // p
    pf = [f for f, _ in _factor_int(order)]
    for g in range(2, q):
        if g % p == 0:
            continue
        if all(pow(g, order // f, q) != 1 for f in pf):
            return g
    raise AssertionError("no primitive root")  # unreachable for odd prime powers


def _factor_int(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _root_table(order):
    """Exact values of e(j/order) for j in range(order) where they are rational."""
    j = np.arange(order)
    roots = np.exp(2j * np.pi * j / order)
    for k in range(order):
        if (4 * k) % order == 0:
            roots[k] = (1, 1j, -1, -1j)[(4 * k) // order]
    return roots


class CharacterGroup(Sequence):
    """All Dirichlet characters modulo ``d``, built on demand.

    The group (Z/d)* is decomposed as a product of cyclic factors, one per
    generator; character ``i`` is indexed by a tuple of exponents, one per
    factor, enumerated in ``itertools.product`` order.  Index 0 is the
    principal character.
    """

    def __init__(self, d):
        self.modulus = d
        comps = []  # (generator residue mod d, order)
        for p, e in _factor_int(d):
            q = p**e
            rest = d // q
            lift = (lambda r, q=q, rest=rest: _crt(r, q, 1, rest))
            if p == 2:
                if e == 2:
                    comps.append((lift(3), 2))
                elif e >= 3:
                    comps.append((lift(q - 1), 2))
                    comps.append((lift(5), q // 4))
            else:
                comps.append((lift(_primitive_root(p, e)), q - q // p))
        self._comps = comps
        self._orders = [o for _, o in comps]
        # discrete logs: logs[k][n] = exponent of generator k in n, -1 if gcd > 1
        logs = np.full((len(comps), d), -1, dtype=np.int64)
        units = [n for n in range(d) if math.gcd(n, d) == 1]
        if d == 1:
            units = [0]
        for vec in product(*[range(o) for o in self._orders]):
            n = 1 % d
            for (g, _), k in zip(comps, vec):
                n = n * pow(g, k, d) % d
            logs[:, n] = vec
        self._logs = logs
        self._unit = np.zeros(d, dtype=bool)
        self._unit[units] = True
        self._index = list(product(*[range(o) for o in self._orders]))
        self._lcm = 1
        for o in self._orders:
            self._lcm = self._lcm * o // math.gcd(self._lcm, o)
        self._roots = _root_table(self._lcm)

    def __len__(self):
        return len(self._index)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        idx = self._index[i]
        d = self.modulus
        expo = np.zeros(d, dtype=np.int64)
        for k, (j, o) in enumerate(zip(idx, self._orders)):
            expo += (self._lcm // o) * j * self._logs[k]
        vals = np.where(self._unit, self._roots[expo % self._lcm], 0).astype(np.complex128)
        principal = all(j == 0 for j in idx)
        return DirichletCharacter(d, vals, principal, _is_primitive(d, vals), idx)


def _crt(r1, m1, r2, m2):
    """x = r1 mod m1, x = r2 mod m2 for coprime moduli."""
    if m2 == 1:
        return r1 % m1
    return (r1 * m2 * pow(m2, -1, m1) + r2 * m1 * pow(m1, -1, m2)) % (m1 * m2)


def _is_primitive(d, vals):
    """Not induced from any character modulo d/p for a prime p | d."""
    if d == 1:
        return True
    for p, _ in _factor_int(d):
        dp = d // p
        n = 1 + dp * np.arange(p)
        v = vals[n % d]
        v = v[v != 0]
        if np.all(np.abs(v - 1) < 1e-12):
            return False
    return True


@lru_cache(maxsize=64)
def characters_mod(d):
    """Sequence of the phi(d) Dirichlet characters modulo ``d``."""
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ParameterError(f"modulus must be a positive integer, got {d!r}")
    if d > MAX_CHAR_MODULUS:
        raise CapacityError(f"modulus {d} exceeds {MAX_CHAR_MODULUS}")
    return CharacterGroup(int(d))


def principal_character(d):
    return characters_mod(d)[0]


def chi4_character():
    group = characters_mod(4)
    return group[1]


def polya_vinogradov_check(chi, M, N):
    """Largest partial sum over ``M < n <= M + K``, ``K <= N``, and ``6 sqrt(q) log q``.

    Sums over a full period vanish for a non-principal character, so the
    partial sums are periodic in ``K`` and only ``K <= min(N, q)`` is scanned.
    """
    if chi.is_principal:
        raise ParameterError("Polya-Vinogradov needs a non-principal character")
    if N < 1:
        raise ParameterError("N must be positive")
    q = chi.modulus
    K = min(int(N), q)
    n = np.arange(M + 1, M + K + 1)
    partial = np.cumsum(chi.values[n % q])
    biggest = float(np.max(np.abs(partial)))
    return biggest, 6.0 * math.sqrt(q) * math.log(q)


def large_sieve_ratio(Q, M, N, a):
    """Both sides of the multiplicative large sieve for ``a_{M+1..M+N}``.

    Returns ``(lhs, rhs)`` with
    ``lhs = sum_{q<=Q} q/phi(q) sum*_chi |sum a_n chi(n)|^2`` and
    ``rhs = (N + Q^2) sum |a_n|^2``.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        raise ParameterError("coefficient sequence is empty")
    if a.size != N:
        raise ParameterError(f"expected {N} coefficients, got {a.size}")
    n = np.arange(M + 1, M + N + 1)
    lhs_terms = []
    for q in range(1, int(Q) + 1):
        group = characters_mod(q)
        phi_q = len(group)
        for chi in group:
            if not chi.is_primitive:
                continue
            s = np.dot(a, chi.values[n % q])
            lhs_terms.append(q / phi_q * abs(s) ** 2)
    lhs = math.fsum(lhs_terms)
    rhs = (N + Q * Q) * math.fsum(np.abs(a) ** 2)
    return lhs, rhs
