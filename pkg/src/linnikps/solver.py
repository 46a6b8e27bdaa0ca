"""Parameters, solution search and the weighted counts for ``|p1^c + p2^c + p3^c - N| < eps``."""

import math
from dataclasses import dataclass, field
from itertools import repeat

import numpy as np

from . import _kernels, arith
from .errors import CapacityError, ParameterError
from .kernel import SmoothingKernel, kernel_from_eps, theta, theta_hat
from .linnik import r2_table, two_square_witness
from .oscillatory import dyadic_integrals, frequency_grid, primes_in
from .parallel import chunked_map

MAX_SEARCH_X = 10**6
MAX_GAMMA_X = 10**5
C_UPPER = 427 / 400


def theta0():
    """``1/2 - (e log 2) / 4``."""
    return 0.5 - 0.25 * math.e * math.log(2.0)


def _check_c(c):
    if not (1 < c < 3) or c == 2:
        raise ParameterError(f"exponent c must satisfy 1 < c < 3, c != 2; got {c}")


def scale_X(N, c):
    """``X = (N/2)^(1/c)``, with no range guard."""
    return (N / 2.0) ** (1.0 / c)


def default_eps(X):
    """``(log log X)^6 / (log X)^theta0``."""
    L = math.log(X)
    return math.log(L) ** 6 / L ** theta0()


@dataclass(frozen=True)
class Params:
    N: float
    c: float
    A: float
    X: float
    D: float
    Delta: float
    eps: float
    H: float
    theta0: float
    eps_overridden: bool = False

    def as_dict(self):
        return {
            "N": self.N, "c": self.c, "A": self.A, "X": self.X, "D": self.D,
            "Delta": self.Delta, "eps": self.eps, "H": self.H, "theta0": self.theta0,
            "eps_overridden": self.eps_overridden,
        }


def derive_params(N, c, A=1.0, eps=None):
    """The parameter stack for target ``N``; ``eps`` overrides the default formula."""
    _check_c(c)
    if not N >= 100:
        raise ParameterError(f"need N >= 100, got {N}")
    if not A > 0:
        raise ParameterError(f"need A > 0, got {A}")
    if eps is not None and not eps > 0:
        raise ParameterError(f"eps override must be positive, got {eps}")
    X = scale_X(N, c)
    L = math.log(X)
    eps_val = default_eps(X) if eps is None else float(eps)
    return Params(
        N=float(N), c=float(c), A=float(A), X=X,
        D=math.sqrt(X) / L**A,
        Delta=X ** (0.25 - c),
        eps=eps_val,
        H=L * L / eps_val,
        theta0=theta0(),
        eps_overridden=eps is not None,
    )


def default_kernel(params):
    return kernel_from_eps(params.eps, params.X)


# ---------------------------------------------------------------------------
# solution search


@dataclass(frozen=True)
class SolutionRecord:
    p1: int
    p2: int
    p3: int
    x: int
    y: int
    residual: float

    def as_dict(self):
        return {"p1": self.p1, "p2": self.p2, "p3": self.p3, "x": self.x, "y": self.y,
                "residual": self.residual}


SOLUTION_HEADER = ("p1", "p2", "p3", "x", "y", "residual")
SEARCH_CHUNK = 32


def _prime_powers(p, c):
    """``p^c`` from the C library ``pow``, so results do not depend on numpy's SIMD path."""
    return np.fromiter(map(math.pow, np.asarray(p, dtype=np.float64).tolist(), repeat(float(c))),
                       dtype=np.float64, count=len(p))


def _triples(pc, idx1, N, eps):
    """All index triples with ``|pc[i1] + pc[i2] + pc[i3] - N| < eps``, chunked over ``idx1``."""

    def work(lo, hi):
        sub = np.ascontiguousarray(idx1[lo:hi])
        z = np.zeros(0, dtype=np.int64)
        n = _kernels.triple_search(pc, sub, N, eps, False, z, z, z)
        o1 = np.empty(n, dtype=np.int64)
        o2 = np.empty(n, dtype=np.int64)
        o3 = np.empty(n, dtype=np.int64)
        _kernels.triple_search(pc, sub, N, eps, True, o1, o2, o3)
        return o1, o2, o3

    parts = chunked_map(work, idx1.size, SEARCH_CHUNK)
    if not parts:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    return tuple(np.concatenate([q[j] for q in parts]) for j in range(3))


def find_solutions(params, linnik_only=True, limit=None):
    """Solutions in primes of ``(X/2, X]``, ordered by ``p1``, then ``p2``, then ``p3``."""
    if not params.eps > 0:
        raise ParameterError("eps must be positive")
    if params.X > MAX_SEARCH_X:
        raise CapacityError(f"X = {params.X:.6g} exceeds the search limit {MAX_SEARCH_X}")
    p = primes_in(params.X / 2, params.X)
    if p.size == 0:
        return []
    pc = _prime_powers(p, params.c)
    if linnik_only:
        r = r2_table(int(p[-1]))
        idx1 = np.flatnonzero(r[p - 1] > 0).astype(np.int64)
    else:
        idx1 = np.arange(p.size, dtype=np.int64)
    i1, i2, i3 = _triples(pc, idx1, params.N, params.eps)
    if limit is not None:
        i1, i2, i3 = i1[:limit], i2[:limit], i3[:limit]
    out = []
    witness = {}
    for a, b, d in zip(i1.tolist(), i2.tolist(), i3.tolist()):
        p1 = int(p[a])
        if p1 not in witness:
            witness[p1] = two_square_witness(p1 - 1) if linnik_only else None
        w = witness[p1]
        x, y = w if w is not None else (-1, -1)
        res = float(pc[a] + pc[b] + pc[d] - params.N)
        out.append(SolutionRecord(p1, int(p[b]), int(p[d]), x, y, res))
    return out


def count_solutions(params, linnik_only=True):
    p = primes_in(params.X / 2, params.X)
    if p.size == 0:
        return 0
    pc = _prime_powers(p, params.c)
    if linnik_only:
        r = r2_table(int(p[-1]))
        idx1 = np.flatnonzero(r[p - 1] > 0).astype(np.int64)
    else:
        idx1 = np.arange(p.size, dtype=np.int64)
    z = np.zeros(0, dtype=np.int64)
    parts = chunked_map(
        lambda lo, hi: _kernels.triple_search(pc, np.ascontiguousarray(idx1[lo:hi]), params.N,
                                              params.eps, False, z, z, z),
        idx1.size, SEARCH_CHUNK)
    return int(sum(parts))


# ---------------------------------------------------------------------------
# weighted counts


@dataclass(frozen=True)
class GammaBreakdown:
    gamma: float
    gamma0: float
    gamma1: float
    gamma2: float
    gamma3: float
    params: Params
    kernel: SmoothingKernel
    triples: int = 0

    @property
    def residual(self):
        return abs(self.gamma0 - 4 * (self.gamma1 + self.gamma2 + self.gamma3))

    def as_dict(self):
        return {
            "gamma": self.gamma, "gamma0": self.gamma0, "gamma1": self.gamma1,
            "gamma2": self.gamma2, "gamma3": self.gamma3, "triples": self.triples,
            "params": self.params.as_dict(),
            "kernel": {"a": self.kernel.a, "delta": self.kernel.delta, "k": self.kernel.k},
        }


def divisor_splits(n, D, X):
    """``sum chi4(d)`` over ``d | n`` split into ``d <= D``, ``D < d < X/D`` and ``d >= X/D``."""
    tab = arith.tables_for(max(n, 2))
    s = [0, 0, 0]
    for d in tab.divisors(n):
        v = arith.chi4(d)
        if d <= D:
            s[0] += v
        elif d < X / D:
            s[1] += v
        else:
            s[2] += v
    return s


def gamma_weighted(params, kernel=None):
    """``Gamma``, ``Gamma_0`` and the three divisor-range pieces of ``Gamma_0 / 4``."""
    if params.X > MAX_GAMMA_X:
        raise CapacityError(f"X = {params.X:.6g} exceeds the triple-sum limit {MAX_GAMMA_X}")
    if kernel is None:
        kernel = default_kernel(params)
    if kernel.support > params.eps * (1 + 1e-12):
        raise ParameterError("kernel support must lie inside |y| <= eps")
    p = primes_in(params.X / 2, params.X)
    zero = GammaBreakdown(0.0, 0.0, 0.0, 0.0, 0.0, params, kernel)
    if p.size == 0:
        return zero
    pc = _prime_powers(p, params.c)
    logp = np.log(p.astype(np.float64))
    i1, i2, i3 = _triples(pc, np.arange(p.size, dtype=np.int64), params.N, params.eps)
    if i1.size == 0:
        return zero
    res = pc[i1] + pc[i2] + pc[i3] - params.N
    w = logp[i1] * logp[i2] * logp[i3]
    th = theta(kernel, res)
    r = r2_table(int(p[-1]))[p - 1]
    splits = np.array([divisor_splits(int(q) - 1, params.D, params.X) for q in p], dtype=np.int64)
    gamma = math.fsum(r[i1] * w)
    tw = th * w
    gamma0 = math.fsum(r[i1] * tw)
    g = [math.fsum(splits[i1, j] * tw) for j in range(3)]
    return GammaBreakdown(gamma, gamma0, g[0], g[1], g[2], params, kernel, int(i1.size))


# ---------------------------------------------------------------------------
# binary counter


def binary_count(N0, c, eps):
    """Pairs in ``(X0/2, X0]^2`` with ``|p1^c + p2^c - N0| < eps``, ``X0 = N0^(1/c)``.

    Returned with ``eps N0^(2/c - 1) / log^2 N0``.
    """
    _check_c(c)
    if eps < 0:
        raise ParameterError("eps must be nonnegative")
    X0 = N0 ** (1.0 / c)
    if X0 > MAX_SEARCH_X:
        raise CapacityError(f"X0 = {X0:.6g} exceeds {MAX_SEARCH_X}")
    comparison = eps * N0 ** (2.0 / c - 1) / math.log(N0) ** 2
    p = primes_in(X0 / 2, X0)
    if eps == 0 or p.size == 0:
        return 0, comparison
    pc = _prime_powers(p, c)
    return int(_kernels.pair_count(pc, float(N0), float(eps))), comparison


# ---------------------------------------------------------------------------
# singular series


def singular_series(cutoff_P):
    """``(pi/4) prod_{p <= P} (1 + chi4(p) / (p (p - 1)))`` and the tail bound ``1/P``."""
    P = int(math.floor(cutoff_P))
    if P < 2:
        raise ParameterError("cutoff must be at least 2")
    p = arith.tables_for(P).primes
    p = p[p <= P].astype(np.float64)
    chi = arith.chi4_array(p.astype(np.int64))
    logs = np.log1p(chi / (p * (p - 1)))
    return math.pi / 4 * math.exp(math.fsum(logs)), 1.0 / P


def chi_phi_sum(D):
    """``sum_{d <= D} chi4(d) / phi(d)``."""
    D = int(math.floor(D))
    if D < 1:
        return 0.0
    tab = arith.tables_for(max(D, 2))
    d = np.arange(1, D + 1)
    return math.fsum(arith.chi4_array(d) / tab.phi[1:D + 1])


# ---------------------------------------------------------------------------
# main term


@dataclass
class MainTerm:
    Phi: float
    ratio: float
    T: float
    H: float
    nodes: int
    tail_bound: float
    info: dict = field(default_factory=dict)


def _tail_cutoff(kernel, level):
    """``T`` with ``int_T^inf (1/(pi x)) (k/(2 pi x delta))^k dx = level``."""
    k = kernel.k
    return k / (2 * math.pi * kernel.delta) * (math.pi * k * level) ** (-1.0 / k)


def main_term_integral(params, kernel=None, rel_tol=1e-6, points_per_period=64):
    """``Phi(X) = int Theta(t) I(t)^3 e(-N t) dt`` and ``Phi / (eps X^(3-c))``.

    ``I(t) = int_{X/2}^X e(t y^c) dy``.  The integral is truncated at ``|t| = T``
    where the kernel decay bound certifies a tail below ``rel_tol |Phi|``.
    """
    if params.X > MAX_SEARCH_X:
        raise CapacityError(f"X = {params.X:.6g} exceeds {MAX_SEARCH_X}")
    if kernel is None:
        kernel = default_kernel(params)
    X, c, N = params.X, params.c, params.N
    lo, hi = X / 2, X
    amp3 = (hi - lo) ** 3
    # frequencies in Theta I^3 e(-Nt): |u1 + u2 + u3 - N| plus the kernel's own
    fmax = max(abs(3 * lo**c - N), abs(3 * hi**c - N)) + kernel.support

    def integrate(T):
        nodes, wts = frequency_grid(0.0, T, fmax, points_per_period)
        I = dyadic_integrals(nodes, lo, hi, c)
        ph = N * nodes
        ph -= np.floor(ph)
        vals = theta_hat(kernel, nodes) * I**3 * np.exp(-2j * np.pi * ph)
        return 2.0 * math.fsum((wts * vals.real)), nodes.size

    # a first guess, then tighten until the certified tail is small enough
    T = _tail_cutoff(kernel, 1e-3 * rel_tol * kernel.a / hi**c)
    Phi, n = integrate(T)
    for _ in range(8):
        tail = 2 * amp3 * kernel.tail_integral_bound(T)
        if tail <= rel_tol * abs(Phi):
            break
        T = _tail_cutoff(kernel, 0.5 * rel_tol * abs(Phi) / (2 * amp3))
        Phi, n = integrate(T)
    tail = 2 * amp3 * kernel.tail_integral_bound(T)
    ratio = Phi / (params.eps * X ** (3 - c))
    return MainTerm(Phi, ratio, T, params.H, n, tail)
