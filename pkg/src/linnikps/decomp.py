"""Vaughan's identity, Type I/II bilinear sums and the bounds used on them.

With ``c(d) = sum_{mn=d, m<=u, n<=u} mu(m) Lambda(n)`` and
``a(d) = sum_{m|d, m<=u} mu(m)`` the identity

    Psi_1 = U_1 - U_2 - U_3 - U_4

is exact, so it is checked to rounding error rather than estimated.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, arith
from .errors import ParameterError
from .parallel import chunked_map

BILINEAR_EXPONENT = 373 / 400
ETA = 0.05
PAIRS = ((0.5, 0.5), (2 / 7, 4 / 7))


def vaughan_coefficients(u, limit):
    """Arrays ``c[d]`` and ``a[d]`` for ``d <= limit`` (index 0 unused)."""
    tab = arith.tables_for(max(limit, 2))
    U = int(math.floor(u))
    cc = np.zeros(limit + 1)
    aa = np.zeros(limit + 1)
    mu = tab.mu
    lam = tab.lambda_log
    for m in range(1, min(U, limit) + 1):
        if mu[m] == 0:
            continue
        aa[m::m] += mu[m]
        top = min(U, limit // m)
        if top >= 1:
            cc[m * np.arange(1, top + 1)] += mu[m] * lam[1:top + 1]
    return cc, aa


@dataclass(frozen=True)
class VaughanSplit:
    U1: complex
    U2: complex
    U3: complex
    U4: complex
    Psi1: complex
    terms: int

    @property
    def residual(self):
        return abs(self.U1 - self.U2 - self.U3 - self.U4 - self.Psi1)


def _bilinear(d_lo, d_hi, A, l_lo, l_hi, B, dl_lo, dl_hi, chi_vals, t, c):
    """Deterministically chunked over ``d``."""
    if d_hi < d_lo:
        return 0j
    span = d_hi - d_lo + 1
    chunk = max(1, span // 64) if span > 4096 else span
    parts = chunked_map(
        lambda lo, hi: _kernels.bilinear_sum(d_lo + lo, d_lo + hi - 1, A, l_lo, l_hi, B,
                                             dl_lo, dl_hi, chi_vals, float(t), float(c)),
        span, chunk)
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def vaughan_split(y, u, chi, t, c):
    """The four Vaughan sums and ``Psi_1 = sum_{u < n <= y} Lambda(n) chi(n) e(t n^c)``."""
    if u < 1:
        raise ParameterError("u must be at least 1")
    if u * u > y:
        raise ParameterError(f"need u^2 <= y, got u={u}, y={y}")
    Y = int(math.floor(y))
    U = int(math.floor(u))
    U2 = int(math.floor(u * u))
    tab = arith.tables_for(max(Y, 2))
    cc, aa = vaughan_coefficients(u, Y)
    chi_vals = np.ascontiguousarray(chi.values, dtype=np.complex128)
    mu_f = tab.mu[: Y + 1].astype(np.float64)
    lam = np.ascontiguousarray(tab.lambda_log[: Y + 1])
    logs = np.zeros(Y + 1)
    logs[1:] = np.log(np.arange(1, Y + 1))
    ones = np.ones(Y + 1)

    U1 = _bilinear(1, U, mu_f, 1, Y, logs, U, Y, chi_vals, t, c)
    Uc2 = _bilinear(1, U, cc, 1, Y, ones, U, Y, chi_vals, t, c)
    Uc3 = _bilinear(U + 1, min(U2, Y), cc, 1, Y, ones, U, Y, chi_vals, t, c)
    U4 = _bilinear(U + 1, Y, aa, U + 1, Y, lam, 0, Y, chi_vals, t, c)

    n = np.arange(U + 1, Y + 1)
    w = lam[n] * chi_vals[n % chi.modulus]
    keep = w != 0
    from .oscillatory import weighted_phase_sum

    psi1 = weighted_phase_sum(n[keep], w[keep], t, c)
    return VaughanSplit(U1, Uc2, Uc3, U4, psi1, Y)


def coefficient_bounds_hold(u, limit):
    """``|c(d)| <= log d`` and ``|a(d)| <= tau(d)`` for every ``d <= limit``."""
    tab = arith.tables_for(max(limit, 2))
    cc, aa = vaughan_coefficients(u, limit)
    d = np.arange(1, limit + 1)
    ok_c = np.all(np.abs(cc[1:]) <= np.log(d) + 1e-12)
    ok_a = np.all(np.abs(aa[1:]) <= tab.tau[1:limit + 1])
    return bool(ok_c and ok_a)


# ---------------------------------------------------------------------------
# bilinear sums


def dyadic_block(M):
    """Integers ``m`` with ``M/2 < m <= M``."""
    return np.arange(int(math.floor(M / 2)) + 1, int(math.floor(M)) + 1)


@dataclass(frozen=True)
class BilinearSpec:
    M: float
    L: float
    c: float
    t: float
    a_coeffs: np.ndarray
    b_coeffs: np.ndarray = None

    def __post_init__(self):
        if self.M < 1 or self.L < 1:
            raise ParameterError("M and L must be at least 1")
        if len(self.a_coeffs) != dyadic_block(self.M).size:
            raise ParameterError("a_coeffs must cover exactly the block m ~ M")
        if self.b_coeffs is not None and len(self.b_coeffs) != dyadic_block(self.L).size:
            raise ParameterError("b_coeffs must cover exactly the block l ~ L")

    @property
    def scale(self):
        return self.M * self.L

    def comparison(self):
        """``(ML)^(373/400)``."""
        return self.scale**BILINEAR_EXPONENT


def _block_sum(spec, b):
    m = dyadic_block(spec.M)
    l = dyadic_block(spec.L)
    if m.size == 0 or l.size == 0:
        return 0j
    A = np.zeros(m[-1] + 1)
    B = np.zeros(l[-1] + 1)
    A[m] = np.asarray(spec.a_coeffs, dtype=np.float64)
    B[l] = b
    unit = np.ones(1, dtype=np.complex128)
    return _bilinear(int(m[0]), int(m[-1]), A, int(l[0]), int(l[-1]), B, 0, int(m[-1]) * int(l[-1]),
                     unit, spec.t, spec.c)


def type1_sum(spec):
    """``S_I = sum_{m~M} a(m) sum_{l~L} e(t m^c l^c)``."""
    return _block_sum(spec, 1.0)


def type2_sum(spec):
    """``S_II = sum_{m~M} a(m) sum_{l~L} b(l) e(t m^c l^c)``."""
    if spec.b_coeffs is None:
        raise ParameterError("Type II sums need b_coeffs")
    return _block_sum(spec, np.asarray(spec.b_coeffs, dtype=np.float64))


# ---------------------------------------------------------------------------
# bound formulas


def exponent_pair_bound(kappa, lam, Y, Xscale):
    """``Y^kappa X^lambda + 1/Y``."""
    if not (0 <= kappa <= 0.5 <= lam <= 1):
        raise ParameterError(f"({kappa}, {lam}) is not an exponent pair")
    return Y**kappa * Xscale**lam + 1.0 / Y


BW_TERMS = (
    # (F, M, L) exponents
    (3 / 14, 41 / 56, 29 / 56),
    (1 / 5, 3 / 4, 11 / 20),
    (1 / 8, 13 / 16, 11 / 16),
    (0, 3 / 4, 1),
    (0, 1, 3 / 4),
    (-1, 1, 1),
)


def bw_degenerate(lam, th):
    prod = (th * (th - 1) * (th - 2) * lam * (lam - 1) * (th + lam - 2) * (th + lam - 3)
            * (th + 2 * lam - 3) * (2 * th + lam - 4))
    return abs(prod) < 1e-12


def bilinear_bound_bw(B, M, L, lam, th):
    """Sum of the six terms of the Baker-Weingartner bound with ``F = B M^lam L^th``.

    The ``(ML)^eta`` factor is left out.
    """
    if bw_degenerate(lam, th):
        raise ParameterError(f"degenerate exponents lambda={lam}, theta={th}")
    F = B * M**lam * L**th
    return math.fsum(F**f * M**m * L**l for f, m, l in BW_TERMS)


SW_TERMS = (
    (4 / 42, 31 / 42, 34 / 42),
    (6 / 66, 53 / 66, 51 / 66),
    (6 / 56, 46 / 56, 41 / 56),
    (2 / 40, 38 / 40, 29 / 40),
    (3 / 46, 43 / 46, 32 / 46),
    (1 / 10, 9 / 10, 6 / 10),
    (2 / 10, 7 / 10, 6 / 10),
    (1 / 8, 6 / 8, 6 / 8),
    (0, 1 / 2, 1),
    (0, 1, 1 / 2),
    (-1 / 2, 1, 1),
)


def bilinear_bound_sw(F, M, L):
    """Sum of the eleven terms of the Sargos-Wu bound (without ``(FML)^eta``)."""
    if F < 1 or M < 1 or L < 1:
        raise ParameterError("F, M, L must all be >= 1")
    return math.fsum(F**f * M**m * L**l for f, m, l in SW_TERMS)


def sw_degenerate(alpha, beta):
    return abs(alpha * beta * (alpha - 1) * (beta - 1) * (alpha - 2) * (beta - 2)) < 1e-12


def default_hb_choice(X):
    """``U = X^(1/5)``, ``V = X^(1/3)``, ``Z = [X^(2/5)] + 1/2``."""
    return X**0.2, X ** (1 / 3), math.floor(X**0.4) + 0.5


def hb_regimes(U, V, Z, X, const=0.5):
    """Check ``3 < U < V < Z < X``, ``Z - 1/2`` integral, ``X >> Z^2 U``, ``Z >> U^2``, ``V^3 >> X``.

    ``A >> B`` is read as ``A >= const * B``.  Returns ``(ok, ratios)``.
    """
    ratios = {
        "X/(Z^2 U)": X / (Z * Z * U),
        "Z/U^2": Z / (U * U),
        "V^3/X": V**3 / X,
    }
    ok = (3 < U < V < Z < X and float(Z - 0.5).is_integer()
          and all(r >= const for r in ratios.values()))
    return ok, ratios


def bound_rows(instances):
    """CSV rows ``(instance, |S|, bound, ratio)`` from ``(id, value, bound)`` triples."""
    return [(i, abs(v), b, abs(v) / b if b else float("nan")) for i, v, b in instances]


BOUND_HEADER = ("instance", "abs_S", "bound", "ratio")
