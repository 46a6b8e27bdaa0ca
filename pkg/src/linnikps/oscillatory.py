"""Exponential sums over primes, oscillatory integrals and their moments.

Sums are exact finite sums with compensated accumulation.  Integrals use
Gauss-Legendre panels whose width keeps the phase change per panel below
``pi``; a second route for ``int_J e(t y^c) dy`` on many frequencies at
once expands the amplitude in Legendre polynomials and integrates each
term against the exponential in closed form (spherical Bessel functions).
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import spherical_jn

from . import _kernels, arith
from .errors import CapacityError, ParameterError, QuadratureError
from .parallel import chunked_map

MAX_X = 10**8
CHUNK = 1 << 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def e(x):
    """``exp(2 pi i x)``."""
    return np.exp(2j * np.pi * np.asarray(x))


def _check_c(c):
    if not (1 < c < 3) or c == 2:
        raise ParameterError(f"exponent c must satisfy 1 < c < 3, c != 2; got {c}")


@dataclass(frozen=True)
class ExpSumSpec:
    """One sum ``sum_{p in J, p = l (d)} e(t p^c) log p``.

    ``J`` defaults to ``(mu X, X]``.
    """

    X: float
    c: float
    t: float = 0.0
    mu: float = 0.5
    residue: tuple = None
    interval: tuple = None

    def __post_init__(self):
        if not self.X > 0:
            raise ParameterError("X must be positive")
        _check_c(self.c)
        if not 0 < self.mu < 1:
            raise ParameterError(f"mu must lie in (0, 1), got {self.mu}")
        if self.residue is not None:
            l, d = self.residue
            if d < 1 or math.gcd(int(l), int(d)) != 1:
                raise ParameterError(f"residue class {l} mod {d} must be reduced")
        if self.interval is not None:
            lo, hi = self.interval
            if not (self.X / 2 <= lo < hi <= self.X):
                raise ParameterError(f"interval {self.interval} must lie inside (X/2, X]")
        if self.X > MAX_X:
            raise CapacityError(f"X = {self.X} exceeds {MAX_X}")

    @property
    def range(self):
        if self.interval is not None:
            return tuple(self.interval)
        return (self.mu * self.X, self.X)

    @property
    def delta(self):
        """``X^(1/4 - c)``."""
        return self.X ** (0.25 - self.c)


def primes_in(lo, hi):
    """Primes in ``(lo, hi]``; tables are used when they are cheap enough."""
    if hi > MAX_X:
        raise CapacityError(f"{hi} exceeds {MAX_X}")
    if hi < 2:
        return np.zeros(0, dtype=np.int64)
    if hi <= 4 * 10**6:
        pr = arith.tables_for(hi).primes
        return pr[(pr > lo) & (pr <= hi)]
    return arith.primes_between(lo, hi)


def log_weights(p):
    """``log p`` from the C library, matching ``math.log`` bit for bit."""
    return np.fromiter(map(math.log, np.asarray(p).tolist()), dtype=np.float64, count=len(p))


def weighted_phase_sum(n, w, t, c):
    """``sum_j w_j e(t n_j^c)`` with deterministic chunked reduction."""
    n = np.ascontiguousarray(n, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.complex128)
    if n.size == 0:
        return 0j
    if t == 0:
        # e(0) = 1: the correctly rounded sum of the weights
        return complex(math.fsum(w.real), math.fsum(w.imag))
    parts = chunked_map(lambda lo, hi: _kernels.phase_sum(n[lo:hi], w[lo:hi], float(t), float(c)),
                        n.size, CHUNK)
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _spec_primes(spec):
    lo, hi = spec.range
    p = primes_in(lo, hi)
    if spec.residue is not None:
        l, d = spec.residue
        p = p[p % d == l % d]
    return p


def exp_sum_primes(spec):
    """``S_{l,d;J}(t)``; with no residue or interval this is ``S(t)`` over ``(X/2, X]``."""
    p = _spec_primes(spec)
    return weighted_phase_sum(p, log_weights(p), spec.t, spec.c)


def exp_sum_primes_grid(spec, ts):
    """``S_{l,d;J}(t)`` for every ``t`` in ``ts``."""
    p = _spec_primes(spec).astype(np.float64)
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    if p.size == 0:
        return np.zeros(ts.size, dtype=np.complex128)
    w = log_weights(p).astype(np.complex128)
    parts = chunked_map(lambda lo, hi: _kernels.phase_sum_grid(p, w, ts[lo:hi], spec.c), ts.size, 256)
    return np.concatenate(parts)


def _lambda_range(lo, hi):
    """Integers ``n`` in ``(lo, hi]`` with ``Lambda(n) != 0`` and their ``Lambda``."""
    hi_i = int(math.floor(hi))
    if hi_i > MAX_X or hi_i > arith.MAX_LIMIT:
        raise CapacityError(f"{hi} exceeds the sieve capacity")
    if hi_i < 2:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    tab = arith.tables_for(hi_i)
    lo_i = int(math.floor(lo)) + 1
    n = np.arange(max(lo_i, 1), hi_i + 1)
    lam = tab.lambda_log[n]
    keep = lam != 0
    return n[keep], lam[keep]


def exp_sum_lambda_chi(y, chi, t, c, mu):
    """``Psi(y, chi, t) = sum_{mu y < n <= y} Lambda(n) chi(n) e(t n^c)``."""
    n, lam = _lambda_range(mu * y, y)
    w = lam * chi.values[n % chi.modulus]
    keep = w != 0
    return weighted_phase_sum(n[keep], w[keep], t, c)


# ---------------------------------------------------------------------------
# oscillatory integrals


def _panel_edges(lo, hi, c, t, gamma, max_panels):
    edges = [np.geomspace(lo, hi, max(2, int(math.ceil(math.log2(hi / lo))) + 1))]
    if t != 0:
        # phase 2 pi t y^c moves by pi/2 per step in u = y^c
        du = 1.0 / (4.0 * abs(t))
        n = int(math.ceil((hi**c - lo**c) / du))
        if n > max_panels:
            raise CapacityError(f"oscillatory integral needs {n} panels (> {max_panels})")
        edges.append(np.linspace(lo**c, hi**c, n + 1) ** (1.0 / c))
    if gamma != 0:
        n = int(math.ceil(abs(gamma) * math.log(hi / lo) / (math.pi / 2)))
        if n > max_panels:
            raise CapacityError(f"oscillatory integral needs {n} panels (> {max_panels})")
        edges.append(np.geomspace(lo, hi, n + 1))
    out = np.unique(np.concatenate(edges))
    out[0], out[-1] = lo, hi
    return out


def _integrand(y, c, t, beta, gamma):
    ph = t * y**c
    ph -= np.floor(ph)
    ang = 2 * np.pi * ph + gamma * np.log(y)
    return y ** (beta - 1) * np.exp(1j * ang)


def _gl_panels(a, b, c, t, beta, gamma, block=1 << 16):
    out = np.empty(a.size, dtype=np.complex128)
    # blocks keep the node matrix small when there are millions of panels
    for s in range(0, a.size, block):
        half = 0.5 * (b[s:s + block] - a[s:s + block])
        mid = 0.5 * (b[s:s + block] + a[s:s + block])
        y = mid[:, None] + half[:, None] * _GL_X[None, :]
        out[s:s + block] = half * (_integrand(y, c, t, beta, gamma) @ _GL_W)
    return out


def osc_integral(lo, hi, c, t, beta=1.0, gamma=0.0, tol=1e-8, max_rounds=30, max_panels=10**7):
    """``int_lo^hi y^(beta - 1 + i gamma) e(t y^c) dy``.

    Each panel is accepted once its 16-point value agrees with the sum over
    its two halves to ``tol * width``; the total absolute error is then
    below ``tol * (hi - lo)``.
    """
    if not 0 < lo < hi:
        raise ParameterError(f"need 0 < lo < hi, got lo={lo}, hi={hi}")
    if t == 0 and gamma == 0 and beta == 1:
        return complex(hi - lo)
    edges = _panel_edges(lo, hi, c, t, gamma, max_panels)
    a, b = edges[:-1], edges[1:]
    accepted = []
    for _ in range(max_rounds):
        m = 0.5 * (a + b)
        coarse = _gl_panels(a, b, c, t, beta, gamma)
        fine = _gl_panels(a, m, c, t, beta, gamma) + _gl_panels(m, b, c, t, beta, gamma)
        # phases carry rounding of order ulp(t y^c); do not chase below it
        amp = np.maximum(a ** (beta - 1), b ** (beta - 1))
        floor = 64 * np.finfo(float).eps * (2 * np.pi * np.maximum(abs(t) * b**c, 1.0)
                                            + abs(gamma) * np.abs(np.log(b)))
        ok = np.abs(coarse - fine) <= np.maximum(tol, floor * amp) * (b - a)
        accepted.append(fine[ok])
        if ok.all():
            vals = np.concatenate(accepted)
            return complex(math.fsum(vals.real), math.fsum(vals.imag))
        a, b, m = a[~ok], b[~ok], m[~ok]
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        order = np.argsort(a)
        a, b = a[order], b[order]
    err = float(np.sum(np.abs(coarse - fine)[~ok])) / (hi - lo)
    raise QuadratureError(f"oscillatory integral did not converge (achieved {err:.3g})", achieved=err)


def _legendre_amplitude(U0, U1, c, max_deg=512, rel=1e-15):
    """Legendre coefficients of ``u -> u^(1/c - 1) / c`` on ``[U0, U1]``.

    The series is cut at the first run of three coefficients below
    ``rel * |a_0|``; past that point only rounding noise remains.
    """
    m, h = 0.5 * (U0 + U1), 0.5 * (U1 - U0)

    def g(x):
        return (m + h * x) ** (1.0 / c - 1.0) / c

    deg = 32
    while True:
        x, w = np.polynomial.legendre.leggauss(2 * deg)
        V = np.polynomial.legendre.legvander(x, deg)
        scale = (2 * np.arange(deg + 1) + 1) / 2
        gx = g(x)
        coef = (V.T @ (w * gx)) * scale
        # the discrete projection leaks ~1e-14 of a_0 into higher terms; refine on the residual
        for _ in range(2):
            coef += (V.T @ (w * (gx - V @ coef))) * scale
        small = np.abs(coef) < rel * abs(coef[0])
        run = small[:-2] & small[1:-1] & small[2:]
        if run.any():
            return coef[: int(np.argmax(run))]
        if deg >= max_deg:
            return coef
        deg *= 2


def dyadic_integrals(ts, lo, hi, c):
    """``I_J(t) = int_lo^hi e(t y^c) dy`` for an array of frequencies.

    With ``u = y^c`` the integrand becomes ``g(u) e(t u)``.  Expanding ``g``
    in Legendre polynomials on ``[U0, U1]`` and using
    ``int_{-1}^{1} P_n(x) e^{i w x} dx = 2 i^n j_n(w)`` gives the result
    without any quadrature in ``t``.
    """
    ts = np.asarray(ts, dtype=np.float64)
    U0, U1 = lo**c, hi**c
    m, h = 0.5 * (U0 + U1), 0.5 * (U1 - U0)
    coef = _legendre_amplitude(U0, U1, c)
    w = 2 * np.pi * np.abs(ts) * h
    acc = np.zeros(ts.shape, dtype=np.complex128)
    for n, an in enumerate(coef):
        acc += an * (1j) ** n * spherical_jn(n, w)
    # the expansion used |t|; conjugation gives negative frequencies
    acc = np.where(ts < 0, np.conj(acc), acc)
    ph = ts * m
    ph = ph - np.floor(ph)
    return 2 * h * acc * np.exp(2j * np.pi * ph)


def error_term(y, t, d, a_res, c, mu):
    """``E(y,t,d,a)``: the Lambda-sum over ``n = a (d)`` minus ``I/phi(d)``."""
    if d < 1 or math.gcd(int(a_res), int(d)) != 1:
        raise ParameterError(f"need gcd(a, d) = 1, got a={a_res}, d={d}")
    n, lam = _lambda_range(mu * y, y)
    keep = n % d == a_res % d
    s = weighted_phase_sum(n[keep], lam[keep], t, c)
    phi_d = int(arith.tables_for(max(d, 2)).phi[d])
    return s - osc_integral(mu * y, y, c, t) / phi_d


# ---------------------------------------------------------------------------
# second moments


class MomentKind(str, Enum):
    S_over_Delta = "S_over_Delta"
    I_over_Delta = "I_over_Delta"
    S_unit_interval = "S_unit_interval"
    S_ld_over_Delta = "S_ld_over_Delta"


def moment_comparison(kind, spec):
    X, c = spec.X, spec.c
    L = math.log(X)
    if kind is MomentKind.S_over_Delta:
        return X ** (2 - c) * L**3
    if kind is MomentKind.I_over_Delta:
        return X ** (2 - c) * L
    if kind is MomentKind.S_unit_interval:
        return X * L**3
    d = spec.residue[1] if spec.residue else 1
    return X ** (2 - c) * L**3 / d**2


def frequency_grid(t_lo, t_hi, fmax, points_per_period=64, min_panels=8):
    """Gauss-Legendre nodes and weights with ``points_per_period`` per oscillation."""
    per_panel = _GL_X.size
    width = per_panel / (points_per_period * max(fmax, 1e-300))
    n = max(min_panels, int(math.ceil((t_hi - t_lo) / width)))
    edges = np.linspace(t_lo, t_hi, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    wts = (half[:, None] * _GL_W[None, :]).ravel()
    return nodes, wts


def second_moment(kind, spec, window=None):
    """``int_window |F(t)|^2 dt`` for the sum or integral named by ``kind``.

    ``window`` is ``(t_lo, t_hi)``; by default ``(-Delta, Delta)`` or
    ``(0, 1)`` for the unit-interval kind.  Returns ``(moment, comparison)``.
    """
    kind = MomentKind(kind)
    if window is None:
        D = spec.delta
        window = (0.0, 1.0) if kind is MomentKind.S_unit_interval else (-D, D)
    t_lo, t_hi = map(float, window)
    lo, hi = spec.range
    if kind is MomentKind.S_ld_over_Delta and spec.residue is None:
        raise ParameterError("S_ld_over_Delta needs a residue class")
    # |F|^2 oscillates with frequencies up to hi^c - lo^c
    fmax = hi**spec.c - lo**spec.c
    nodes, wts = frequency_grid(t_lo, t_hi, fmax)
    if kind is MomentKind.I_over_Delta:
        vals = dyadic_integrals(nodes, lo, hi, spec.c)
    else:
        if kind is not MomentKind.S_ld_over_Delta:
            spec = ExpSumSpec(spec.X, spec.c, 0.0, spec.mu, None, spec.interval)
        vals = exp_sum_primes_grid(spec, nodes)
    moment = math.fsum(wts * np.abs(vals) ** 2)
    return moment, moment_comparison(kind, spec)


# ---------------------------------------------------------------------------
# scaling helpers


def prime_sum_gap(X, c, t, mu=0.5):
    """``|S(t) - I(t)| / ((1 - mu) X)`` over ``(mu X, X]``."""
    spec = ExpSumSpec(X, c, t, mu)
    S = exp_sum_primes(spec)
    I = osc_integral(mu * X, X, c, t)
    return abs(S - I) / ((1 - mu) * X)


def scaling_rows(Xs, c, ts, mu=0.5):
    """Rows ``(X, c, t, Re S, Im S, Re I, Im I, |S - I|)``."""
    rows = []
    for X in Xs:
        for t in ts:
            S = exp_sum_primes(ExpSumSpec(X, c, t, mu))
            I = osc_integral(mu * X, X, c, t)
            rows.append((X, c, t, S.real, S.imag, I.real, I.imag, abs(S - I)))
    return rows


SCALING_HEADER = ("X", "c", "t", "re_S", "im_S", "re_I", "im_I", "abs_S_minus_I")
