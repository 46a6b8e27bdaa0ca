"""Empirical Bombieri-Vinogradov type average of ``|E(y, t, d, a)|``.

``sigma = sum_{d <= d_max} max_y max_{(a,d)=1} |E(y, t, d, a)|`` with
``d_max = sqrt(X) / (log X)^(A + log_offset)``.  The maximum over ``y`` is
taken on a finite grid, so ``sigma`` is a lower bound for the continuum
version.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, arith
from .errors import CapacityError, ParameterError, TrendError
from .oscillatory import _lambda_range, e, osc_integral
from .parallel import chunked_map

MAX_X = 10**6
MAX_EXACT_X = 10**4
MODULI_CHUNK = 8


def default_y_grid(X, size=16, step=0.25):
    """``X 2^(-j step)`` for ``j = 0, ..., size - 1``."""
    return [X * 2.0 ** (-j * step) for j in range(size)]


@dataclass(frozen=True)
class BvConfig:
    X: float
    c: float
    t: float = 0.0
    A: float = 1.0
    mu: float = 0.5
    y_grid: tuple = None
    log_offset: float = 5.0
    grid_size: int = 16
    grid_step: float = 0.25

    def __post_init__(self):
        if not (1 < self.c < 3) or self.c == 2:
            raise ParameterError(f"exponent c must satisfy 1 < c < 3, c != 2; got {self.c}")
        if not self.X >= 3:
            raise ParameterError("X must be at least 3")
        if self.X > MAX_X:
            raise CapacityError(f"X = {self.X} exceeds {MAX_X}")
        if not self.A > 0:
            raise ParameterError("A must be positive")
        if not 0 < self.mu < 1:
            raise ParameterError("mu must lie in (0, 1)")
        if abs(self.t) > self.X ** (0.25 - self.c) * (1 + 1e-12):
            raise ParameterError(f"|t| must not exceed X^(1/4-c) = {self.X ** (0.25 - self.c):.6g}")
        if self.grid_size < 1 or not self.grid_step > 0:
            raise ParameterError("grid_size must be >= 1 and grid_step > 0")
        if self.y_grid is not None:
            if len(self.y_grid) == 0:
                raise ParameterError("y_grid must be nonempty")
            if max(self.y_grid) > self.X or min(self.y_grid) <= 0:
                raise ParameterError("y_grid entries must lie in (0, X]")

    @property
    def grid(self):
        if self.y_grid is not None:
            return tuple(self.y_grid)
        return tuple(default_y_grid(self.X, self.grid_size, self.grid_step))

    @property
    def d_max(self):
        L = math.log(self.X)
        return int(math.floor(math.sqrt(self.X) / L ** (self.A + self.log_offset)))

    @property
    def comparison(self):
        return self.X / math.log(self.X) ** self.A

    def replace(self, **kw):
        fields = dict(X=self.X, c=self.c, t=self.t, A=self.A, mu=self.mu,
                      y_grid=self.y_grid, log_offset=self.log_offset,
                      grid_size=self.grid_size, grid_step=self.grid_step)
        fields.update(kw)
        return BvConfig(**fields)


@dataclass(frozen=True)
class BvResult:
    sigma: float
    comparison: float
    d_max: int
    empty: bool
    per_modulus: tuple = ()

    @property
    def ratio(self):
        return self.sigma / self.comparison


def breakpoint_grid(X, mu):
    """Every ``y <= X`` where a term enters or leaves ``(mu y, y]``, with left limits."""
    if X > MAX_EXACT_X:
        raise CapacityError(f"exact mode is limited to X <= {MAX_EXACT_X}")
    n, _ = _lambda_range(0, X)
    bps = np.concatenate([n, n / mu, [X]])
    bps = np.unique(bps[bps <= X])
    left = bps * (1 - 1e-12)
    return tuple(np.unique(np.concatenate([bps, left])).tolist())


class _YData:
    """Per-``y`` data shared by every modulus: the Lambda terms and the integral."""

    def __init__(self, y, cfg):
        n, lam = _lambda_range(cfg.mu * y, y)
        self.n = n
        if cfg.t == 0:
            self.w = lam.astype(np.complex128)
            self.integral = complex(y - cfg.mu * y)
        else:
            self.w = lam * e(cfg.t * n.astype(np.float64) ** cfg.c)
            self.integral = osc_integral(cfg.mu * y, y, cfg.c, cfg.t)


def _modulus_max(d, ydata, phi_d):
    """``max_y max_{(a,d)=1} |E(y, t, d, a)|``."""
    units = np.array([math.gcd(a, d) == 1 for a in range(d)])
    best = 0.0
    for yd in ydata:
        if yd.n.size:
            s = _kernels.residue_sums(yd.n, yd.w, d)
        else:
            s = np.zeros(d, dtype=np.complex128)
        err = np.abs(s[units] - yd.integral / phi_d)
        best = max(best, float(err.max()))
    return best


def bv_average(cfg, exact=False, progress=None):
    """``sigma``, the comparison ``X / (log X)^A`` and the modulus cutoff."""
    d_max = cfg.d_max
    if d_max < 1:
        return BvResult(0.0, cfg.comparison, d_max, True)
    grid = breakpoint_grid(cfg.X, cfg.mu) if exact else cfg.grid
    ydata = [_YData(y, cfg) for y in grid]
    phi = arith.tables_for(max(d_max, 2)).phi

    def work(lo, hi):
        out = []
        for d in range(lo + 1, hi + 1):
            out.append(_modulus_max(d, ydata, int(phi[d])))
            if progress is not None:
                progress(d)
        return out

    parts = chunked_map(work, d_max, MODULI_CHUNK)
    per = tuple(v for part in parts for v in part)
    return BvResult(math.fsum(per), cfg.comparison, d_max, False, per)


BV_HEADER = ("X", "c", "t", "A", "d_max", "sigma", "comparison", "ratio", "empty_flag")


def bv_table(Xs, template, t_fraction=None, exact=False, slack=0.5, check=True):
    """One row per ``X``; the ratio may not grow by more than ``slack`` between nonempty rows.

    With ``t_fraction`` set, ``t = t_fraction * X^(1/4 - c)`` at each ``X``.
    """
    Xs = list(Xs)
    if any(b <= a for a, b in zip(Xs, Xs[1:])):
        raise ParameterError("Xs must be strictly ascending")
    rows = []
    prev = None
    for X in Xs:
        t = template.t if t_fraction is None else t_fraction * X ** (0.25 - template.c)
        cfg = template.replace(X=X, t=t, y_grid=None)
        res = bv_average(cfg, exact=exact and X <= MAX_EXACT_X)
        rows.append((X, cfg.c, t, cfg.A, res.d_max, res.sigma, res.comparison, res.ratio, res.empty))
        if res.empty:
            continue
        if check and prev is not None and res.ratio > (1 + slack) * prev:
            raise TrendError(f"ratio rose from {prev:.4g} to {res.ratio:.4g} at X={X}")
        prev = res.ratio
    return rows
