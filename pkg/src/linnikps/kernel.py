"""Compactly supported smoothing kernel with a closed-form Fourier transform.

The kernel is the indicator of ``[-a, a]`` convolved ``k`` times with the
normalised indicator of ``[-r, r]``, ``r = delta / k``.  Its transform is

    Theta(x) = 2a sinc(2 a x) * sinc(2 r x) ** k,    sinc(z) = sin(pi z) / (pi z),

and ``theta(y)`` is the distribution function of a sum of ``k`` uniform
variables on ``[-r, r]`` evaluated at ``a - |y|``.  That distribution is
evaluated through cardinal B-splines, whose recursion only forms convex
combinations and so stays accurate for every ``k``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ParameterError


@dataclass(frozen=True)
class SmoothingKernel:
    a: float
    delta: float
    k: int

    def __post_init__(self):
        if not (self.a > 0 and self.delta > 0):
            raise ParameterError("a and delta must be positive")
        if not self.delta < self.a / 4:
            raise ParameterError(f"need delta < a/4, got a={self.a}, delta={self.delta}")
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError(f"k must be a positive integer, got {self.k}")

    @property
    def r(self):
        return self.delta / self.k

    @property
    def support(self):
        return self.a + self.delta

    @property
    def plateau(self):
        return self.a - self.delta

    def decay_bound(self, x):
        """The three-piece bound on ``|Theta(x)|``."""
        x = np.abs(np.asarray(x, dtype=np.float64))
        with np.errstate(divide="ignore", over="ignore"):
            b1 = np.full_like(x, 2 * self.a)
            b2 = 1.0 / (np.pi * x)
            b3 = b2 * (self.k / (2 * np.pi * x * self.delta)) ** self.k
        return np.minimum(b1, np.minimum(b2, b3))

    def tail_integral_bound(self, T):
        """``int_T^inf (1/(pi x)) (k/(2 pi x delta))^k dx``."""
        k = self.k
        return (k / (2 * math.pi * self.delta * T)) ** k / (math.pi * k)


def make_kernel(a, delta, k):
    return SmoothingKernel(float(a), float(delta), int(k))


def kernel_from_eps(eps, X):
    """Default parameters ``a = 9 eps/10``, ``delta = eps/10``, ``k = [log X]``.

    ``k`` is clamped to 1 for ``X < e``.
    """
    k = max(1, int(math.floor(math.log(X)))) if X > 1 else 1
    return make_kernel(0.9 * eps, 0.1 * eps, k)


def binary_kernel(eps, X0):
    """Parameters used for the binary counter: ``(5 eps/4, eps/4, [log X0])``.

    The plateau is ``|y| <= eps`` and the support ends at ``3 eps / 2``.
    """
    k = max(1, int(math.floor(math.log(X0)))) if X0 > 1 else 1
    return make_kernel(1.25 * eps, 0.25 * eps, k)


def _sinc(z):
    z = np.asarray(z, dtype=np.float64)
    w = np.pi * z
    small = np.abs(w) < 1e-4
    out = np.empty_like(w)
    big = ~small
    out[big] = np.sin(w[big]) / w[big]
    w2 = w[small] ** 2
    # six Taylor terms of sin(w)/w
    out[small] = 1 - w2 / 6 * (1 - w2 / 20 * (1 - w2 / 42 * (1 - w2 / 72 * (1 - w2 / 110))))
    return out


def theta_hat(kernel, x):
    """Fourier transform ``Theta(x) = int theta(y) e(-x y) dy``."""
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=np.float64)
    out = 2 * kernel.a * _sinc(2 * kernel.a * x) * _sinc(2 * kernel.r * x) ** kernel.k
    return float(out) if scalar else out


def _bspline_cdf(x, k):
    """CDF of the sum of ``k`` independent U(0, 1) variables at ``x``.

    ``F(x) = sum_{j>=0} B_{k+1}(x - j)`` with ``B_m`` the cardinal B-spline of
    order ``m`` supported on ``[0, m]``.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    out[x >= k] = 1.0
    inside = (x > 0) & (x < k)
    if not inside.any():
        return out
    xi = x[inside]
    m = k + 1
    u = xi[None, :] - np.arange(2 * m)[:, None]
    b = ((u >= 0) & (u < 1)).astype(np.float64)
    for order in range(2, m + 1):
        b = (u[:-1] * b[:-1] + (order - u[:-1]) * b[1:]) / (order - 1)
        u = u[:-1]
    out[inside] = np.minimum(1.0, b.sum(axis=0))
    return out


def _uniform_sum_cdf(kernel, s):
    """CDF of a sum of ``k`` uniforms on ``[-r, r]`` at ``s``."""
    r = kernel.r
    return _bspline_cdf((np.asarray(s) + kernel.delta) / (2 * r), kernel.k)


def theta(kernel, y):
    """The smoothing function itself; exactly 1 on the plateau and 0 off the support."""
    scalar = np.isscalar(y)
    y = np.abs(np.asarray(y, dtype=np.float64))
    out = _uniform_sum_cdf(kernel, kernel.a - y)
    out[y <= kernel.plateau] = 1.0
    out[y >= kernel.support] = 0.0
    return float(out) if scalar else out


def theta_complement(kernel, y):
    """``1 - theta(y)`` without cancellation near the plateau edge."""
    scalar = np.isscalar(y)
    y = np.abs(np.asarray(y, dtype=np.float64))
    out = _uniform_sum_cdf(kernel, y - kernel.a)
    out[y <= kernel.plateau] = 0.0
    out[y >= kernel.support] = 1.0
    return float(out) if scalar else out


_GL_X, _GL_W = np.polynomial.legendre.leggauss(40)
_PERIODS_PER_PANEL = 6


def inverse_transform_cutoff(kernel, level=1e-12):
    """Smallest ``x`` beyond which the decay bound stays below ``level``."""
    k = kernel.k
    # (1/(pi x)) (k / (2 pi x delta))^k = level  solved for x
    x = ((k / (2 * math.pi * kernel.delta)) ** k / (math.pi * level)) ** (1.0 / (k + 1))
    return x


def theta_via_fourier(kernel, y, level=1e-12):
    """``theta(y)`` recomputed as ``2 int_0^T Theta(x) cos(2 pi x y) dx``.

    ``T`` is where the decay bound drops below ``level``.  Gauss-Legendre
    panels of order 40 each span six periods of the fastest oscillation.
    """
    y = np.atleast_1d(np.abs(np.asarray(y, dtype=np.float64)))
    T = inverse_transform_cutoff(kernel, level)
    fmax = kernel.a + kernel.delta + float(y.max())
    width = _PERIODS_PER_PANEL / fmax
    n_panels = int(math.ceil(T / width))
    edges = np.linspace(0.0, T, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    wts = (half[:, None] * _GL_W[None, :]).ravel()
    vals = theta_hat(kernel, nodes) * wts
    return 2.0 * _kernels.cos_transform(nodes, vals, y)
