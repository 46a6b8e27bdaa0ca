"""Hot inner loops.

Every kernel exists twice: a ``*_nb`` loop compiled with numba and a
``*_np`` version written with vectorised numpy.  The public name is bound to
one of them at import time according to ``_accel.USE_NUMBA``.  Both
versions accept and return the same types so tests and the benchmark can
call either directly.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# segmented multiplicative sieve


@njit
def _sieve_segment_nb(lo, hi, base):
    n = hi - lo
    rem = np.empty(n, dtype=np.int64)
    for i in range(n):
        rem[i] = lo + i
    spf = np.zeros(n, dtype=np.int64)
    phi = np.ones(n, dtype=np.int64)
    mu = np.ones(n, dtype=np.int8)
    tau = np.ones(n, dtype=np.int32)
    nprimes = np.zeros(n, dtype=np.int32)
    lastp = np.zeros(n, dtype=np.int64)
    for p in base:
        if p > hi - 1:
            break
        start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            i = m - lo
            e = 0
            pk = 1
            while rem[i] % p == 0:
                rem[i] //= p
                e += 1
                pk *= p
            if spf[i] == 0:
                spf[i] = p
            phi[i] *= (pk // p) * (p - 1)
            if e > 1:
                mu[i] = 0
            else:
                mu[i] = -mu[i]
            tau[i] *= e + 1
            nprimes[i] += 1
            lastp[i] = p
    lam = np.zeros(n, dtype=np.float64)
    for i in range(n):
        r = rem[i]
        if r > 1:
            if spf[i] == 0:
                spf[i] = r
            phi[i] *= r - 1
            mu[i] = -mu[i]
            tau[i] *= 2
            nprimes[i] += 1
            lastp[i] = r
        if nprimes[i] == 1:
            lam[i] = math.log(lastp[i])
        if lo + i == 1:
            spf[i] = 1
    return spf, phi, mu, tau, lam


def _sieve_segment_np(lo, hi, base):
    n = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    spf = np.zeros(n, dtype=np.int64)
    phi = np.ones(n, dtype=np.int64)
    mu = np.ones(n, dtype=np.int8)
    tau = np.ones(n, dtype=np.int32)
    nprimes = np.zeros(n, dtype=np.int32)
    lastp = np.zeros(n, dtype=np.int64)
    for p in np.asarray(base, dtype=np.int64):
        p = int(p)
        if p > hi - 1:
            break
        start = ((lo + p - 1) // p) * p
        idx = np.arange(start - lo, n, p)
        if idx.size == 0:
            continue
        sub = rem[idx]
        e = np.zeros(idx.size, dtype=np.int64)
        div = sub % p == 0
        while div.any():
            sub[div] //= p
            e[div] += 1
            div = sub % p == 0
        rem[idx] = sub
        spf_sub = spf[idx]
        spf_sub[spf_sub == 0] = p
        spf[idx] = spf_sub
        phi[idx] *= p ** (e - 1) * (p - 1)
        mu_sub = mu[idx]
        mu[idx] = np.where(e > 1, 0, -mu_sub).astype(np.int8)
        tau[idx] *= (e + 1).astype(np.int32)
        nprimes[idx] += 1
        lastp[idx] = p
    big = rem > 1
    spf = np.where(big & (spf == 0), rem, spf)
    phi[big] *= rem[big] - 1
    mu[big] = -mu[big]
    tau[big] *= 2
    nprimes[big] += 1
    lastp[big] = rem[big]
    lam = np.zeros(n, dtype=np.float64)
    one = nprimes == 1
    # the C library log, as in the compiled path
    lam[one] = np.fromiter(map(math.log, lastp[one].tolist()), dtype=np.float64,
                           count=int(one.sum()))
    if lo <= 1 < hi:
        spf[1 - lo] = 1
    return spf, phi, mu, tau, lam


# ---------------------------------------------------------------------------
# exponential sums  sum_j w_j e(t n_j^c)


@njit
def _phase_sum_nb(n, w, t, c):
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for j in range(n.size):
        ph = t * n[j] ** c
        ph -= math.floor(ph)
        ang = TWO_PI * ph
        co = math.cos(ang)
        sn = math.sin(ang)
        wr = w[j].real
        wi = w[j].imag
        xr = wr * co - wi * sn
        xi = wr * sn + wi * co
        # Neumaier compensation, real and imaginary parts separately
        s2 = sr + xr
        if abs(sr) >= abs(xr):
            cr += (sr - s2) + xr
        else:
            cr += (xr - s2) + sr
        sr = s2
        s2 = si + xi
        if abs(si) >= abs(xi):
            ci += (si - s2) + xi
        else:
            ci += (xi - s2) + si
        si = s2
    return complex(sr + cr, si + ci)


def _phase_sum_np(n, w, t, c):
    ph = t * np.power(n, c)
    ph -= np.floor(ph)
    terms = w * np.exp(1j * TWO_PI * ph)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


@njit
def _phase_sum_grid_nb(n, w, ts, c):
    out = np.empty(ts.size, dtype=np.complex128)
    nc = np.empty(n.size, dtype=np.float64)
    for j in range(n.size):
        nc[j] = n[j] ** c
    for k in range(ts.size):
        t = ts[k]
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for j in range(n.size):
            ph = t * nc[j]
            ph -= math.floor(ph)
            ang = TWO_PI * ph
            co = math.cos(ang)
            sn = math.sin(ang)
            xr = w[j].real * co - w[j].imag * sn
            xi = w[j].real * sn + w[j].imag * co
            s2 = sr + xr
            if abs(sr) >= abs(xr):
                cr += (sr - s2) + xr
            else:
                cr += (xr - s2) + sr
            sr = s2
            s2 = si + xi
            if abs(si) >= abs(xi):
                ci += (si - s2) + xi
            else:
                ci += (xi - s2) + si
            si = s2
        out[k] = complex(sr + cr, si + ci)
    return out


def _phase_sum_grid_np(n, w, ts, c):
    nc = np.power(n, c)
    out = np.empty(ts.size, dtype=np.complex128)
    step = max(1, (1 << 22) // max(1, nc.size))
    for lo in range(0, ts.size, step):
        ph = np.multiply.outer(ts[lo:lo + step], nc)
        ph -= np.floor(ph)
        out[lo:lo + step] = np.exp(1j * TWO_PI * ph) @ w
    return out


# ---------------------------------------------------------------------------
# bilinear sums  sum_d A[d] sum_l B[l] chi(dl) e(t d^c l^c)
# with d in [d_lo, d_hi], l in [l_lo, l_hi], dl_lo < d*l <= dl_hi


@njit
def _bilinear_sum_nb(d_lo, d_hi, A, l_lo, l_hi, B, dl_lo, dl_hi, chi, t, c):
    q = chi.size
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for d in range(d_lo, d_hi + 1):
        a = A[d]
        if a == 0:
            continue
        lmin = max(l_lo, dl_lo // d + 1)
        lmax = min(l_hi, dl_hi // d)
        dc = float(d) ** c
        for l in range(lmin, lmax + 1):
            b = B[l]
            if b == 0:
                continue
            ch = chi[(d * l) % q]
            if ch == 0:
                continue
            ph = t * (dc * float(l) ** c)
            ph -= math.floor(ph)
            ang = TWO_PI * ph
            z = a * b * ch * complex(math.cos(ang), math.sin(ang))
            xr = z.real
            xi = z.imag
            s2 = sr + xr
            if abs(sr) >= abs(xr):
                cr += (sr - s2) + xr
            else:
                cr += (xr - s2) + sr
            sr = s2
            s2 = si + xi
            if abs(si) >= abs(xi):
                ci += (si - s2) + xi
            else:
                ci += (xi - s2) + si
            si = s2
    return complex(sr + cr, si + ci)


def _bilinear_sum_np(d_lo, d_hi, A, l_lo, l_hi, B, dl_lo, dl_hi, chi, t, c):
    q = chi.size
    parts_r = []
    parts_i = []
    for d in range(d_lo, d_hi + 1):
        a = A[d]
        if a == 0:
            continue
        lmin = max(l_lo, dl_lo // d + 1)
        lmax = min(l_hi, dl_hi // d)
        if lmax < lmin:
            continue
        l = np.arange(lmin, lmax + 1)
        ph = t * (float(d) ** c * np.power(l.astype(np.float64), c))
        ph -= np.floor(ph)
        z = a * B[lmin:lmax + 1] * chi[(d * l) % q] * np.exp(1j * TWO_PI * ph)
        parts_r.append(z.real)
        parts_i.append(z.imag)
    if not parts_r:
        return 0j
    return complex(math.fsum(np.concatenate(parts_r)), math.fsum(np.concatenate(parts_i)))


# ---------------------------------------------------------------------------
# ternary / binary window searches over sorted p^c


@njit
def _triple_search_nb(pc, idx1, N, eps, fill, out1, out2, out3):
    P = pc.size
    cnt = 0
    slack = 1e-12 * max(1.0, abs(N))
    for a in range(idx1.size):
        i1 = idx1[a]
        for i2 in range(P):
            s = pc[i1] + pc[i2]
            if s + pc[0] - N > eps + slack:
                break
            j = np.searchsorted(pc, N - eps - s - slack)
            while j < P and pc[j] < N + eps - s + slack:
                res = pc[i1] + pc[i2] + pc[j] - N
                if abs(res) < eps:
                    if fill:
                        out1[cnt] = i1
                        out2[cnt] = i2
                        out3[cnt] = j
                    cnt += 1
                j += 1
    return cnt


def _triple_search_np(pc, idx1, N, eps, fill, out1, out2, out3):
    P = pc.size
    slack = 1e-12 * max(1.0, abs(N))
    cnt = 0
    for i1 in idx1:
        s = pc[i1] + pc
        lo = np.searchsorted(pc, N - eps - s - slack, side="left")
        hi = np.searchsorted(pc, N + eps - s + slack, side="left")
        lens = hi - lo
        if lens.sum() == 0:
            continue
        i2 = np.repeat(np.arange(P), lens)
        offs = np.arange(lens.sum()) - np.repeat(np.cumsum(lens) - lens, lens)
        j = np.repeat(lo, lens) + offs
        res = pc[i1] + pc[i2] + pc[j] - N
        keep = np.abs(res) < eps
        k = int(keep.sum())
        if fill and k:
            out1[cnt:cnt + k] = i1
            out2[cnt:cnt + k] = i2[keep]
            out3[cnt:cnt + k] = j[keep]
        cnt += k
    return cnt


@njit
def _pair_count_nb(pc, N, eps):
    P = pc.size
    cnt = 0
    slack = 1e-12 * max(1.0, abs(N))
    for i1 in range(P):
        j = np.searchsorted(pc, N - eps - pc[i1] - slack)
        while j < P and pc[j] < N + eps - pc[i1] + slack:
            if abs(pc[i1] + pc[j] - N) < eps:
                cnt += 1
            j += 1
    return cnt


def _pair_count_np(pc, N, eps):
    slack = 1e-12 * max(1.0, abs(N))
    lo = np.searchsorted(pc, N - eps - pc - slack, side="left")
    hi = np.searchsorted(pc, N + eps - pc + slack, side="left")
    lens = hi - lo
    if lens.sum() == 0:
        return 0
    i1 = np.repeat(np.arange(pc.size), lens)
    offs = np.arange(lens.sum()) - np.repeat(np.cumsum(lens) - lens, lens)
    j = np.repeat(lo, lens) + offs
    return int(np.count_nonzero(np.abs(pc[i1] + pc[j] - N) < eps))


# ---------------------------------------------------------------------------
# divisor statistics over a window of divisors


@njit
def _window_divisor_sums_nb(m_max, d_lo, d_hi, weights):
    """For m <= m_max: (sum of weights[d], count) over d | m, d_lo <= d <= d_hi."""
    s = np.zeros(m_max + 1, dtype=np.int64)
    cnt = np.zeros(m_max + 1, dtype=np.int64)
    for d in range(max(1, d_lo), min(d_hi, m_max) + 1):
        wd = weights[d]
        for m in range(d, m_max + 1, d):
            s[m] += wd
            cnt[m] += 1
    return s, cnt


def _window_divisor_sums_np(m_max, d_lo, d_hi, weights):
    s = np.zeros(m_max + 1, dtype=np.int64)
    cnt = np.zeros(m_max + 1, dtype=np.int64)
    for d in range(max(1, d_lo), min(d_hi, m_max) + 1):
        s[d::d] += weights[d]
        cnt[d::d] += 1
    return s, cnt


# ---------------------------------------------------------------------------
# residue-class sums  out[r] = sum_{n_j = r mod d} w_j


@njit
def _residue_sums_nb(n, w, d):
    sr = np.zeros(d)
    cr = np.zeros(d)
    si = np.zeros(d)
    ci = np.zeros(d)
    for j in range(n.size):
        r = n[j] % d
        xr = w[j].real
        xi = w[j].imag
        s2 = sr[r] + xr
        if abs(sr[r]) >= abs(xr):
            cr[r] += (sr[r] - s2) + xr
        else:
            cr[r] += (xr - s2) + sr[r]
        sr[r] = s2
        s2 = si[r] + xi
        if abs(si[r]) >= abs(xi):
            ci[r] += (si[r] - s2) + xi
        else:
            ci[r] += (xi - s2) + si[r]
        si[r] = s2
    out = np.empty(d, dtype=np.complex128)
    for r in range(d):
        out[r] = complex(sr[r] + cr[r], si[r] + ci[r])
    return out


def _residue_sums_np(n, w, d):
    r = n % d
    return (np.bincount(r, weights=w.real, minlength=d)
            + 1j * np.bincount(r, weights=w.imag, minlength=d))


# ---------------------------------------------------------------------------
# cosine transform  out[k] = sum_j v_j cos(2 pi x_j y_k)


@njit
def _cos_transform_nb(x, v, ys):
    out = np.empty(ys.size)
    for k in range(ys.size):
        y = ys[k]
        s = 0.0
        comp = 0.0
        for j in range(x.size):
            ph = x[j] * y
            ph -= math.floor(ph)
            term = v[j] * math.cos(TWO_PI * ph)
            s2 = s + term
            if abs(s) >= abs(term):
                comp += (s - s2) + term
            else:
                comp += (term - s2) + s
            s = s2
        out[k] = s + comp
    return out


def _cos_transform_np(x, v, ys):
    out = np.empty(ys.size)
    step = max(1, (1 << 22) // max(1, ys.size))
    acc = np.zeros(ys.size)
    for lo in range(0, x.size, step):
        ph = np.multiply.outer(ys, x[lo:lo + step])
        ph -= np.floor(ph)
        acc += np.cos(TWO_PI * ph) @ v[lo:lo + step]
    out[:] = acc
    return out


if USE_NUMBA:
    sieve_segment = _sieve_segment_nb
    phase_sum = _phase_sum_nb
    phase_sum_grid = _phase_sum_grid_nb
    bilinear_sum = _bilinear_sum_nb
    triple_search = _triple_search_nb
    pair_count = _pair_count_nb
    window_divisor_sums = _window_divisor_sums_nb
    residue_sums = _residue_sums_nb
    cos_transform = _cos_transform_nb
else:
    sieve_segment = _sieve_segment_np
    phase_sum = _phase_sum_np
    phase_sum_grid = _phase_sum_grid_np
    bilinear_sum = _bilinear_sum_np
    triple_search = _triple_search_np
    pair_count = _pair_count_np
    window_divisor_sums = _window_divisor_sums_np
    residue_sums = _residue_sums_np
    cos_transform = _cos_transform_np

KERNELS = {
    "sieve_segment": (_sieve_segment_nb, _sieve_segment_np),
    "phase_sum": (_phase_sum_nb, _phase_sum_np),
    "phase_sum_grid": (_phase_sum_grid_nb, _phase_sum_grid_np),
    "bilinear_sum": (_bilinear_sum_nb, _bilinear_sum_np),
    "triple_search": (_triple_search_nb, _triple_search_np),
    "pair_count": (_pair_count_nb, _pair_count_np),
    "window_divisor_sums": (_window_divisor_sums_nb, _window_divisor_sums_np),
    "residue_sums": (_residue_sums_nb, _residue_sums_np),
    "cos_transform": (_cos_transform_nb, _cos_transform_np),
}
