import cmath
import math

import numpy as np
import pytest

from linnikps import arith, decomp
from linnikps.decomp import BilinearSpec
from linnikps.errors import ParameterError

import oracles


def _c_coef(d, u):
    return sum(oracles.mobius(m) * oracles.mangoldt(d // m)
               for m in oracles.divisors(d) if m <= u and d // m <= u)


def _a_coef(d, u):
    return sum(oracles.mobius(m) for m in oracles.divisors(d) if m <= u)


def _vaughan_brute(y, u, chi_table, t, c):
    """All four sums and Psi_1 by plain loops over (d, l)."""
    q = len(chi_table)
    Y = int(math.floor(y))

    def term(n):
        return chi_table[n % q] * oracles.phase(t, n, c)

    U1 = U2 = U3 = U4 = 0j
    for d in range(1, Y + 1):
        cd = _c_coef(d, u) if d <= u * u else 0.0
        ad = _a_coef(d, u) if d > u else 0
        mud = oracles.mobius(d) if d <= u else 0
        for l in range(1, Y // d + 1):
            n = d * l
            if n > u:
                if d <= u:
                    U1 += mud * math.log(l) * term(n)
                    U2 += cd * term(n)
                elif d <= u * u:
                    U3 += cd * term(n)
            if d > u and l > u and ad:
                U4 += ad * oracles.mangoldt(l) * term(n)
    psi1 = sum(oracles.mangoldt(n) * term(n) for n in range(int(math.floor(u)) + 1, Y + 1))
    return U1, U2, U3, U4, psi1


def _close(a, b, tol):
    return abs(a - b) <= tol


# ---------------------------------------------------------------------------
# Vaughan identity


def test_principal_t0_example():
    sp = decomp.vaughan_split(100, 3, arith.principal_character(1), 0.0, 1.05)
    psi = math.fsum(oracles.mangoldt(n) for n in range(4, 101))
    assert sp.Psi1.real == pytest.approx(psi, abs=1e-12)
    assert sp.residual < 1e-10


@pytest.mark.parametrize("y,u,d,t,c", [(100, 3, 1, 0.0, 1.05), (50, 7, 1, 0.0, 1.05), (50, 7, 4, 0.3, 1.2),
                                       (300, 5.5, 4, 0.2, 1.05), (200, 2, 5, -0.7, 2.5)])
def test_each_sum_against_brute_force(y, u, d, t, c):
    chi = arith.characters_mod(d)[-1]
    ref = _vaughan_brute(y, u, list(chi.values), t, c)
    sp = decomp.vaughan_split(y, u, chi, t, c)
    for got, want in zip((sp.U1, sp.U2, sp.U3, sp.U4, sp.Psi1), ref):
        assert _close(got, want, 1e-9 * max(1.0, abs(want)) + 1e-9)
    assert sp.residual < 1e-8


def test_chi4_residual():
    sp = decomp.vaughan_split(1000, 5, arith.chi4_character(), 0.2, 1.05)
    assert sp.residual < 1e-6


def test_randomised_identity():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(50):
        y = float(rng.uniform(10, 1e4))
        u = float(rng.uniform(2, math.sqrt(y)))
        g = arith.characters_mod(int(rng.integers(1, 9)))
        chi = g[int(rng.integers(0, len(g)))]
        sp = decomp.vaughan_split(y, u, chi, float(rng.uniform(-1, 1)), float(rng.choice([1.05, 1.2])))
        worst = max(worst, sp.residual)
    print(f"worst Vaughan residual {worst:.3g}")
    assert worst <= 1e-6


def test_split_preconditions():
    chi = arith.principal_character(1)
    with pytest.raises(ParameterError):
        decomp.vaughan_split(40, 7, chi, 0.0, 1.05)
    with pytest.raises(ParameterError):
        decomp.vaughan_split(40, 0.5, chi, 0.0, 1.05)


def test_coefficients_against_definition():
    cc, aa = decomp.vaughan_coefficients(6.5, 300)
    for d in range(1, 301):
        assert cc[d] == pytest.approx(_c_coef(d, 6.5), abs=1e-12)
        assert aa[d] == _a_coef(d, 6.5)


@pytest.mark.parametrize("u", [2, 3.5, 10, 31.6, 100])
def test_coefficient_bounds(u):
    assert decomp.coefficient_bounds_hold(u, 10**4)


# ---------------------------------------------------------------------------
# Type I / II sums


def _double_loop(M, L, c, t, a, b=None):
    ms = range(int(M // 2) + 1, int(M) + 1)
    ls = list(range(int(L // 2) + 1, int(L) + 1))
    bb = b if b is not None else [1.0] * len(ls)
    return sum(am * bl * cmath.exp(2j * math.pi * t * m**c * l**c)
               for am, m in zip(a, ms) for bl, l in zip(bb, ls))


def _mu_block(M):
    return np.array([oracles.mobius(m) for m in decomp.dyadic_block(M)], dtype=float)


def _lambda_block(L):
    ls = decomp.dyadic_block(L)
    return np.array([oracles.mangoldt(l) for l in ls]) / math.log(L)


def test_dyadic_block():
    assert decomp.dyadic_block(8).tolist() == [5, 6, 7, 8]
    assert decomp.dyadic_block(9.5).tolist() == [5, 6, 7, 8, 9]
    assert decomp.dyadic_block(1).tolist() == [1]


def test_type1_zero():
    assert decomp.type1_sum(BilinearSpec(32, 64, 1.05, 0.1, np.zeros(16))) == 0


def test_type1_counting():
    s = decomp.type1_sum(BilinearSpec(32, 64, 1.05, 0.0, np.ones(16)))
    assert s == 16 * 32


def test_type1_example():
    spec = BilinearSpec(32, 512, 1.05, 0.1, _mu_block(32))
    got = decomp.type1_sum(spec)
    ref = _double_loop(32, 512, 1.05, 0.1, spec.a_coeffs)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))
    print(f"|S_I| / X^(373/400) = {abs(got) / spec.comparison():.4g}")


def test_type2_zero_and_counting():
    assert decomp.type2_sum(BilinearSpec(16, 16, 1.05, 0.2, np.ones(8), np.zeros(8))) == 0
    assert decomp.type2_sum(BilinearSpec(16, 16, 1.05, 0.0, np.ones(8), np.ones(8))) == 64


def test_type2_example():
    spec = BilinearSpec(256, 64, 1.05, 0.1, _mu_block(256), _lambda_block(64))
    got = decomp.type2_sum(spec)
    ref = _double_loop(256, 64, 1.05, 0.1, spec.a_coeffs, spec.b_coeffs)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_type2_needs_b():
    with pytest.raises(ParameterError):
        decomp.type2_sum(BilinearSpec(16, 16, 1.05, 0.2, np.ones(8)))


def test_spec_block_lengths():
    with pytest.raises(ParameterError):
        BilinearSpec(16, 16, 1.05, 0.2, np.ones(7))
    with pytest.raises(ParameterError):
        BilinearSpec(16, 16, 1.05, 0.2, np.ones(8), np.ones(9))
    with pytest.raises(ParameterError):
        BilinearSpec(0.5, 16, 1.05, 0.2, np.ones(0))


def _random_bilinear(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        M = float(rng.integers(2, 300))
        L = float(rng.integers(2, 300))
        c = float(rng.choice([1.05, 1.2, 2.5]))
        t = float(rng.uniform(-1, 1)) * min(1.0, 1e4 / (M * L) ** c)
        a = rng.uniform(-1, 1, decomp.dyadic_block(M).size)
        b = rng.uniform(-1, 1, decomp.dyadic_block(L).size) if i % 2 else None
        out.append(BilinearSpec(M, L, c, t, a, b))
    return out


@pytest.mark.parametrize("spec", _random_bilinear(20, 8))
def test_random_bilinear_against_loop(spec):
    got = decomp.type2_sum(spec) if spec.b_coeffs is not None else decomp.type1_sum(spec)
    ref = _double_loop(spec.M, spec.L, spec.c, spec.t, spec.a_coeffs, spec.b_coeffs)
    scale = np.abs(spec.a_coeffs).sum() * decomp.dyadic_block(spec.L).size
    assert abs(got - ref) <= 1e-9 * max(1.0, scale)


# ---------------------------------------------------------------------------
# bound formulas


def test_exponent_pair_values():
    assert decomp.exponent_pair_bound(0.5, 0.5, 1, 1) == 2
    assert decomp.exponent_pair_bound(0.5, 0.5, 1e4, 1e6) == pytest.approx(1e5 + 1e-4, rel=1e-15)
    with pytest.raises(ParameterError):
        decomp.exponent_pair_bound(0.7, 0.5, 1, 1)


def test_exponent_pair_against_direct_sum():
    s = abs(sum(cmath.exp(2j * math.pi * 0.37 * n**1.5) for n in range(1, 1001)))
    Y = 0.37 * 1.5 * math.sqrt(1000)
    for kappa, lam in decomp.PAIRS:
        assert s <= decomp.exponent_pair_bound(kappa, lam, Y, 1000)


def test_bw_unit():
    assert decomp.bilinear_bound_bw(1, 1, 1, 1.05, 1.05) == pytest.approx(6.0, rel=1e-15)


def test_bw_degenerate():
    with pytest.raises(ParameterError):
        decomp.bilinear_bound_bw(1, 1, 1, 1.0, 1.05)
    with pytest.raises(ParameterError):
        decomp.bilinear_bound_bw(1, 1, 1, 1.05, 2.0)


def test_bw_grows_with_F():
    vals = [decomp.bilinear_bound_bw(B, 50, 60, 1.05, 1.05) for B in np.geomspace(1, 1e12, 13)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    F = 1e12 * 50**1.05 * 60**1.05
    lead = F ** (3 / 14) * 50 ** (41 / 56) * 60 ** (29 / 56)
    assert lead / vals[-1] > 0.5


def test_bw_bounds_type1():
    rng = np.random.default_rng(13)
    rows = []
    for i in range(10):
        M = float(rng.integers(20, 200))
        L = float(rng.integers(20, 200))
        t = float(rng.uniform(1, 100)) / (M * L) ** 1.05
        spec = BilinearSpec(M, L, 1.05, t, _mu_block(M))
        s = decomp.type1_sum(spec)
        bound = decomp.bilinear_bound_bw(t, M, L, 1.05, 1.05) * (M * L) ** decomp.ETA
        rows.append((i, s, bound))
        assert abs(s) <= bound
    assert len(decomp.bound_rows(rows)) == 10


def test_sw_unit_and_domain():
    assert decomp.bilinear_bound_sw(1, 1, 1) == pytest.approx(11.0, rel=1e-15)
    with pytest.raises(ParameterError):
        decomp.bilinear_bound_sw(0.5, 1, 1)


def test_sw_bounds_type2():
    rng = np.random.default_rng(14)
    for _ in range(10):
        M = float(rng.integers(20, 200))
        L = float(rng.integers(20, 200))
        t = float(rng.uniform(1, 100)) / (M * L) ** 1.05
        F = t * (M * L) ** 1.05
        spec = BilinearSpec(M, L, 1.05, t, _mu_block(M), _lambda_block(L))
        s = decomp.type2_sum(spec)
        assert abs(s) <= decomp.bilinear_bound_sw(F, M, L) * (F * M * L) ** decomp.ETA


def _positive_exponent_monotone(fn, terms, which):
    base = [3.0, 40.0, 50.0]
    for j, (ef, em, el) in enumerate(terms):
        exps = (ef, em, el)
        if exps[which] <= 0:
            continue
        lo = list(base)
        hi = list(base)
        hi[which] *= 2
        t_lo = lo[0] ** ef * lo[1] ** em * lo[2] ** el
        t_hi = hi[0] ** ef * hi[1] ** em * hi[2] ** el
        assert t_hi > t_lo, f"term {j}"
    lo = fn(*base)
    hi = list(base)
    hi[which] *= 2
    return lo, fn(*hi)


@pytest.mark.parametrize("which", [1, 2])
def test_sw_monotone(which):
    lo, hi = _positive_exponent_monotone(decomp.bilinear_bound_sw, decomp.SW_TERMS, which)
    assert hi > lo


def test_sw_monotone_in_F_per_term():
    _positive_exponent_monotone(decomp.bilinear_bound_sw, decomp.SW_TERMS, 0)


def test_bw_monotone_in_M_and_L():
    for which in (1, 2):
        _positive_exponent_monotone(lambda F, M, L: 0.0, decomp.BW_TERMS, which)
    a = decomp.bilinear_bound_bw(1.0, 40, 50, 1.05, 1.05)
    assert decomp.bilinear_bound_bw(1.0, 80, 50, 1.05, 1.05) > a
    assert decomp.bilinear_bound_bw(1.0, 40, 100, 1.05, 1.05) > a


@pytest.mark.parametrize("X", [1e3, 1e6, 1e9, 1e12])
def test_hb_choice_satisfies_regimes(X):
    ok, ratios = decomp.hb_regimes(*decomp.default_hb_choice(X), X)
    assert ok
    assert all(0.9 < r < 1.1 for r in ratios.values())


def test_hb_regime_violation():
    ok, _ = decomp.hb_regimes(5.0, 4.0, 100.5, 1e6)
    assert not ok
    ok, _ = decomp.hb_regimes(10.0, 20.0, 100.3, 1e6)
    assert not ok
