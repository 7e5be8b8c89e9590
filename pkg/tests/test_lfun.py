from fractions import Fraction

import pytest

from cmsha.classgroup import characters, class_group
from cmsha.errors import DomainError, InputError
from cmsha.hecke import build_psi, coefficients
from cmsha.lfun import central_value, smoothed_sum, total_L, truncation

GOLDEN_L7 = "0.96665585280840577336653841951490686552507"


def test_truncation_tail_bound(ctx32):
    q, digits = 7, 32
    for t in (Fraction(4, 5), Fraction(1), Fraction(6, 5)):
        M = truncation(q, digits, t)
        x = float(ctx32.mp.exp(-2 * ctx32.pi * ctx32.real(t) / q))
        tail = sum((n + 1) * x ** n for n in range(M + 1, M + 4000))
        assert tail < 10.0 ** (-digits - 2)
        # minimality: one step earlier the closed-form bound fails
        assert M >= 1


def test_truncation_monotone():
    assert truncation(7, 40, Fraction(1)) > truncation(7, 32, Fraction(1))
    assert truncation(7, 32, Fraction(4, 5)) > truncation(7, 32, Fraction(6, 5))
    assert truncation(23, 32, Fraction(1)) > truncation(7, 32, Fraction(1))
    with pytest.raises(DomainError):
        truncation(7, 32, Fraction(0))
    with pytest.raises(DomainError):
        truncation(7, 32, Fraction(-1))


def _padded_series(ctx, q, vals, t):
    """CoeffSeries long enough for smoothed_sum at t, with a_n = vals
    in front and zeros afterwards."""
    from cmsha.hecke import CoeffSeries
    M = truncation(q, ctx.digits, t)
    a = [ctx.mp.mpc(0)] * (M + 2)
    for n, v in enumerate(vals):
        a[n] = ctx.mp.mpc(v)
    return CoeffSeries(q=q, chi_index=0, a=a, ctx=ctx)


def test_smoothed_sum_basics(ctx32):
    mp = ctx32.mp
    q = 7
    t = Fraction(1)
    one = _padded_series(ctx32, q, (0, 1), t)
    got = smoothed_sum(one, t, q, ctx32)
    assert abs(got - mp.exp(-2 * ctx32.pi / q)) < ctx32.tol(4)
    # linearity
    a = _padded_series(ctx32, q, (0, mp.mpc(2, 1), mp.mpc(-1, 3)), t)
    b = _padded_series(ctx32, q, (0, mp.mpc(1, -1), mp.mpc(4)), t)
    ab = _padded_series(ctx32, q,
                        (0, mp.mpc(3, 0), mp.mpc(3, 3)), t)
    assert abs(smoothed_sum(ab, t, q, ctx32)
               - smoothed_sum(a, t, q, ctx32)
               - smoothed_sum(b, t, q, ctx32)) < ctx32.tol(4)
    with pytest.raises(InputError):
        smoothed_sum(_padded_series(ctx32, q, (0, 1), Fraction(3)), t, q, ctx32)


def test_central_value_q7_golden(ctx32):
    q = 7
    G = class_group(q)
    psi = build_psi(G, ctx32)
    M = truncation(q, 32, Fraction(4, 5))
    ser = coefficients(psi, characters(G)[0], M, q)
    cv = central_value(ser, q, ctx32)
    assert abs(abs(cv.L) - ctx32.mp.mpf(GOLDEN_L7)) < ctx32.tol(5)
    # self-dual line: w is +1
    assert abs(cv.w - 1) < ctx32.tol(5)
    assert cv.residual < ctx32.tol(5)
    assert cv.nonzero


def test_central_value_stability_under_longer_series(ctx32):
    q = 23
    G = class_group(q)
    psi = build_psi(G, ctx32)
    chi = characters(G)[1]
    M = truncation(q, 32, Fraction(4, 5))
    a = central_value(coefficients(psi, chi, M, q), q, ctx32)
    b = central_value(coefficients(psi, chi, 2 * M, q), q, ctx32)
    assert abs(a.L - b.L) < ctx32.tol(5)
    assert abs(a.w - b.w) < ctx32.tol(5)


def test_total_L_q7_is_golden_squared(ctx32):
    tl = total_L(7, 32)
    want = ctx32.mp.mpf(GOLDEN_L7) ** 2
    assert abs(tl.L_total - want) < ctx32.tol(4)
    assert tl.h == 1 and len(tl.per_chi) == 1


def test_total_L_is_product_of_squared_moduli(ctx32):
    # each chi line is paired with its conjugated series, whose central
    # value must come out as the complex conjugate, so the total collapses
    # to prod |L(psi chi)|^2
    tl = total_L(23, 32)
    assert len(tl.per_chi) == 3
    prod = ctx32.mp.mpf(1)
    for cv in tl.per_chi:
        prod *= abs(cv.L) ** 2
    assert abs(prod / tl.L_total - 1) < ctx32.tol(6)


def test_total_L_cache_and_grids():
    a = total_L(7, 32)
    assert total_L(7, 32) is a
    b = total_L(7, 32, tgrid=(Fraction(9, 10), Fraction(13, 10)))
    assert b is not a
    assert abs(b.L_total - a.L_total) < 1e-26


def test_total_L_grid_validation():
    for grid in ((Fraction(1), Fraction(1)),
                 (Fraction(1),),
                 (Fraction(1), Fraction(6, 5), Fraction(6, 5)),
                 (Fraction(-1), Fraction(6, 5)),
                 (Fraction(0), Fraction(6, 5))):
        with pytest.raises((InputError, DomainError)):
            total_L(7, 32, tgrid=grid)
