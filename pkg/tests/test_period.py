import pytest

from cmsha.errors import InputError
from cmsha.numerics import make_context
from cmsha.period import gamma_product

GOLDEN_G7 = "11.017192875858167882743462262180784893141636924717"


def test_gamma_product_q7_golden(ctx32):
    gp = gamma_product(7, ctx32)
    assert gp.q == 7
    assert abs(gp.G - ctx32.mp.mpf(GOLDEN_G7)) < ctx32.tol(2)


def test_routes_agree_across_sizes(ctx32):
    for q in (7, 23, 71, 167, 503):
        gp = gamma_product(q, ctx32)
        assert gp.G > 0
        assert gp.crosscheck_residual < ctx32.tol(3)


def test_q3_case_also_supported(ctx32):
    # the product is defined for any prime q ≡ 3 mod 4
    gp = gamma_product(11, ctx32)
    assert gp.G > 0 and gp.crosscheck_residual < ctx32.tol(3)


def test_validation(ctx32):
    for bad in (13, 15, 2, 1, -7):
        with pytest.raises(InputError):
            gamma_product(bad, ctx32)


def test_precision_stability():
    a = gamma_product(7, make_context(32)).G
    b = gamma_product(7, make_context(64)).G
    assert abs(a / make_context(32).mp.mpf(b) - 1) < 1e-30


def test_growth_sanity(ctx32):
    # G(q) spans many orders of magnitude across q; the crosscheck is
    # relative, so it must hold regardless of the value's size
    for q in (359, 479, 4831):
        gp = gamma_product(q, ctx32)
        assert gp.G > 0
        assert gp.crosscheck_residual < ctx32.tol(3)
