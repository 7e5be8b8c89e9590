"""Numeric model of the CM curve attached to q, from j((1 + sqrt(-q))/2)
down to the Weierstrass coefficients (A, B) = (mq/24, -nq^2/864).

The nome at tau = (1 + i sqrt(q))/2 is the negative real -e^(-pi sqrt(q)),
so the whole j computation stays real.  The catch is cancellation:
E4^3 - E6^2 = 1728 Delta is of order |nome|, so roughly pi sqrt(q)/ln 10
leading digits cancel in the denominator; the series therefore runs at a
precision boosted by exactly that many digits.
"""

import math
from dataclasses import dataclass

from mpmath.ctx_mp import MPContext

from .arith import is_prime, jacobi
from .errors import DomainError, InputError, ResourceError


@dataclass(frozen=True)
class CurveModel:
    q: int
    j: object
    m: object
    n: object
    A: object
    B: object


def _sigma(n, k):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def j_invariant(q, ctx):
    """j(tau) at tau = (1 + i sqrt(q))/2 via Eisenstein q-expansions,
    real by construction."""
    if not is_prime(q) or q % 4 != 3:
        raise InputError("q must be a prime congruent to 3 mod 4, got %r" % (q,))
    boost = int(math.pi * math.sqrt(q) / math.log(10)) + 11
    wd = ctx.mp.dps + boost
    if wd > 200_000:
        raise ResourceError("j series would need %d digits" % wd)
    hi = MPContext()
    hi.dps = wd
    lnq_abs = -math.pi * math.sqrt(q)
    target = -wd * math.log(10) - 5
    depth = 1
    while math.log(504) + 6 * math.log(depth + 1) + (depth + 1) * lnq_abs >= target:
        depth += 1
        if depth > 100_000:
            raise ResourceError("j series depth overflow at %d digits" % wd)
    nome = -hi.exp(-hi.pi * hi.sqrt(q))
    e4 = hi.mpf(1)
    e6 = hi.mpf(1)
    xn = hi.mpf(1)
    for n in range(1, depth + 1):
        xn = xn * nome
        e4 += 240 * _sigma(n, 3) * xn
        e6 -= 504 * _sigma(n, 5) * xn
    e43 = e4 ** 3
    den = e43 - e6 ** 2
    assert den != 0
    return ctx.mp.mpf(1728 * e43 / den)


def curve_model(q, ctx):
    """The real-embedded model y^2 = x^3 + Ax + B with m^3 = j,
    -n^2 q = j - 1728, n > 0 (sign (2|q) = +1 for q ≡ 7 mod 8)."""
    if not is_prime(q) or q % 8 != 7:
        raise InputError("q must be a prime congruent to 7 mod 8, got %r" % (q,))
    j = j_invariant(q, ctx)
    if j == 0 or j == 1728:
        raise DomainError("degenerate j-invariant %s" % j)
    assert j < 0 and jacobi(2, q) == 1
    m = -ctx.mp.cbrt(-j)
    n = ctx.mp.sqrt((1728 - j) / q)
    A = m * q / 24
    B = -n * q * q / 864
    if -16 * (4 * A ** 3 + 27 * B ** 2) == 0:
        raise DomainError("degenerate model at q=%d" % q)
    # round-trip through the j-faithful scaling (x-coefficient A/2,
    # giving c4 = -mq, c6 = nq^2); c4^3 - c6^2 = -1728 q^3 cancels about
    # pi sqrt(q)/ln 10 digits, so the two identities behind it are
    # checked separately, each being well conditioned
    c4 = -48 * (A / 2)
    c6 = -864 * B
    q3 = ctx.mp.mpf(q) ** 3
    assert abs(-(c4 ** 3) / (j * q3) - 1) < ctx.tol(3)
    assert abs(c6 ** 2 / ((1728 - j) * q3) - 1) < ctx.tol(3)
    return CurveModel(q=q, j=j, m=m, n=n, A=A, B=B)
