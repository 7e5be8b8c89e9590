"""Assembly of the conjectural analytic Sha order

    sha = q^(3h/2) * L(E/H,1) / (2^(3h-4) pi^h G(q))

with its integrality, squareness and stability bookkeeping.  The integer
pieces q^(3h/2) and 2^(3h-4) are built from exact powers (h is odd, so
q^(3h/2) = q^h * q^((h-1)/2) * sqrt(q)); the exp/ln route is only used to
double-check that no log-domain drift crept in.
"""

import math
import time
from dataclasses import dataclass
from functools import lru_cache

from .arith import is_prime
from .classgroup import class_group
from .curve import curve_model
from .errors import DomainError, InputError, PrecisionExhausted
from .lfun import total_L
from .numerics import make_context
from .period import gamma_product


@dataclass(frozen=True)
class ShaReport:
    q: int
    h: int
    clgp: tuple
    digits: int
    L_total: object
    G: object
    sha_real: object
    sha_round: int
    residual: object
    is_square: bool
    sha_sqrt: object
    per_chi: tuple
    j: object
    m: object
    n: object
    max_w_dev: object
    runtime_ms: float
    verified: bool


def is_perfect_square(n):
    """(True, root) when n is a perfect square, else (False, None)."""
    if n < 0:
        raise DomainError("need n >= 0, got %r" % (n,))
    r = math.isqrt(n)
    return (True, r) if r * r == n else (False, None)


@lru_cache(maxsize=None)
def _gamma_cached(q, digits):
    return gamma_product(q, make_context(digits))


@lru_cache(maxsize=None)
def _curve_cached(q, digits):
    return curve_model(q, make_context(digits))


def sha_order(q, digits, tgrid=None, branch=None, safety=0, strict=False):
    """Evaluate the conjectural order for one q.

    The record is never silently rounded: when the residual exceeds the
    acceptance threshold 10^(-digits/2) the report comes back with
    verified=False (or, with strict=True, raises PrecisionExhausted so a
    caller can retry at higher digits).
    """
    start = time.perf_counter()
    if isinstance(q, bool) or not isinstance(q, int):
        raise InputError("q must be an integer, got %r" % (q,))
    if q < 2 or not is_prime(q):
        raise InputError("q=%r is not prime" % (q,))
    if q % 8 != 7:
        raise InputError("q=%d is not congruent to 7 mod 8" % q)
    ctx = make_context(digits)
    tl = total_L(q, digits, tgrid=tgrid, branch=branch, safety=safety)
    gp = _gamma_cached(q, digits)
    cm = _curve_cached(q, digits)
    h = tl.h
    qq = ctx.mp.mpf(q)
    qpow = qq ** h * qq ** ((h - 1) // 2) * ctx.mp.sqrt(qq)
    drift = abs(qpow / ctx.mp.exp(ctx.mp.mpf(3 * h) / 2 * ctx.mp.ln(qq)) - 1)
    assert drift < ctx.tol(2)
    two_pow = ctx.mp.mpf(2) ** (3 * h - 4)
    sha_real = qpow * tl.L_total / (two_pow * ctx.pi ** h * gp.G)
    sha_round = int(ctx.mp.floor(sha_real + ctx.mp.mpf("0.5")))
    residual = abs(sha_real - sha_round)
    verified = residual < ctx.mp.mpf(10) ** (-ctx.mp.mpf(digits) / 2)
    if strict and not verified:
        raise PrecisionExhausted(
            "sha residual %s at q=%d, digits=%d; retry with more digits"
            % (ctx.mp.nstr(residual, 5), q, digits))
    if sha_round >= 0:
        is_sq, root = is_perfect_square(sha_round)
    else:
        is_sq, root = False, None
    max_w_dev = max(abs(abs(cv.w) - 1) for cv in tl.per_chi)
    per_chi = tuple((abs(cv.L), cv.w, cv.residual) for cv in tl.per_chi)
    runtime_ms = (time.perf_counter() - start) * 1000.0
    return ShaReport(
        q=q, h=h, clgp=class_group(q).orders, digits=digits,
        L_total=tl.L_total, G=gp.G, sha_real=sha_real, sha_round=sha_round,
        residual=residual, is_square=is_sq, sha_sqrt=root, per_chi=per_chi,
        j=cm.j, m=cm.m, n=cm.n, max_w_dev=max_w_dev,
        runtime_ms=runtime_ms, verified=verified)
