"""Central values L(psi*chi, 1) by exponentially smoothed Dirichlet
series, with the weight-2, level-q^2 functional equation solved
numerically for the root number, and the assembled total over all class
characters.

With Lambda(s) = (q/2pi)^s Gamma(s) L(s) and the self-duality
s <-> 2 - s, the standard two-sided expansion at the center gives
L = S(t) + w * T(1/t) for every t > 0, where S(t) sums a_n/n against
e^(-2 pi n t/q) and T does the same with conjugated coefficients.  Two
t values pin (L, w) linearly; a third is kept as a consistency check.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .arith import is_prime
from .classgroup import characters, class_group
from .errors import DomainError, InputError, RootNumberUnstable
from .hecke import build_psi, coefficients
from .numerics import make_context

_DEFAULT_GRID = (Fraction(1), Fraction(6, 5), Fraction(4, 5))
_RETRY_GRID = (Fraction(9, 10), Fraction(11, 10), Fraction(4, 5))


@dataclass(frozen=True)
class CentralValue:
    L: object
    w: object
    residual: object
    M: int
    nonzero: bool


@dataclass(frozen=True)
class TotalL:
    q: int
    h: int
    per_chi: tuple
    L_total: object


def truncation(q, digits, t):
    """Smallest M with sum_{n>M} n e^(-2 pi n t/q) < 10^-(digits+2).

    The tail has the closed form x^(M+1) ((M+1) - M x)/(1-x)^2 with
    x = e^(-2 pi t/q), which is what gets bounded (|a_n| <= n)."""
    tf = float(t)
    if tf <= 0:
        raise DomainError("smoothing parameter must be positive, got %r" % (t,))
    lx = -2 * math.pi * tf / q
    x = math.exp(lx)
    target = -(digits + 2) * math.log(10)

    def ok(m):
        return (m + 1) * lx + math.log((m + 1) - m * x) - 2 * math.log(1 - x) < target

    lo, hi = 1, 2
    while not ok(hi):
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def smoothed_sum(series, t, q, ctx):
    """S(t) = sum_{n <= M} (a_n/n) e^(-2 pi n t/q) at the cutoff M that
    truncation() prescribes for this t."""
    M = truncation(q, ctx.digits, t)
    if len(series) < M:
        raise InputError("series of length %d too short, need %d" % (len(series), M))
    x = ctx.mp.exp(-2 * ctx.pi * ctx.real(t) / q)
    a = series.a
    terms = []
    xn = ctx.mp.mpf(1)
    for n in range(1, M + 1):
        xn = xn * x
        if a[n]:
            terms.append(a[n] * xn / n)
    return ctx.mp.fsum(terms)


def _solve(series, q, ctx, grid):
    t0, t1, t2 = grid
    conj = series.conjugate()
    s0 = smoothed_sum(series, t0, q, ctx)
    s1 = smoothed_sum(series, t1, q, ctx)
    den = smoothed_sum(conj, 1 / t1, q, ctx) - smoothed_sum(conj, 1 / t0, q, ctx)
    if abs(den) < ctx.tol(5):
        return None
    w = (s0 - s1) / den
    L = s0 + w * smoothed_sum(conj, 1 / t0, q, ctx)
    check = smoothed_sum(series, t2, q, ctx) + w * smoothed_sum(conj, 1 / t2, q, ctx)
    residual = abs(L - check)
    nonzero = abs(L) > ctx.mp.mpf(10) ** (-ctx.mp.mpf(ctx.digits) / 2)
    return CentralValue(L=L, w=w, residual=residual, M=len(series), nonzero=nonzero)


def _norm_grid(tgrid):
    if tgrid is None:
        return _DEFAULT_GRID
    grid = tuple(tgrid)
    if len(grid) == 2:
        grid = grid + (Fraction(4, 5),)
    if len(grid) != 3 or len(set(grid)) != 3 or any(t <= 0 for t in grid):
        raise InputError("t-grid needs 2 or 3 distinct positive values")
    return grid


def central_value(series, q, ctx, tgrid=None):
    """Solve L = S(t) + w T(1/t) at two smoothing parameters; the third
    grid point only measures the residual.  A degenerate solve is retried
    once on a shifted default grid before giving up."""
    r = _solve(series, q, ctx, _norm_grid(tgrid))
    if r is None and tgrid is None:
        r = _solve(series, q, ctx, _RETRY_GRID)
    if r is None:
        raise RootNumberUnstable(
            "functional-equation solve degenerate for chi index %d at q=%d"
            % (series.chi_index, q))
    return r


def _check_q7(q):
    if not is_prime(q) or q % 8 != 7:
        raise InputError("q must be a prime congruent to 7 mod 8, got %r" % (q,))


def total_L(q, digits, tgrid=None, branch=None, safety=0):
    """L(E/H, 1) = prod over all h class characters of |L(psi*chi, 1)|^2.

    The conjugate-character factors are exactly the complex conjugates,
    which is why each |L|^2 appears; the product is a positive real and
    is independent of the branch chosen when extending psi."""
    _check_q7(q)
    if tgrid is None and branch is None and safety == 0:
        return _total_cached(q, digits)
    return _total_impl(q, digits, tgrid, branch, safety)


@lru_cache(maxsize=128)
def _total_cached(q, digits):
    return _total_impl(q, digits, None, None, 0)


def _total_impl(q, digits, tgrid, branch, safety):
    ctx = make_context(digits)
    G = class_group(q)
    psi = build_psi(G, ctx, branch=branch)
    grid = _norm_grid(tgrid)
    tmin = min(min(grid), min(1 / t for t in grid))
    M = truncation(q, digits + safety, tmin)
    cvs = []
    ltot = ctx.mp.mpf(1)
    for chi in characters(G):
        series = coefficients(psi, chi, M, q)
        cv = central_value(series, q, ctx, tgrid=tgrid)
        cvs.append(cv)
        ltot = ltot * (cv.L * cv.L.conjugate()).real
    return TotalL(q=q, h=G.h, per_chi=tuple(cvs), L_total=ltot)
