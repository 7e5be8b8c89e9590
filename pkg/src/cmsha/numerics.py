"""Arbitrary-precision context plus the two special functions everything
else consumes: log-Gamma and principal roots.

A PrecisionContext owns private mpmath contexts, so two instances never
interfere and nothing here touches global mpmath state.  Special
functions run at a slightly higher internal precision and are rounded
once into the working precision on the way out.
"""

import math
from fractions import Fraction

from mpmath import bernfrac
from mpmath.ctx_mp import MPContext

from .errors import DomainError, PrecisionError


def _stirling_params(hi):
    """Shift target and Bernoulli coefficients sized for hi.dps digits."""
    wd = hi.dps
    terms = max(10, int(0.62 * wd) + 1)
    k = 2 * terms
    # smallest x with tail bound 4 (2n)! / ((2pi)^(2n) 2n (2n-1) x^(2n-1)) < 10^-wd
    lnx = (math.lgamma(k + 1) + math.log(4) - k * math.log(2 * math.pi)
           - math.log(k * (k - 1)) + wd * math.log(10)) / (k - 1)
    shift_to = int(math.exp(lnx)) + 2
    coeffs = []
    for j in range(1, terms + 1):
        p, den = bernfrac(2 * j)
        coeffs.append(hi.mpf(p) / (den * 2 * j * (2 * j - 1)))
    return shift_to, tuple(coeffs)


class PrecisionContext:
    """Precision carrier: `digits` of requested output accuracy, backed by
    digits + guard working digits.  Treat instances as immutable; the only
    internal mutation is memoization of root-of-unity tables, which is
    idempotent, so sharing across tasks stays safe.
    """

    def __init__(self, digits):
        if isinstance(digits, bool) or not isinstance(digits, int):
            raise PrecisionError("digits must be an integer, got %r" % (digits,))
        if digits < 10:
            raise PrecisionError("need digits >= 10, got %d" % digits)
        self.digits = digits
        self.guard = max(10, digits // 10)
        self.mp = MPContext()
        self.mp.dps = digits + self.guard
        self._hi = MPContext()
        self._hi.dps = self.mp.dps + 15
        self.pi = +self.mp.pi
        self._hi_pi = +self._hi.pi
        self._ln_sqrt_2pi = self._hi.ln(2 * self._hi_pi) / 2
        self._shift_to, self._bern = _stirling_params(self._hi)
        self._roots = {}

    @property
    def wdigits(self):
        """Working decimal digits (digits + guard)."""
        return self.digits + self.guard

    def real(self, x):
        """Convert to a working-precision real; Fractions round once."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def _hi_real(self, x):
        if isinstance(x, Fraction):
            return self._hi.mpf(x.numerator) / x.denominator
        return self._hi.mpf(x)

    def tol(self, k=0):
        """10^(k - digits) as a working-precision real."""
        return self.mp.mpf(10) ** (k - self.digits)

    def root_of_unity(self, d):
        """The tuple (1, z, z^2, ..., z^(d-1)) with z = e^(2 pi i/d)."""
        got = self._roots.get(d)
        if got is None:
            hi = self._hi
            step = 2 * self._hi_pi / d
            got = tuple(self.mp.mpc(hi.cos(step * j), hi.sin(step * j))
                        for j in range(d))
            self._roots[d] = got
        return got


def make_context(digits):
    """Build the PrecisionContext every numeric routine here consumes."""
    return PrecisionContext(digits)


def ln_gamma(x, ctx):
    """log Gamma(x) for real x > 0, absolute error below 10^-digits.

    Stirling's asymptotic series with exact Bernoulli-number
    coefficients; arguments below the series' comfort zone are first
    shifted up through the recurrence Gamma(x+1) = x Gamma(x).
    """
    hi = ctx._hi
    try:
        t = ctx._hi_real(x)
    except (TypeError, ValueError):
        raise DomainError("ln_gamma needs a real argument, got %r" % (x,))
    if hi.isnan(t) or hi.isinf(t) or t <= 0:
        raise DomainError("ln_gamma needs finite x > 0, got %s" % t)
    shift = ctx._shift_to - int(t)
    rising = hi.one
    if shift > 0:
        for i in range(shift):
            rising *= t + i
        t += shift
    w = 1 / (t * t)
    acc = hi.zero
    for c in reversed(ctx._bern):
        acc = acc * w + c
    res = (t - hi.mpf("0.5")) * hi.ln(t) - t + ctx._ln_sqrt_2pi + acc / t
    if shift > 0:
        res -= hi.ln(rising)
    return ctx.mp.mpf(res)


def principal_root(z, k, ctx):
    """The k-th root of z whose argument lies in (-pi/k, pi/k].

    Fixed by the principal log branch, so deterministic for every input;
    negative reals land on the upper boundary arg = pi/k.
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DomainError("k must be a positive integer, got %r" % (k,))
    hi = ctx._hi
    zz = hi.mpc(z)
    if zz == 0:
        if k == 1:
            return ctx.mp.mpc(0)
        raise DomainError("principal_root(0, k) is undefined for k > 1")
    if k == 1:
        return ctx.mp.mpc(zz)
    r = hi.exp(hi.ln(abs(zz)) / k)
    ang = hi.atan2(zz.imag, zz.real) / k
    return ctx.mp.mpc(r * hi.cos(ang), r * hi.sin(ang))
