"""The Gamma-product period factor: G(q) = prod Gamma(c/q)^((c|q)) over
0 < c < q.

Evaluated in the log domain (the raw product spans many orders of
magnitude), then cross-checked against the reflection pairing: since
(q-c|q) = -(c|q) for q ≡ 3 mod 4, pairing c with q-c turns G into
prod over residues c of Gamma(c/q)^2 sin(pi c/q)/pi, a product of
positive factors.  Agreement of the two routes exercises the reflection
formula at every residue point.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import is_prime, jacobi
from .errors import InputError
from .numerics import ln_gamma


@dataclass(frozen=True)
class GammaProduct:
    q: int
    G: object
    crosscheck_residual: object


def gamma_product(q, ctx):
    """Both evaluation routes of G(q); the stored residual is their
    relative disagreement."""
    if not is_prime(q) or q % 4 != 3:
        raise InputError("q must be a prime congruent to 3 mod 4, got %r" % (q,))
    lg = [None] * q
    signs = [0] * q
    for c in range(1, q):
        signs[c] = jacobi(c, q)
        lg[c] = ln_gamma(Fraction(c, q), ctx)
    total = ctx.mp.fsum(lg[c] if signs[c] > 0 else -lg[c] for c in range(1, q))
    g_log = ctx.mp.exp(total)
    prod = ctx.mp.mpf(1)
    for c in range(1, q):
        if signs[c] > 0:
            g = ctx.mp.exp(lg[c])
            prod *= g * g * ctx.mp.sin(ctx.pi * c / q) / ctx.pi
    assert g_log > 0 and prod > 0
    residual = abs(g_log - prod) / g_log
    return GammaProduct(q=q, G=g_log, crosscheck_residual=residual)
