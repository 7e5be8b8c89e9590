"""Ideal class group of Q(sqrt(-q)) through binary quadratic forms of
discriminant -q.

A form (a, b, c) stands for the class of the ideal <a, (b + sqrt(-q))/2>,
and Gauss composition is realized by multiplying those ideal lattices in
Hermite form.  Structure is brute force over the (odd, modest) class
number: element orders by repeated composition, then an invariant-factor
basis assembled greedily from elements of maximal quotient order.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import is_prime, xgcd
from .errors import InputError


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def inverse(self):
        return reduce(QuadForm(self.a, -self.b, self.c))


def _check_q(q):
    if not is_prime(q) or q % 4 != 3:
        raise InputError("q must be a prime congruent to 3 mod 4, got %r" % (q,))


def principal_form(q):
    return QuadForm(1, 1, (q + 1) // 4)


def reduced_forms(q):
    """All reduced forms of discriminant -q, sorted by (a, b)."""
    _check_q(q)
    out = []
    for a in range(1, math.isqrt(q // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b + q) % (4 * a):
                continue
            c = (b * b + q) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            out.append(QuadForm(a, b, c))
    out.sort(key=lambda f: (f.a, f.b))
    return out


def reduce(f):
    """The reduced representative of f's equivalence class."""
    a, b, c = f.a, f.b, f.c
    d = b * b - 4 * a * c
    if a <= 0 or d >= 0:
        raise InputError("not a positive definite form: %r" % (f,))
    while True:
        b = a - (a - b) % (2 * a)
        c = (b * b - d) // (4 * a)
        if a <= c:
            break
        a, b = c, -b
    if b < 0 and a == c:
        b = -b
    return QuadForm(a, b, c)


def _mul_primitive(a1, b1, a2, b2, q):
    """Multiply primitive ideals <a1, (b1+s)/2> <a2, (b2+s)/2>, s = sqrt(-q).

    Returns (e, a3, b3) with the product equal to e * <a3, (b3+s)/2>, b3
    odd in [0, 2*a3).  Works in the basis (1, w), w = (1+s)/2, where
    w^2 = w - (q+1)/4; the four generator products are put in Hermite
    form by gcd elimination on the w-column.
    """
    x1 = (b1 - 1) // 2
    x2 = (b2 - 1) // 2
    rows = (
        (a1 * a2, 0),
        (a1 * x2, a1),
        (a2 * x1, a2),
        (x1 * x2 - (q + 1) // 4, x1 + x2 + 1),
    )
    xr = yr = 0
    xonly = []
    for x, y in rows:
        if y == 0:
            xonly.append(x)
        elif yr == 0:
            xr, yr = x, y
        else:
            g, s, t = xgcd(yr, y)
            xonly.append((y // g) * xr - (yr // g) * x)
            xr, yr = s * xr + t * x, g
    if yr < 0:
        xr, yr = -xr, -yr
    aa = 0
    for x in xonly:
        aa = math.gcd(aa, x)
    # closure under multiplication by w forces yr | aa and yr | xr,
    # and the lattice index aa*yr must equal the norm product
    if yr == 0 or aa * yr != a1 * a2 or aa % yr or xr % yr:
        raise InputError("inputs do not describe ideals of Q(sqrt(-%d))" % q)
    e = yr
    a3 = aa // e
    b3 = 2 * ((xr // e) % a3) + 1
    assert (b3 * b3 + q) % (4 * a3) == 0
    return e, a3, b3


def compose(f, g):
    """Gauss composition of two forms, returned reduced."""
    d = f.disc()
    if g.disc() != d:
        raise InputError("discriminant mismatch: %d vs %d" % (d, g.disc()))
    q = -d
    _, a3, b3 = _mul_primitive(f.a, f.b, g.a, g.b, q)
    return reduce(QuadForm(a3, b3, (b3 * b3 + q) // (4 * a3)))


class ClassGroup:
    """Immutable snapshot of the form class group of discriminant -q.

    generators holds (form, order) pairs whose orders are the invariant
    factors d_1 | d_2 | ...; dlogs[i] is the exponent vector of forms[i]
    with respect to that basis.
    """

    __slots__ = ("q", "h", "forms", "generators", "dlogs", "_index")

    def __init__(self, q, forms, generators, dlogs):
        self.q = q
        self.h = len(forms)
        self.forms = tuple(forms)
        self.generators = tuple(generators)
        self.dlogs = tuple(dlogs)
        self._index = {f: i for i, f in enumerate(self.forms)}

    @property
    def orders(self):
        return tuple(d for _, d in self.generators)

    def index_of(self, f):
        try:
            return self._index[f]
        except KeyError:
            raise InputError("form %r is not reduced of discriminant -%d" % (f, self.q))

    def inverse_index(self, i):
        f = self.forms[i]
        return self._index[reduce(QuadForm(f.a, -f.b, f.c))]


def _order_of(f, ident):
    k, g = 1, f
    while g != ident:
        g = compose(g, f)
        k += 1
    return k


@lru_cache(maxsize=None)
def class_group(q):
    """Full multiplicative structure of the form class group."""
    forms = reduced_forms(q)
    h = len(forms)
    ident = forms[0]
    assert ident == principal_form(q)
    span = {ident: ()}
    basis = []
    while len(span) < h:
        best_f, best_k = None, 0
        for f in forms:
            if f in span:
                continue
            k, g = 1, f
            while g not in span:
                g = compose(g, f)
                k += 1
            if k > best_k:
                best_f, best_k = f, k
        # lift best_f to an element whose order in the group equals its
        # order in the quotient; some shift by a span element always works
        lifted = None
        for s in sorted(span):
            y = compose(best_f, s)
            if _order_of(y, ident) == best_k:
                lifted = y
                break
        if lifted is None:
            raise AssertionError("no order-preserving lift exists; composition broken")
        ypow = [ident]
        for _ in range(best_k - 1):
            ypow.append(compose(ypow[-1], lifted))
        nxt = {}
        for fm, vec in span.items():
            for j, yp in enumerate(ypow):
                nf = compose(fm, yp)
                if nf in nxt:
                    raise AssertionError("span collision; order computation broken")
                nxt[nf] = vec + (j,)
        span = nxt
        basis.append((lifted, best_k))
    total = 1
    for _, d in basis:
        total *= d
    assert total == h
    for (_, d1), (_, d2) in zip(basis, basis[1:]):
        assert d1 % d2 == 0
    basis.reverse()  # store ascending: d_1 | d_2 | ...
    dlogs = [None] * h
    index = {f: i for i, f in enumerate(forms)}
    for fm, vec in span.items():
        dlogs[index[fm]] = tuple(reversed(vec))
    return ClassGroup(q, forms, basis, dlogs)


def dlog(G, f):
    """Exponent vector (x_i) with prod g_i^(x_i) in the class of f."""
    r = reduce(f)
    if r.disc() != -G.q:
        raise InputError("form %r has the wrong discriminant" % (f,))
    try:
        return G.dlogs[G.index_of(r)]
    except InputError:
        pass
    # unreachable when G is complete; kept as an honest fallback
    for vec in itertools.product(*[range(d) for d in G.orders]):
        g = G.forms[0]
        for (gen, _), x in zip(G.generators, vec):
            for _ in range(x):
                g = compose(g, gen)
        if g == r:
            return vec
    raise AssertionError("dlog fell through a complete group table")


@dataclass(frozen=True)
class ClassChar:
    """Character of the class group, given by exponents against the basis:
    chi(f) = prod zeta_{d_i}^(e_i * x_i) with (x_i) = dlog(f)."""
    index: int
    exponents: tuple
    orders: tuple

    def values_on(self, G, ctx):
        """Value table aligned with G.forms."""
        tabs = [ctx.root_of_unity(d) for d in self.orders]
        out = []
        for vec in G.dlogs:
            z = ctx.mp.mpc(1)
            for e, x, d, tab in zip(self.exponents, vec, self.orders, tabs):
                z *= tab[(e * x) % d]
            out.append(z)
        return tuple(out)

    def value(self, G, ctx, f):
        return self.values_on(G, ctx)[G.index_of(reduce(f))]


def characters(G):
    """All h characters, the trivial one first."""
    out = []
    for idx, exps in enumerate(itertools.product(*[range(d) for d in G.orders])):
        out.append(ClassChar(index=idx, exponents=exps, orders=G.orders))
    return out
