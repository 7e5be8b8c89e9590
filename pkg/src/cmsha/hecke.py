"""The canonical Grossencharacter of conductor (sqrt(-q)) and the Hecke
coefficients of its class-character twists.

psi is pinned on principal ideals by psi((alpha)) = eps(alpha) * alpha,
where eps is the quadratic-residue sign at the ramified prime (it kills
the generator's unit ambiguity, since eps(-1) = -1), alpha embedded by
sqrt(-q) -> +i sqrt(q).  On a class-group basis psi takes principal
d_i-th roots, which extends it multiplicatively to every ideal coprime
to q.  All lattice reductions carry an exact running factor gamma in
Q(sqrt(-q)) so the principal residual of an ideal is produced
constructively, never searched for.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import classgroup
from .arith import jacobi, sqrt_neg_q_mod
from .errors import ConductorError, DomainError, InputError, ResourceError
from .numerics import principal_root


@dataclass(frozen=True)
class Element:
    """alpha = (u + v sqrt(-q))/2 with u ≡ v (mod 2)."""
    u: int
    v: int

    def norm(self, q):
        return (self.u * self.u + q * self.v * self.v) // 4


@dataclass(frozen=True)
class IdealRep:
    """m * <a, (b + sqrt(-q))/2>: primitive part of norm a, content m."""
    a: int
    b: int
    m: int = 1

    def norm(self):
        return self.m * self.m * self.a


def epsilon(x, q):
    """Sign character at the ramified prime: the Legendre symbol of x's
    image in O_K/(sqrt(-q)) = F_q, which for x = (u + v sqrt(-q))/2 is
    u/2 mod q."""
    if (x.u - x.v) % 2:
        raise InputError("element parity broken: %r" % (x,))
    r = x.u * ((q + 1) // 2) % q
    if r == 0:
        raise ConductorError("element %r meets the conductor" % (x,))
    return jacobi(r, q)


# ---------------------------------------------------------------------------
# tracked ideals: gamma * <a, (b+s)/2> with gamma = (gu + gv s)/2 exact

class _Tracked:
    __slots__ = ("gu", "gv", "a", "b")

    def __init__(self, gu, gv, a, b):
        self.gu = gu
        self.gv = gv
        self.a = a
        self.b = b


def _gamma_mul(u1, v1, u2, v2, q):
    # (u1 + v1 s)(u2 + v2 s)/4 with s^2 = -q, back in half-coordinates
    return (u1 * u2 - q * v1 * v2) / 2, (u1 * v2 + u2 * v1) / 2


def _t_from_ab(a, b):
    return _Tracked(Fraction(2), Fraction(0), a, b)


def _t_reduce(t, q):
    """Reduce the form part; gamma absorbs each swap's principal factor
    (b+s)/(2c), translations are free."""
    gu, gv, a, b = t.gu, t.gv, t.a, t.b
    while True:
        b = a - (a - b) % (2 * a)
        c = (b * b + q) // (4 * a)
        if a <= c:
            break
        gu, gv = _gamma_mul(gu, gv, Fraction(b, c), Fraction(1, c), q)
        a, b = c, -b
    if b < 0 and a == c:
        gu, gv = _gamma_mul(gu, gv, Fraction(b, a), Fraction(1, a), q)
        b = -b
    return _Tracked(gu, gv, a, b)


def _t_mul(t1, t2, q):
    e, a3, b3 = classgroup._mul_primitive(t1.a, t1.b, t2.a, t2.b, q)
    gu, gv = _gamma_mul(t1.gu, t1.gv, t2.gu, t2.gv, q)
    return _t_reduce(_Tracked(gu * e, gv * e, a3, b3), q)


def _t_pow(t, k, q):
    result = None
    base = t
    while k:
        if k & 1:
            result = base if result is None else _t_mul(result, base, q)
        k >>= 1
        if k:
            base = _t_mul(base, base, q)
    return result


def _gamma_div(u1, v1, u2, v2, q):
    # gamma1/gamma2 = gamma1 * conj(gamma2) / N(gamma2)
    nrm = (u2 * u2 + q * v2 * v2) / 4
    uu, vv = _gamma_mul(u1, v1, u2, -v2, q)
    return uu / nrm, vv / nrm


# ---------------------------------------------------------------------------


class HeckeChar:
    """psi, fixed by its values on the class-group basis.

    Immutable after construction apart from the per-prime cache, which
    only ever grows and is rebuilt before coefficient assembly starts.
    """

    def __init__(self, G, ctx, gen_values, gen_elements, branch):
        self.group = G
        self.ctx = ctx
        self.q = G.q
        self.gen_values = tuple(gen_values)
        self.gen_elements = tuple(gen_elements)
        self.branch = branch
        self._sqrtq = ctx.mp.sqrt(ctx.mp.mpf(G.q))
        # one tracked basis product per class, landing exactly on forms[i]
        self._cls_tracked = []
        self._cls_value = []
        for i, f in enumerate(G.forms):
            t = _t_from_ab(1, 1)
            val = ctx.mp.mpc(1)
            for (gf, _), x, gv in zip(G.generators, G.dlogs[i], self.gen_values):
                if x:
                    t = _t_mul(t, _t_pow(_t_from_ab(gf.a, gf.b), x, G.q), G.q)
                    val = val * gv ** x
            if (t.a, t.b) != (f.a, f.b):
                raise AssertionError("class product missed its reduced form")
            self._cls_tracked.append(t)
            self._cls_value.append(val)
        self._primes = {}
        self._plist = []
        self._spf = None
        self._prime_max = 0

    def _embed_eps(self, au, av):
        """eps(alpha) * embed(alpha) for alpha = (au + av s)/2 rational."""
        ctx = self.ctx
        q = self.q
        lcm = au.denominator * av.denominator // math.gcd(au.denominator, av.denominator)
        sc = (2 * lcm) % q
        if sc == 0:
            raise ConductorError("residual denominator meets the conductor")
        sign = epsilon(Element(2 * int(au * lcm), 2 * int(av * lcm)), q) * jacobi(sc, q)
        return sign * ctx.mp.mpc(ctx.real(au) / 2, ctx.real(av) * self._sqrtq / 2)

    def _psi_primitive(self, a, b):
        """(psi value, class index) for the primitive ideal <a, (b+s)/2>."""
        q = self.q
        t = _t_reduce(_t_from_ab(a, b), q)
        f = classgroup.QuadForm(t.a, t.b, (t.b * t.b + q) // (4 * t.a))
        i = self.group.index_of(f)
        base = self._cls_tracked[i]
        au, av = _gamma_div(t.gu, t.gv, base.gu, base.gv, q)
        return self._cls_value[i] * self._embed_eps(au, av), i

    def ensure_primes(self, limit):
        """Extend the per-prime table: psi values and class indices for
        the split primes up to limit, inert/ramified markers otherwise."""
        if limit <= self._prime_max:
            return
        spf = list(range(limit + 1))
        for i in range(2, math.isqrt(limit) + 1):
            if spf[i] == i:
                for j in range(i * i, limit + 1, i):
                    if spf[j] == j:
                        spf[j] = i
        self._spf = spf
        self._plist = [p for p in range(2, limit + 1) if spf[p] == p]
        q = self.q
        for p in self._plist:
            if p in self._primes:
                continue
            if p == q:
                self._primes[p] = ("r",)
            elif jacobi(p, q) == -1:
                self._primes[p] = ("i",)
            else:
                b1, b2 = sqrt_neg_q_mod(q, p)
                v1, c1 = self._psi_primitive(p, b1)
                v2, c2 = self._psi_primitive(p, b2)
                self._primes[p] = ("s", v1, v2, c1, c2)
        self._prime_max = limit


def build_psi(G, ctx, branch=None):
    """Fix psi on the generator basis by principal roots.

    branch optionally twists the root chosen at generator i by
    zeta_{d_i}^branch[i]; any choice yields a valid extension, and the
    assembled L-product is invariant under it (tested downstream).
    """
    q = G.q
    if q % 8 != 7:
        raise InputError("psi with conductor (sqrt(-q)) needs q ≡ 7 mod 8, got %d" % q)
    if branch is not None and len(branch) != len(G.generators):
        raise InputError("branch twist needs one entry per generator")
    gen_values = []
    gen_elements = []
    for j, (gf, d) in enumerate(G.generators):
        t = _t_pow(_t_from_ab(gf.a, gf.b), d, q)
        if (t.a, t.b) != (1, 1):
            raise AssertionError("generator power did not land on O_K")
        au, av = t.gu, t.gv
        if au.denominator != 1 or av.denominator != 1:
            raise AssertionError("principal generator not integral")
        alpha = Element(int(au), int(av))
        target = epsilon(alpha, q) * ctx.mp.mpc(
            ctx.mp.mpf(alpha.u) / 2, alpha.v * ctx.mp.sqrt(ctx.mp.mpf(q)) / 2)
        root = principal_root(target, d, ctx)
        if branch is not None and branch[j] % d:
            root = root * ctx.root_of_unity(d)[branch[j] % d]
        gen_values.append(root)
        gen_elements.append(alpha)
    return HeckeChar(G, ctx, gen_values, gen_elements,
                     tuple(branch) if branch is not None else None)


def psi_ideal(psi, ideal):
    """psi(I) for an IdealRep coprime to q; |psi(I)| = sqrt(N I)."""
    q = psi.q
    if ideal.a < 1 or ideal.m < 1 or (ideal.b * ideal.b + q) % (4 * ideal.a):
        raise InputError("ill-formed ideal %r" % (ideal,))
    if math.gcd(ideal.norm(), q) != 1:
        raise ConductorError("ideal of norm %d meets the conductor" % ideal.norm())
    val, _ = psi._psi_primitive(ideal.a, ideal.b % (2 * ideal.a))
    if ideal.m != 1:
        val = val * (jacobi(ideal.m % q, q) * ideal.m)
    return val


def enumerate_ideals_of_norm(q, n):
    """All ideals of norm n, primitive parts indexed by sqrt_neg_q_mod."""
    if n < 1:
        raise DomainError("need n >= 1, got %r" % (n,))
    out = []
    m = 1
    while m * m <= n:
        if n % (m * m) == 0:
            for b in sqrt_neg_q_mod(q, n // (m * m)):
                out.append(IdealRep(n // (m * m), b, m))
        m += 1
    return out


@dataclass(frozen=True, eq=False)
class CoeffSeries:
    """Dirichlet coefficients a_1..a_M of L(psi*chi, s); a[0] is unused."""
    q: int
    chi_index: int
    a: list
    ctx: object

    def __len__(self):
        return len(self.a) - 1

    def conjugate(self):
        return CoeffSeries(self.q, self.chi_index,
                           [z.conjugate() for z in self.a], self.ctx)


def coefficients(psi, chi, M, q):
    """Coefficient series of psi twisted by the class character chi.

    Multiplicative assembly: split p gives a_p = lam(P) + lam(Pbar) with
    lam = psi*chi and the weight-2 recursion upward (lam(P) lam(Pbar) = p
    since chi is trivial on the principal class of (p)); inert p
    contributes (-p)^k at p^(2k); powers of q vanish.
    """
    if q != psi.q:
        raise InputError("series for q=%d requested from psi of q=%d" % (q, psi.q))
    if M < 1:
        raise InputError("cutoff must be >= 1, got %r" % (M,))
    if M > 5_000_000:
        raise ResourceError("cutoff %d exceeds the memory budget" % M)
    ctx = psi.ctx
    psi.ensure_primes(M)
    tab = chi.values_on(psi.group, ctx)
    zero = ctx.mp.mpc(0)
    a = [zero] * (M + 1)
    a[1] = ctx.mp.mpc(1)
    spf = psi._spf
    for n in range(2, M + 1):
        p = spf[n]
        rest = n
        while rest % p == 0:
            rest //= p
        if rest > 1:
            a[n] = a[n // rest] * a[rest]
            continue
        entry = psi._primes[p]
        kind = entry[0]
        if kind == "r":
            continue  # a[n] stays 0
        if kind == "i":
            if (n // p) % p == 0:
                a[n] = -p * a[n // (p * p)]
            continue
        ap = entry[1] * tab[entry[3]] + entry[2] * tab[entry[4]]
        if n == p:
            a[n] = ap
        else:
            a[n] = ap * a[n // p] - p * a[n // (p * p)]
    return CoeffSeries(q=q, chi_index=chi.index, a=a, ctx=ctx)
