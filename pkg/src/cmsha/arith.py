"""Exact integer arithmetic: primality, factorization, quadratic symbols,
and the modular square roots that drive ideal enumeration.

Everything here is pure and deterministic.  Inputs stay far below the
ranges where the fixed Miller-Rabin base set or Pollard's rho could
misbehave, but both are written to be correct for any n < 2^64.
"""

import math

from .errors import DomainError, ResourceError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

# Strong-pseudoprime test with these bases is exact below 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def jacobi(a, n):
    """Jacobi symbol (a|n) for odd positive n; the Legendre symbol when
    n is prime."""
    if n < 1 or n % 2 == 0:
        raise DomainError("jacobi needs odd positive n, got %r" % (n,))
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def xgcd(a, b):
    """Extended gcd: (g, s, t) with s*a + t*b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _rho(n):
    # Brent's cycle variant with a deterministic sweep of increments.
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ResourceError("rho failed to split %d" % n)


def _factor_into(n, acc):
    if n == 1:
        return
    if is_prime(n):
        acc[n] = acc.get(n, 0) + 1
        return
    d = _rho(n)
    _factor_into(d, acc)
    _factor_into(n // d, acc)


def factorize(n):
    """Prime factorization of n >= 1 as (prime, exponent) pairs with the
    primes strictly increasing; n = 1 gives the empty list."""
    if n < 1:
        raise DomainError("factorize needs n >= 1, got %r" % (n,))
    acc = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            acc[p] = acc.get(p, 0) + 1
            n //= p
    p = 101
    while p * p <= n and p < 10 ** 6:
        while n % p == 0:
            acc[p] = acc.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        _factor_into(n, acc)
    return sorted(acc.items())


def _sqrt_mod_p(a, p):
    """One square root of a mod an odd prime p; assumes (a|p) = 1."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks, deterministic non-residue scan
    s, e = p - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    g = pow(z, s, p)
    x = pow(a, (s + 1) // 2, p)
    b = pow(a, s, p)
    r = e
    while b != 1:
        m, t = 0, b
        while t != 1:
            t = t * t % p
            m += 1
        gs = pow(g, 1 << (r - m - 1), p)
        x = x * gs % p
        b = b * gs * gs % p
        g = gs * gs % p
        r = m
    return x


def _lift_odd(x, a, p, k):
    """Hensel-lift x with x^2 ≡ a (mod p) to a root mod p^k, p odd."""
    pe = p
    for _ in range(k - 1):
        pe2 = pe * p
        f = (x * x - a) % pe2
        x = (x - f * pow(2 * x, -1, pe2)) % pe2
        pe = pe2
    return x


def _sqrt_mod_2pow(a, j):
    """All square roots of odd a modulo 2^j, j >= 2."""
    mod = 1 << j
    a %= mod
    if j == 2:
        return [1, 3] if a % 4 == 1 else []
    if a % 8 != 1:
        return []
    x = 1
    for jj in range(3, j):
        if (x * x - a) % (1 << (jj + 1)):
            x += 1 << (jj - 1)
    half = 1 << (j - 1)
    return sorted({x % mod, (mod - x) % mod, (x + half) % mod, (mod - x - half) % mod})


def sqrt_neg_q_mod(q, n):
    """All b in [0, 2n) with b^2 ≡ -q (mod 4n).

    These index the ideals <n, (b + sqrt(-q))/2> of norm n; the empty
    list means no ideal of norm n exists.
    """
    if n < 1:
        raise DomainError("need n >= 1, got %r" % (n,))
    e2 = 0
    odd = n
    while odd % 2 == 0:
        odd //= 2
        e2 += 1
    # component congruences whose moduli multiply to exactly 4n
    comps = [(1 << (e2 + 2), _sqrt_mod_2pow(-q, e2 + 2))]
    for p, k in factorize(odd):
        pe = p ** k
        if p == q:
            # x^2 ≡ -q (mod q^k): only x ≡ 0 works, and only for k = 1
            comps.append((pe, [0] if k == 1 else []))
            continue
        if jacobi(-q % p, p) != 1:
            comps.append((pe, []))
            continue
        x = _lift_odd(_sqrt_mod_p(-q, p), -q, p, k)
        comps.append((pe, sorted({x, pe - x})))
    sols = [0]
    mod = 1
    for pe, rs in comps:
        if not rs:
            return []
        inv = pow(mod, -1, pe) if mod > 1 else 0
        nxt = []
        for x in sols:
            for r in rs:
                if mod == 1:
                    nxt.append(r % pe)
                else:
                    nxt.append((x + (r - x) * inv % pe * mod) % (mod * pe))
        sols = nxt
        mod *= pe
    out = sorted({x % (2 * n) for x in sols})
    for b in out:
        assert (b * b + q) % (4 * n) == 0
    return out
