"""Dense polynomial arithmetic over Z/p and the canonical modulus search.

Polynomials are ascending coefficient tuples with no trailing zeros; () is
the zero polynomial.  The modulus presenting GF(p^n) is the first irreducible
monic degree-n polynomial in counter order (constant coefficient varying
fastest), so every run and every process agrees on the presentation.  A
packed-bitmask path keeps the p = 2 search usable at degrees 32 and 64.
"""

from __future__ import annotations


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int):
    """Return (p, n) with q = p^n for prime p, or None."""
    if q < 2:
        return None
    p = q
    for d in range(2, q + 1):
        if d * d > q:
            break
        if q % d == 0:
            p = d
            break
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    return (p, n) if q == 1 else None


def prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def normalize(coeffs, p):
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return normalize(out, p)


def sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return normalize(out, p)


def mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return normalize(out, p)


def rem(a, m, p):
    """a mod m with m monic of degree >= 1."""
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for i in range(dm):
                if m[i]:
                    a[off + i] = (a[off + i] - c * m[i]) % p
        a.pop()
    return normalize(a, p)


def _mod_any(a, b, p):
    # remainder for a possibly non-monic divisor b
    lead_inv = pow(b[-1], -1, p)
    monic = tuple((x * lead_inv) % p for x in b)
    return rem(a, monic, p)


def gcd(a, b, p):
    while b:
        a, b = b, _mod_any(a, b, p)
    if not a:
        return ()
    lead_inv = pow(a[-1], -1, p)
    return tuple((x * lead_inv) % p for x in a)


def powmod(base, e, m, p):
    result = (1,)
    base = rem(base, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), m, p)
    return result


# ---------------------------------------------------------------------------
# packed path for p = 2: a polynomial is its coefficient bitmask


def pack2(coeffs) -> int:
    v = 0
    for i, c in enumerate(coeffs):
        if c & 1:
            v |= 1 << i
    return v


def unpack2(v: int):
    return tuple((v >> i) & 1 for i in range(v.bit_length()))


def _mul2(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _sqr2(a: int) -> int:
    r = 0
    i = 0
    while a:
        if a & 1:
            r |= 1 << (i << 1)
        a >>= 1
        i += 1
    return r


def _rem2(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm and a:
        a ^= m << (a.bit_length() - dm)
    return a


def _gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, _rem2(a, b)
    return a


def _powmod2(base: int, e: int, m: int) -> int:
    result = 1
    base = _rem2(base, m)
    while e:
        if e & 1:
            result = _rem2(_mul2(result, base), m)
        e >>= 1
        if e:
            base = _rem2(_sqr2(base), m)
    return result


def _is_irreducible2(f: int, n: int) -> bool:
    x = 2
    for d in prime_divisors(n):
        t = _powmod2(x, 1 << (n // d), f)
        if _gcd2(f, t ^ x) != 1:
            return False
    return _powmod2(x, 1 << n, f) == x


# ---------------------------------------------------------------------------


def is_irreducible(f, p) -> bool:
    """Rabin's test for a monic polynomial f over Z/p."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    if p == 2:
        return _is_irreducible2(pack2(f), n)
    x = (0, 1)
    for d in prime_divisors(n):
        t = powmod(x, p ** (n // d), f, p)
        if gcd(sub(t, x, p), f, p) != (1,):
            return False
    return powmod(x, p ** n, f, p) == x


_MODULI: dict = {}


def least_irreducible(p: int, n: int):
    """First irreducible monic degree-n polynomial over Z/p in counter order."""
    key = (p, n)
    cached = _MODULI.get(key)
    if cached is not None:
        return cached
    if n == 1:
        _MODULI[key] = (0, 1)
        return (0, 1)
    small = range(min(p, 64))
    for m in range(p ** n):
        if m % p == 0:
            continue  # zero constant term means x divides
        digits = []
        t = m
        for _ in range(n):
            digits.append(t % p)
            t //= p
        cand = tuple(digits) + (1,)
        if p <= 64 and any(_eval_int(cand, r, p) == 0 for r in small):
            continue
        if is_irreducible(cand, p):
            _MODULI[key] = cand
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {n} over Z/{p}")


def _eval_int(coeffs, r, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * r + c) % p
    return acc
