"""Finite fields GF(p^n) with a deterministic canonical presentation.

Every field is presented by the lexicographically least irreducible monic
modulus (constant coefficient varying fastest), so element coefficient
vectors mean the same thing across runs and processes.  Elements are
immutable; fields up to 2^16 elements intern all of them, and fields up to
256 elements get full add/mul lookup tables, which keeps the exhaustive
checks elsewhere in the library fast.

Subfield embeddings follow a least-root rule constrained to agree with the
already-fixed embeddings of every maximal proper subfield, which makes the
whole lattice of embeddings commute: embedding F1 into F3 equals embedding
F1 into F2 and then F2 into F3 whenever the degrees divide each other.
"""

from __future__ import annotations

import random
from functools import lru_cache

from . import zmodpoly as zp
from .errors import CapExceeded, ParseError, VerificationError

DEGREE_CAP = 16
INTERN_CAP = 1 << 16
TABLE_CAP = 256
ROOT_ENUM_CAP = 4096
INTERP_CAP = 4096

_FIELDS: dict = {}


def finite_field(p: int, n: int = 1, *, degree_cap: int = DEGREE_CAP) -> "FiniteField":
    """The canonical GF(p^n); memoized, so identical calls share one object."""
    if not isinstance(p, int) or not zp.is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"extension degree must be a positive integer, got {n!r}")
    field = _FIELDS.get((p, n))
    if field is not None:
        return field
    if n > degree_cap:
        raise CapExceeded(f"degree {n} exceeds the cap {degree_cap} for GF({p}^{n})")
    field = FiniteField(p, n)
    _FIELDS[(p, n)] = field
    return field


def GF(q: int, *, degree_cap: int = DEGREE_CAP) -> "FiniteField":
    """GF(q) for a prime power q."""
    pn = zp.prime_power(q)
    if pn is None:
        raise ValueError(f"{q!r} is not a prime power")
    return finite_field(pn[0], pn[1], degree_cap=degree_cap)


class FieldElem:
    """Element of a FiniteField: an immutable length-n coefficient vector mod p.

    `index` is the base-p value of the vector (constant coefficient least
    significant); it is the canonical ordering used everywhere.
    """

    __slots__ = ("field", "coeffs", "index")

    def __init__(self, field, coeffs, index):
        self.field = field
        self.coeffs = coeffs
        self.index = index

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError(f"mixed fields: {self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        if f._addtab is not None:
            return f._elems[f._addtab[self.index][o.index]]
        p = f.p
        return f._from_coeffs_raw(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        p = f.p
        if p == 2:
            return self
        return f._from_coeffs_raw(tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        p = f.p
        return f._from_coeffs_raw(tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        if f._multab is not None:
            return f._elems[f._multab[self.index][o.index]]
        return f._from_coeffs_raw(f._mul_coeffs(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def inverse(self):
        if self.index == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.field}")
        f = self.field
        cached = f._invmemo.get(self.index)
        if cached is not None:
            return f.from_index(cached)
        inv = self ** (f.q - 2)
        f._invmemo[self.index] = inv.index
        f._invmemo[inv.index] = self.index
        return inv

    def residue_degree(self) -> int:
        """Least d (dividing n) with x^(p^d) = x: x generates GF(p^d)."""
        f = self.field
        for d in f.divisors():
            if self ** (f.p ** d) == self:
                return d
        raise VerificationError(f"{self} fixed by no subfield of {f}")

    def __bool__(self):
        return self.index != 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.index == other.index and self.field == other.field
        if isinstance(other, int):
            # compare against the ring image of the integer
            return self.index == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.index))

    def __str__(self):
        f = self.field
        if f.n == 1:
            return str(self.coeffs[0])
        terms = []
        for k in range(f.n - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}g" + (f"^{k}" if k > 1 else ""))
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"{self}:{self.field}"


class FiniteField:
    """GF(p^n) presented by the canonical modulus.  Construct via finite_field/GF."""

    __slots__ = ("p", "n", "q", "modulus", "_elems", "_addtab", "_multab", "_invmemo")

    def __init__(self, p, n):
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = zp.least_irreducible(p, n) if n > 1 else (0, 1)
        self._elems = None
        self._addtab = None
        self._multab = None
        self._invmemo = {}
        if self.q <= TABLE_CAP:
            self._build_tables()
        elif self.q <= INTERN_CAP:
            self._build_interned()

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FiniteField):
            return self.p == other.p and self.n == other.n
        return NotImplemented

    def __hash__(self):
        return hash(("GF", self.p, self.n))

    def __str__(self):
        return f"GF({self.q})"

    __repr__ = __str__

    # -- element construction ----------------------------------------------

    def _index_to_coeffs(self, i):
        out = []
        for _ in range(self.n):
            out.append(i % self.p)
            i //= self.p
        return tuple(out)

    def _build_interned(self):
        self._elems = [FieldElem(self, self._index_to_coeffs(i), i) for i in range(self.q)]

    def _build_tables(self):
        self._build_interned()
        q, p = self.q, self.p
        elems = self._elems
        add = []
        mul = []
        for x in elems:
            xc = x.coeffs
            addrow = []
            mulrow = []
            for y in elems:
                yc = y.coeffs
                addrow.append(self._coeffs_to_index(tuple((a + b) % p for a, b in zip(xc, yc))))
                mulrow.append(self._coeffs_to_index(self._mul_coeffs(xc, yc)))
            add.append(addrow)
            mul.append(mulrow)
        self._addtab = add
        self._multab = mul

    def _coeffs_to_index(self, coeffs):
        i = 0
        for c in reversed(coeffs):
            i = i * self.p + c
        return i

    def _from_coeffs_raw(self, coeffs):
        i = self._coeffs_to_index(coeffs)
        if self._elems is not None:
            return self._elems[i]
        return FieldElem(self, coeffs, i)

    def from_index(self, i: int) -> FieldElem:
        if not 0 <= i < self.q:
            raise ValueError(f"element index {i} out of range for {self}")
        if self._elems is not None:
            return self._elems[i]
        return FieldElem(self, self._index_to_coeffs(i), i)

    def from_coeffs(self, coeffs) -> FieldElem:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.n:
            raise ValueError(f"too many coefficients for {self}")
        coeffs = coeffs + (0,) * (self.n - len(coeffs))
        return self._from_coeffs_raw(coeffs)

    def from_int(self, k: int) -> FieldElem:
        """Image of the integer k under the ring map Z -> GF(p^n)."""
        return self.from_index(k % self.p)

    @property
    def zero(self):
        return self.from_index(0)

    @property
    def one(self):
        return self.from_index(1)

    @property
    def generator(self):
        """The class of X in Z/p[X]/(modulus); only defined for n >= 2."""
        if self.n < 2:
            raise ValueError(f"{self} is a prime field; it has no presentation generator")
        return self.from_index(self.p)

    def elements(self):
        return (self.from_index(i) for i in range(self.q))

    def random_element(self, rng: random.Random) -> FieldElem:
        return self.from_index(rng.randrange(self.q))

    def divisors(self):
        return tuple(d for d in range(1, self.n + 1) if self.n % d == 0)

    # -- coefficient arithmetic (no-table path) -----------------------------

    def _mul_coeffs(self, a, b):
        p, n = self.p, self.n
        full = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        full[i + j] = (full[i + j] + x * y) % p
        mod = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = full[k]
            if c:
                off = k - n
                for i in range(n):
                    if mod[i]:
                        full[off + i] = (full[off + i] - c * mod[i]) % p
        return tuple(full[:n])

    # -- parsing -------------------------------------------------------------

    def parse_element(self, text: str) -> FieldElem:
        """Parse exactly the grammar produced by FieldElem.__str__."""
        s = text.strip()
        if self.n == 1:
            if not s.isdigit() or (len(s) > 1 and s[0] == "0"):
                raise ParseError(f"bad element of {self}", text, 0)
            v = int(s)
            if v >= self.p:
                raise ParseError(f"coefficient {v} out of range for {self}", text, 0)
            return self.from_index(v)
        if s == "0":
            return self.zero
        coeffs = [0] * self.n
        last_power = self.n
        pos = 0
        for term in s.split("+"):
            if not term:
                raise ParseError("empty term", text, pos)
            coeff, power = _parse_term(term, text, pos)
            if coeff < 1 or coeff >= self.p:
                raise ParseError(f"coefficient {coeff} out of range for {self}", text, pos)
            if power >= last_power:
                raise ParseError("terms must have strictly descending powers", text, pos)
            if power >= self.n:
                raise ParseError(f"power g^{power} out of range for {self}", text, pos)
            coeffs[power] = coeff
            last_power = power
            pos += len(term) + 1
        return self.from_coeffs(coeffs)


def _parse_term(term, text, pos):
    if "g" not in term:
        if not term.isdigit() or (len(term) > 1 and term[0] == "0"):
            raise ParseError(f"bad term {term!r}", text, pos)
        return int(term), 0
    head, _, tail = term.partition("g")
    if head == "":
        coeff = 1
    else:
        if not head.isdigit() or head == "1" or head[0] == "0":
            raise ParseError(f"bad coefficient {head!r}", text, pos)
        coeff = int(head)
    if tail == "":
        power = 1
    else:
        if not tail.startswith("^") or not tail[1:].isdigit() or tail[1:] in ("0", "1") or tail[1] == "0":
            raise ParseError(f"bad power {tail!r}", text, pos)
        power = int(tail[1:])
    return coeff, power


# ---------------------------------------------------------------------------
# polynomials with FieldElem coefficients (used by interpolation and the
# large-field root finder)


def fpoly_trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def fpoly_mul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return fpoly_trim(out)


def fpoly_sub(a, b):
    out = list(a) + [None] * max(0, len(b) - len(a))
    for i in range(len(out)):
        if out[i] is None:
            out[i] = -b[i]
        elif i < len(b):
            out[i] = out[i] - b[i]
    return fpoly_trim(out)


def fpoly_divmod(a, b, field):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    quot = [field.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = b[-1].inverse()
    while len(a) >= len(b) and any(a):
        if not a[-1]:
            a.pop()
            continue
        c = a[-1] * inv_lead
        off = len(a) - len(b)
        quot[off] = c
        for i, x in enumerate(b):
            a[off + i] = a[off + i] - c * x
        a.pop()
    return fpoly_trim(quot), fpoly_trim(a)


def fpoly_rem(a, b, field):
    return fpoly_divmod(a, b, field)[1]


def fpoly_monic(a):
    if not a:
        return []
    inv = a[-1].inverse()
    return [x * inv for x in a]


def fpoly_gcd(a, b, field):
    a, b = list(a), list(b)
    while b:
        a, b = b, fpoly_rem(a, b, field)
    return fpoly_monic(a)


def fpoly_powmod(base, e, mod, field):
    result = [field.one]
    base = fpoly_rem(base, mod, field)
    while e:
        if e & 1:
            result = fpoly_rem(fpoly_mul(result, base, field), mod, field)
        e >>= 1
        if e:
            base = fpoly_rem(fpoly_mul(base, base, field), mod, field)
    return result


def fpoly_eval(coeffs, x):
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# interpolation


def lagrange_interpolate(field: FiniteField, table) -> tuple:
    """Coefficients (ascending, trailing zeros stripped) of the unique
    polynomial of degree < q matching `table` at every element of GF(q).

    `table` maps FieldElem -> FieldElem and must be total.
    """
    if field.q > INTERP_CAP:
        raise CapExceeded(f"interpolation over {field} exceeds the cap {INTERP_CAP}")
    pts = dict(table)
    nodes = [field.from_index(i) for i in range(field.q)]
    for node in nodes:
        if node not in pts:
            raise ValueError(f"interpolation table is not total: missing {node}")
    if len(pts) != field.q:
        raise ValueError("interpolation table has keys outside the field")
    # master = prod (X - node); basis polynomials by synthetic division
    master = [field.one]
    for node in nodes:
        master = fpoly_mul(master, [-node, field.one], field)
    out = [field.zero] * field.q
    for node in nodes:
        y = pts[node]
        if not y:
            continue
        # master / (X - node), synthetic division
        div = [field.zero] * field.q
        div[field.q - 1] = master[field.q]
        for k in range(field.q - 2, -1, -1):
            div[k] = master[k + 1] + node * div[k + 1]
        scale = y * fpoly_eval(div, node).inverse()
        for k in range(field.q):
            if div[k]:
                out[k] = out[k] + scale * div[k]
    return tuple(fpoly_trim(out))


# ---------------------------------------------------------------------------
# embeddings


class FieldEmbedding:
    """The canonical injective ring homomorphism GF(p^d) -> GF(p^n), d | n."""

    __slots__ = ("sub", "sup", "gen_image")

    def __init__(self, sub, sup, gen_image):
        self.sub = sub
        self.sup = sup
        self.gen_image = gen_image

    def __call__(self, x: FieldElem) -> FieldElem:
        if x.field != self.sub:
            raise ValueError(f"{x!r} is not an element of {self.sub}")
        sup = self.sup
        acc = sup.zero
        for c in reversed(x.coeffs):
            acc = acc * self.gen_image + sup.from_int(c)
        return acc

    def __repr__(self):
        return f"embed({self.sub} -> {self.sup}; g -> {self.gen_image})"


@lru_cache(maxsize=None)
def field_embedding(sub: FiniteField, sup: FiniteField) -> FieldEmbedding:
    if sub.p != sup.p:
        raise ValueError(f"no embedding {sub} -> {sup}: different characteristic")
    if sup.n % sub.n != 0:
        raise ValueError(f"no embedding {sub} -> {sup}: {sub.n} does not divide {sup.n}")
    if sub.n == sup.n:
        return FieldEmbedding(sub, sup, sup.from_index(sup.p) if sup.n > 1 else sup.zero)
    return FieldEmbedding(sub, sup, _generator_image(sub, sup))


def embed(x: FieldElem, sup: FiniteField) -> FieldElem:
    return field_embedding(x.field, sup)(x)


def _generator_image(sub, sup):
    roots = field_roots(sup, sub.modulus)
    if not roots:
        raise VerificationError(f"modulus of {sub} has no root in {sup}")
    survivors = roots
    for ell in zp.prime_divisors(sub.n):
        e = sub.n // ell
        if e == 1:
            continue  # the prime field embeds uniquely
        mid = finite_field(sub.p, e, degree_cap=max(DEGREE_CAP, e))
        t_sub = field_embedding(mid, sub)(mid.generator)
        target = field_embedding(mid, sup)(mid.generator)
        kept = []
        for r in survivors:
            acc = sup.zero
            for c in reversed(t_sub.coeffs):
                acc = acc * r + sup.from_int(c)
            if acc == target:
                kept.append(r)
        survivors = kept
    if not survivors:
        raise VerificationError(f"no compatible root for {sub} -> {sup}")
    return min(survivors, key=lambda r: r.index)


def field_roots(sup: FiniteField, zcoeffs, *, force_cz: bool = False):
    """All roots in `sup` of a squarefree polynomial with Z/p coefficients,
    sorted by canonical element order."""
    f = [sup.from_int(c) for c in zcoeffs]
    f = fpoly_trim(f)
    if sup.q <= ROOT_ENUM_CAP and not force_cz:
        roots = [x for x in sup.elements() if not fpoly_eval(f, x)]
    else:
        roots = _roots_cz(sup, fpoly_monic(f))
    return sorted(roots, key=lambda r: r.index)


def _roots_cz(sup, f):
    # Cantor-Zassenhaus equal-degree splitting; f monic, splits into distinct
    # linear factors over sup.  Deterministically seeded, so runs agree.
    rng = random.Random(sup.p * 1_000_003 + sup.n * 101 + len(f))
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        deg = len(g) - 1
        if deg == 0:
            continue
        if deg == 1:
            out.append(-g[0])
            continue
        while True:
            a = sup.random_element(rng)
            if not a:
                continue
            if sup.p == 2:
                # split by the trace of a*X: distinct roots r, s disagree on
                # Tr(a r) vs Tr(a s) for half of all a
                h = [sup.zero, a]
                acc = list(h)
                tr = list(h)
                for _ in range(sup.n - 1):
                    acc = fpoly_rem(fpoly_mul(acc, acc, sup), g, sup)
                    tr = fpoly_trim([(tr[i] if i < len(tr) else sup.zero) +
                                     (acc[i] if i < len(acc) else sup.zero)
                                     for i in range(max(len(tr), len(acc)))])
                cand = fpoly_gcd(g, tr, sup)
            else:
                h = fpoly_powmod([a, sup.one], (sup.q - 1) // 2, g, sup)
                h = fpoly_sub(h, [sup.one])
                cand = fpoly_gcd(g, h, sup)
            if 0 < len(cand) - 1 < deg:
                quot, rem_ = fpoly_divmod(g, cand, sup)
                if rem_:
                    raise VerificationError("factor does not divide in root split")
                stack.append(cand)
                stack.append(quot)
                break
    return out
