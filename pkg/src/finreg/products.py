"""Finite products of step-function rings and the structure-theorem pipeline.

A ProductRing is the ambient for everything downstream: a tuple of
(field, Boolean ring) factors, with elements operated on componentwise.  A
presentation names a subring inside such an ambient: the convex span (over
the ambient's full idempotent algebra) of the subring generated by the given
elements together with 0, 1, -1.

The canonical invariant of a presented ring is its signature: for each
residue-field isomorphism class, the total number of atoms whose quotient is
that field.  Two presentations are isomorphic exactly when their signatures
agree, because finite Boolean rings are classified by their atom count.  The
decomposition pipeline follows the constructive route: saturate the
generated subring to a finite set, split it into fields along its primitive
idempotents (Chinese remainder), and count ambient atoms under each
idempotent; an independent per-atom residue-field count cross-checks it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .boolean import BooleanRing
from .errors import CapExceeded, VerificationError
from .fields import FieldElem, FiniteField, finite_field
from .stepfun import ConvexCombination, StepElem, StepRing

ENUM_CAP = 1 << 20
PRODUCT_CHECK_CAP = 4096
SUBRING_CAP = 10 ** 6


class ProductRing:
    """A finite product of step-function ring factors."""

    __slots__ = ("factors", "_elem_list")

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a product ring needs at least one factor")
        norm = []
        for f in factors:
            if isinstance(f, StepRing):
                norm.append(f)
            else:
                field, br = f
                if isinstance(br, int):
                    br = BooleanRing(br)
                norm.append(StepRing(field, br))
        self.factors = tuple(norm)
        self._elem_list = None

    def __eq__(self, other):
        if isinstance(other, ProductRing):
            return self.factors == other.factors
        return NotImplemented

    def __hash__(self):
        return hash(self.factors)

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)

    __repr__ = __str__

    @property
    def total_atoms(self):
        return sum(f.bool_ring.atom_count for f in self.factors)

    @property
    def size(self):
        n = 1
        for f in self.factors:
            n *= f.size
        return n

    @property
    def char(self):
        """lcm of the factor characteristics: a squarefree integer."""
        c = 1
        for f in self.factors:
            if c % f.field.p:
                c *= f.field.p
        return c

    def element(self, parts) -> "ProductElem":
        parts = tuple(parts)
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} parts, got {len(parts)}")
        return ProductElem(self, tuple(f.coerce(p) for f, p in zip(self.factors, parts)))

    @property
    def zero(self):
        return ProductElem(self, tuple(f.zero for f in self.factors))

    @property
    def one(self):
        return ProductElem(self, tuple(f.one for f in self.factors))

    def scalar(self, k: int) -> "ProductElem":
        """The diagonal image of the integer k."""
        return ProductElem(self, tuple(f.scalar(k) for f in self.factors))

    def scalar_at(self, factor: int, k) -> "ProductElem":
        """k on the given factor, zero elsewhere."""
        parts = [f.zero for f in self.factors]
        parts[factor] = self.factors[factor].scalar(k)
        return ProductElem(self, tuple(parts))

    def from_profile(self, masks) -> "ProductElem":
        """The idempotent with the given per-factor atom masks."""
        masks = tuple(masks)
        if len(masks) != len(self.factors):
            raise ValueError("profile length mismatch")
        return ProductElem(self, tuple(f.indicator(m) for f, m in zip(self.factors, masks)))

    def coerce(self, v) -> "ProductElem":
        if isinstance(v, ProductElem):
            if v.ring != self:
                raise ValueError(f"element of {v.ring} used in {self}")
            return v
        if isinstance(v, int):
            return self.scalar(v)
        if isinstance(v, StepElem) and len(self.factors) == 1:
            return ProductElem(self, (self.factors[0].coerce(v),))
        if isinstance(v, (tuple, list)):
            return self.element(v)
        raise TypeError(f"cannot coerce {v!r} into {self}")

    def prime_labels(self):
        """All primes as (factor index, atom index) pairs."""
        out = []
        for i, f in enumerate(self.factors):
            out.extend((i, j) for j in range(f.bool_ring.atom_count))
        return tuple(out)

    def quotient_field(self, label) -> FiniteField:
        return self.factors[label[0]].field

    def elements(self, cap: int = ENUM_CAP):
        if self.size > cap:
            raise CapExceeded(f"{self} has {self.size} elements, above the cap {cap}")
        sizes = [f.size for f in self.factors]
        for idx in range(self.size):
            parts = []
            t = idx
            for f, s in zip(self.factors, sizes):
                sub = t % s
                t //= s
                parts.append(_step_from_index(f, sub))
            yield ProductElem(self, tuple(parts))

    def cached_elements(self, cap: int = PRODUCT_CHECK_CAP):
        if self._elem_list is None or len(self._elem_list) > cap:
            if self.size > cap:
                raise CapExceeded(f"{self} has {self.size} elements, above the cap {cap}")
            self._elem_list = tuple(self.elements(cap))
        return self._elem_list

    def element_index(self, x: "ProductElem") -> int:
        idx = 0
        for f, part in zip(reversed(self.factors), reversed(x.parts)):
            idx = idx * f.size + f.element_index(part)
        return idx

    def idempotent_profiles(self):
        """Masks of all idempotents; 2^total_atoms of them."""
        if self.total_atoms > 20:
            raise CapExceeded(f"{self} has 2^{self.total_atoms} idempotents")
        widths = [f.bool_ring.atom_count for f in self.factors]
        total = sum(widths)
        for m in range(1 << total):
            profile = []
            t = m
            for w in widths:
                profile.append(t & ((1 << w) - 1))
                t >>= w
            yield tuple(profile)

    def random_element(self, rng: random.Random) -> "ProductElem":
        return ProductElem(self, tuple(f.random_element(rng) for f in self.factors))

    def convex(self, coeffs, values) -> "ProductElem":
        profiles = _coeff_profiles(self, coeffs)
        values = [self.coerce(v) for v in values]
        if len(profiles) != len(values):
            raise ValueError("coefficient and value sequences differ in length")
        parts = []
        for i, f in enumerate(self.factors):
            pairs = []
            for prof, val in zip(profiles, values):
                mask = prof[i]
                if not mask:
                    continue
                for bmask, bval in val.parts[i].blocks:
                    m = bmask & mask
                    if m:
                        pairs.append((m, bval))
            parts.append(f.from_blocks(pairs))
        return ProductElem(self, tuple(parts))


def _step_from_index(ring: StepRing, idx: int) -> StepElem:
    q = ring.field.q
    vals = []
    for _ in range(ring.bool_ring.atom_count):
        vals.append(ring.field.from_index(idx % q))
        idx //= q
    return ring.from_values(vals)


def _coeff_profiles(ring: ProductRing, coeffs):
    profiles = []
    fulls = [f.bool_ring.full_mask for f in ring.factors]
    unions = [0] * len(ring.factors)
    totals = [0] * len(ring.factors)
    for c in coeffs:
        c = ring.coerce(c)
        prof = c.support_profile()
        if not c.is_idempotent():
            raise ValueError(f"coefficient {c} is not idempotent")
        profiles.append(prof)
        for i, m in enumerate(prof):
            unions[i] |= m
            totals[i] += m.bit_count()
    if not profiles:
        raise ValueError("empty coefficient family")
    for i, f in enumerate(ring.factors):
        if unions[i] != fulls[i] or totals[i] != f.bool_ring.atom_count:
            raise ValueError("coefficients do not form a complete orthogonal idempotent family")
    return profiles


class ProductElem:
    __slots__ = ("ring", "parts", "_hash")

    def __init__(self, ring, parts):
        self.ring = ring
        self.parts = parts
        self._hash = hash(parts)

    def _coerce(self, other):
        if isinstance(other, ProductElem):
            if other.ring != self.ring:
                raise ValueError(f"mixed rings: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ProductElem(self.ring, tuple(a + b for a, b in zip(self.parts, o.parts)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ProductElem(self.ring, tuple(a - b for a, b in zip(self.parts, o.parts)))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ProductElem(self.ring, tuple(a * b for a, b in zip(self.parts, o.parts)))

    __rmul__ = __mul__

    def __neg__(self):
        return ProductElem(self.ring, tuple(-a for a in self.parts))

    def __pow__(self, e):
        return ProductElem(self.ring, tuple(a ** e for a in self.parts))

    def support(self) -> "ProductElem":
        return ProductElem(self.ring, tuple(a.support() for a in self.parts))

    def support_profile(self):
        return tuple(a.support_mask_int() for a in self.parts)

    def quasi_inverse(self) -> "ProductElem":
        return ProductElem(self.ring, tuple(a.quasi_inverse() for a in self.parts))

    def is_idempotent(self) -> bool:
        return all(a.is_idempotent() for a in self.parts)

    def value_at(self, label) -> FieldElem:
        return self.parts[label[0]].value_at(label[1])

    def __bool__(self):
        return any(self.parts)

    def __eq__(self, other):
        if isinstance(other, ProductElem):
            return self.parts == other.parts and self.ring == other.ring
        return NotImplemented

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return tuple(p.sort_key() for p in self.parts)

    def __str__(self):
        return "(" + " | ".join(str(p) for p in self.parts) + ")"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# extraction and cover checks on products


def extract_combination(x: ProductElem, gens) -> ConvexCombination:
    """Product-ring version of the constructive convex extraction."""
    ring = x.ring
    gens = [ring.coerce(g) for g in gens]
    fulls = tuple(f.bool_ring.full_mask for f in ring.factors)
    b_profiles = [(x - g).support_profile() for g in gens]
    running = list(fulls)
    for prof in b_profiles:
        for i, m in enumerate(prof):
            running[i] &= m
    for i, m in enumerate(running):
        if m:
            atom = (m & -m).bit_length() - 1
            raise ValueError(
                f"family does not reach {x} at factor {i}, atom {atom}: value "
                f"{x.value_at((i, atom))} is not attained by any generator there")
    coeffs = []
    running = list(fulls)
    for prof in b_profiles:
        coeff_prof = tuple((fulls[i] ^ prof[i]) & running[i] for i in range(len(fulls)))
        coeffs.append(ring.from_profile(coeff_prof))
        for i, m in enumerate(prof):
            running[i] &= m
    return ConvexCombination(tuple(coeffs), tuple(gens))


def check_residue_cover(ring: ProductRing, gens, *, product_cap: int = PRODUCT_CHECK_CAP,
                        product_samples: int = 256, rng: random.Random | None = None):
    """Residue coverage at every prime of the product; see the step-ring twin.

    Missing entries are (factor, atom, value) triples.
    """
    from .stepfun import CoverReport

    gens = [ring.coerce(g) for g in gens]
    missing = []
    for i, f in enumerate(ring.factors):
        for atom in range(f.bool_ring.atom_count):
            residues = {g.parts[i].value_at(atom).index for g in gens}
            if len(residues) != f.field.q:
                for v in f.field.elements():
                    if v.index not in residues:
                        missing.append((i, atom, v))
    ok = not missing
    exhaustive = ring.size <= product_cap
    checked = 0
    product_ok = True
    if exhaustive:
        candidates = ring.elements(product_cap)
    elif product_samples <= 0:
        candidates = ()
    else:
        rng = rng or random.Random(0)
        candidates = (ring.random_element(rng) for _ in range(product_samples))
    for x in candidates:
        acc = ring.one
        for g in gens:
            acc = acc * (x - g)
            if not acc:
                break
        checked += 1
        if acc:
            product_ok = False
            break
    if product_ok != ok and exhaustive:
        raise VerificationError("residue coverage and vanishing product disagree")
    return CoverReport(ok, tuple(missing), product_ok, exhaustive, checked)


# ---------------------------------------------------------------------------
# presentations and the generated subring


@dataclass(frozen=True)
class SubringPresentation:
    """Names the convex span (over all ambient idempotents) of the subring
    generated by `gens` together with 0, 1, -1."""

    ambient: ProductRing
    gens: tuple

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.ambient.coerce(g) for g in self.gens))


def full_presentation(ring: ProductRing) -> SubringPresentation:
    """Presentation whose convex span is the whole product ring: 0, 1 and
    every factor-supported field scalar."""
    gens = []
    for i, f in enumerate(ring.factors):
        for k in f.field.elements():
            gens.append(ring.scalar_at(i, k))
    return SubringPresentation(ring, tuple(gens))


def generated_subring(pres: SubringPresentation, cap: int = SUBRING_CAP):
    """Closure of gens plus {0, 1, -1} under + and *, breadth-first.

    Deterministic: generations are emitted in order, each sorted by the
    canonical element key.  Exceeding `cap` elements raises CapExceeded.
    """
    ring = pres.ambient
    seeds = {ring.zero, ring.one, -ring.one}
    seeds.update(pres.gens)
    ordered = sorted(seeds, key=lambda e: e.sort_key())
    known = set(ordered)
    result = list(ordered)
    frontier = list(ordered)
    while frontier:
        new = set()
        for a in frontier:
            for b in result:
                for c in (a + b, a * b):
                    if c not in known:
                        new.add(c)
        if len(known) + len(new) > cap:
            raise CapExceeded(
                f"generated subring exceeds {cap} elements; not finitely "
                f"covered or the cap is too small")
        frontier = sorted(new, key=lambda e: e.sort_key())
        known.update(new)
        result.extend(frontier)
    return tuple(result)


# ---------------------------------------------------------------------------
# finite reduced decomposition (Chinese remainder along primitive idempotents)


def idempotent_power(t: ProductElem) -> ProductElem:
    """The idempotent in the multiplicative orbit of t.

    Walk t, t^2, t^3, ... until a repeat t^a = t^b; the idempotent is t^c for
    c the least multiple of the period b-a that is >= a.  Bounded by the
    orbit length, hence by the subring size.
    """
    powers = [t]
    seen = {t: 1}
    cur = t
    k = 1
    while True:
        k += 1
        cur = cur * t
        first = seen.get(cur)
        if first is not None:
            period = k - first
            c = period * ((first + period - 1) // period)
            e = powers[c - 1]
            if e * e != e:
                raise VerificationError("stabilized power is not idempotent")
            return e
        seen[cur] = k
        powers.append(cur)


@dataclass(frozen=True)
class FieldClass:
    """Isomorphism class of a finite field."""

    p: int
    n: int

    @property
    def order(self):
        return self.p ** self.n

    def __str__(self):
        return f"GF({self.order})"


def decompose_finite_reduced(elements, *, assume_closed: bool = False):
    """Split a finite reduced subring into fields along primitive idempotents.

    Returns (epsilon, FieldClass) pairs: a complete orthogonal family of
    primitive idempotents with each T*epsilon a finite field.  Raises if the
    set is not closed under + and * or if some slice is not a field.
    """
    elems = tuple(elements)
    if not elems:
        raise ValueError("empty element set")
    ring = elems[0].ring
    index = set(elems)
    one = ring.one
    if one not in index:
        raise ValueError("subring must contain 1")
    if not assume_closed:
        for a in elems:
            for b in elems:
                if a + b not in index or a * b not in index:
                    raise ValueError("element set is not closed under + and *")
    # all idempotents of T arise as stabilized powers
    idems = {}
    for t in elems:
        e = idempotent_power(t)
        idems[e.sort_key()] = e
    # primitive idempotents: refine 1 along every idempotent
    blocks = [one]
    for e in sorted(idems.values(), key=lambda x: x.sort_key()):
        nxt = []
        comp = one - e
        for b in blocks:
            for piece in (b * e, b * comp):
                if piece:
                    nxt.append(piece)
        blocks = nxt
    blocks.sort(key=lambda x: x.sort_key())
    out = []
    total = one - one
    card = 1
    for eps in blocks:
        if eps not in index:
            raise VerificationError("primitive idempotent escaped the subring")
        slice_elems = {t * eps for t in elems}
        n_slice = len(slice_elems)
        pn = _prime_power_or_none(n_slice)
        if pn is None:
            raise ValueError("input not reduced: a slice has non-prime-power order")
        p, n = pn
        if _scalar_times(eps, p) != eps.ring.zero:
            raise ValueError("input not reduced: slice characteristic mismatch")
        for a in slice_elems:
            if a == eps * 0:
                continue
            if not a:
                continue
            if not any(a * b == eps for b in slice_elems):
                raise ValueError("input not reduced: a slice has a non-invertible nonzero element")
        out.append((eps, FieldClass(p, n)))
        total = total + eps
        card *= n_slice
    if total != one:
        raise VerificationError("primitive idempotents do not sum to 1")
    for i, (e1, _) in enumerate(out):
        for e2, _ in out[i + 1:]:
            if e1 * e2:
                raise VerificationError("primitive idempotents are not orthogonal")
    if card != len(index):
        raise VerificationError("field orders do not multiply to the subring size")
    return tuple(out)


def _scalar_times(x: ProductElem, k: int) -> ProductElem:
    acc = x.ring.zero
    for _ in range(k):
        acc = acc + x
    return acc


def _prime_power_or_none(n):
    from . import zmodpoly as zp

    return zp.prime_power(n)


# ---------------------------------------------------------------------------
# the canonical signature


@dataclass(frozen=True)
class RingSignature:
    """field class -> total atom count, the complete isomorphism invariant."""

    entries: tuple  # ((p, n), atoms) sorted by (p, n)

    @classmethod
    def from_dict(cls, d):
        items = []
        for key, atoms in d.items():
            if isinstance(key, FieldClass):
                key = (key.p, key.n)
            if atoms <= 0:
                raise ValueError("atom totals must be positive")
            items.append(((key[0], key[1]), atoms))
        items.sort()
        if len({k for k, _ in items}) != len(items):
            raise ValueError("duplicate field classes in signature")
        return cls(tuple(items))

    def as_dict(self):
        return dict(self.entries)

    def total_atoms(self):
        return sum(a for _, a in self.entries)

    def __str__(self):
        inner = ", ".join(f"GF({p ** n}):{atoms}" for (p, n), atoms in self.entries)
        return "sig{" + inner + "}"

    __repr__ = __str__


def ring_from_signature(sig: RingSignature) -> ProductRing:
    factors = []
    for (p, n), atoms in sig.entries:
        factors.append(StepRing(finite_field(p, n), BooleanRing(atoms)))
    return ProductRing(factors)


@dataclass(frozen=True)
class WitnessBlock:
    epsilon: ProductElem
    field: FieldClass
    atom_masks: tuple  # per ambient factor
    atom_total: int


@dataclass(frozen=True)
class StructureWitness:
    subring_size: int
    blocks: tuple  # WitnessBlock


def structure_decompose(pres: SubringPresentation, cap: int = SUBRING_CAP):
    """Signature plus decomposition witness for a presented ring.

    Pipeline: saturate the generated subring, split it along primitive
    idempotents into fields, count ambient atoms under each idempotent, and
    merge equal fields by adding atom counts.  Cross-checked against the
    independent per-atom residue-field count.
    """
    T = generated_subring(pres, cap)
    parts = decompose_finite_reduced(T, assume_closed=True)
    blocks = []
    merged: dict = {}
    for eps, fc in parts:
        profile = eps.support_profile()
        atoms = sum(m.bit_count() for m in profile)
        blocks.append(WitnessBlock(eps, fc, profile, atoms))
        merged[(fc.p, fc.n)] = merged.get((fc.p, fc.n), 0) + atoms
    sig = RingSignature.from_dict(merged)
    oracle = residue_field_signature(pres)
    if oracle != sig:
        raise VerificationError(
            f"decomposition signature {sig} disagrees with the residue-field count {oracle}")
    return sig, StructureWitness(len(T), tuple(blocks))


def residue_field_signature(pres: SubringPresentation) -> RingSignature:
    """Independent signature: at each prime, the residue field is the subfield
    generated by the residues of the generators (with 0 and 1)."""
    ring = pres.ambient
    counts: dict = {}
    for i, f in enumerate(ring.factors):
        p = f.field.p
        for atom in range(f.bool_ring.atom_count):
            d = 1
            for g in pres.gens:
                d = _lcm(d, g.parts[i].value_at(atom).residue_degree())
            counts[(p, d)] = counts.get((p, d), 0) + 1
    return RingSignature.from_dict(counts)


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def iso_test(p1: SubringPresentation, p2: SubringPresentation, cap: int = SUBRING_CAP) -> bool:
    """Presented rings are isomorphic iff their signatures are equal."""
    s1, _ = structure_decompose(p1, cap)
    s2, _ = structure_decompose(p2, cap)
    return s1 == s2


# ---------------------------------------------------------------------------
# characteristic decomposition


@dataclass(frozen=True)
class CharBlock:
    prime: int
    idempotent: ProductElem
    subring: ProductRing
    factor_indices: tuple


def ring_char(ring_or_pres) -> int:
    if isinstance(ring_or_pres, SubringPresentation):
        return ring_or_pres.ambient.char
    return ring_or_pres.char


def char_decompose(ring: ProductRing):
    """One block per prime dividing the characteristic: the idempotent
    1 - support(q*1) and the sub-product of the characteristic-q factors."""
    primes = sorted({f.field.p for f in ring.factors})
    blocks = []
    for q in primes:
        support = ring.scalar(q).support()
        idem = ring.one - support
        indices = tuple(i for i, f in enumerate(ring.factors) if f.field.p == q)
        sub = ProductRing(tuple(ring.factors[i] for i in indices))
        blocks.append(CharBlock(q, idem, sub, indices))
    total = ring.zero
    for b in blocks:
        total = total + b.idempotent
    if total != ring.one:
        raise VerificationError("characteristic blocks do not sum to 1")
    for i, b1 in enumerate(blocks):
        for b2 in blocks[i + 1:]:
            if b1.idempotent * b2.idempotent:
                raise VerificationError("characteristic blocks are not orthogonal")
    return tuple(blocks)
