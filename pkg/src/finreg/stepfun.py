"""The ring of K-valued step functions on the atoms of a finite Boolean ring.

An element is a partition of the atom universe into blocks, each labelled
with a distinct field value: exactly the locally constant functions from the
(discrete, finite) spectrum of the Boolean ring into K.  The normal form
(nonempty disjoint covering blocks, pairwise distinct values, blocks sorted
by value) makes structural equality semantic equality, and keeps elements
small even over huge atom universes: an element costs one block per distinct
value, never one slot per atom.

Scalars embed as single-block elements, Boolean elements embed as 0/1-valued
indicators, and those indicators are exactly the idempotents of the ring.
The support idempotent of x (the unique idempotent generating the same
principal ideal) is the indicator of where x is nonzero; the quasi-inverse
inverts x blockwise on its support.  Convex combinations (coefficients a
complete orthogonal family of idempotents) and their constructive extraction
against a generating family are the workhorses of everything downstream.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .boolean import BooleanRing, BoolElem, is_partition_of_unity
from .errors import CapExceeded, VerificationError
from .fields import FieldElem, FiniteField

ENUM_CAP = 1 << 20
PRODUCT_CHECK_CAP = 4096


class StepRing:
    """K-valued step functions over a fixed finite Boolean ring of atoms."""

    __slots__ = ("field", "bool_ring", "_elem_list")

    def __init__(self, field: FiniteField, bool_ring: BooleanRing):
        self.field = field
        self.bool_ring = bool_ring
        self._elem_list = None

    def __eq__(self, other):
        if isinstance(other, StepRing):
            return self.field == other.field and self.bool_ring == other.bool_ring
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.bool_ring.atom_count))

    def __str__(self):
        return f"GF({self.field.q})^[{self.bool_ring}]"

    __repr__ = __str__

    @property
    def atom_count(self):
        return self.bool_ring.atom_count

    @property
    def size(self):
        return self.field.q ** self.bool_ring.atom_count

    @property
    def zero(self):
        return self.scalar(self.field.zero)

    @property
    def one(self):
        return self.scalar(self.field.one)

    def scalar(self, k) -> "StepElem":
        if isinstance(k, int):
            k = self.field.from_int(k)
        elif not isinstance(k, FieldElem) or k.field != self.field:
            raise ValueError(f"{k!r} is not a scalar of {self.field}")
        return StepElem(self, ((self.bool_ring.full_mask, k),))

    def indicator(self, b) -> "StepElem":
        """The 0/1-valued step function equal to 1 exactly on b."""
        if isinstance(b, BoolElem):
            if b.ring != self.bool_ring:
                raise ValueError(f"{b!r} lives over a different Boolean ring")
            mask = b.mask
        elif isinstance(b, int):
            if not 0 <= b <= self.bool_ring.full_mask:
                raise ValueError(f"mask {b:#x} out of range")
            mask = b
        else:
            raise TypeError(f"expected a Boolean element or mask, got {b!r}")
        full = self.bool_ring.full_mask
        if mask == 0:
            return self.zero
        if mask == full:
            return self.one
        return StepElem(self, ((full ^ mask, self.field.zero), (mask, self.field.one)))

    def from_values(self, values) -> "StepElem":
        """Build from one field value per atom (atom j gets values[j])."""
        values = list(values)
        if len(values) != self.bool_ring.atom_count:
            raise ValueError(f"expected {self.bool_ring.atom_count} values, got {len(values)}")
        acc = {}
        for j, v in enumerate(values):
            if isinstance(v, int):
                v = self.field.from_int(v)
            if not isinstance(v, FieldElem) or v.field != self.field:
                raise ValueError(f"value {v!r} is not in {self.field}")
            if v.index in acc:
                acc[v.index] = (acc[v.index][0] | (1 << j), v)
            else:
                acc[v.index] = (1 << j, v)
        return StepElem(self, tuple(acc[i] for i in sorted(acc)))

    def from_blocks(self, pairs) -> "StepElem":
        """Build from (atom set, value) pairs; validates a partition."""
        acc = {}
        union = 0
        total = 0
        for part, value in pairs:
            if isinstance(part, BoolElem):
                if part.ring != self.bool_ring:
                    raise ValueError("block over a different Boolean ring")
                mask = part.mask
            else:
                mask = int(part)
            if isinstance(value, int):
                value = self.field.from_int(value)
            if not isinstance(value, FieldElem) or value.field != self.field:
                raise ValueError(f"value {value!r} is not in {self.field}")
            if mask == 0:
                continue
            union |= mask
            total += mask.bit_count()
            if value.index in acc:
                acc[value.index] = (acc[value.index][0] | mask, value)
            else:
                acc[value.index] = (mask, value)
        if union != self.bool_ring.full_mask or total != self.bool_ring.atom_count:
            raise ValueError("blocks must partition the atom universe")
        return StepElem(self, tuple(acc[i] for i in sorted(acc)))

    def coerce(self, v) -> "StepElem":
        if isinstance(v, StepElem):
            if v.ring != self:
                raise ValueError(f"element of {v.ring} used in {self}")
            return v
        if isinstance(v, (FieldElem, int)):
            return self.scalar(v)
        if isinstance(v, BoolElem):
            return self.indicator(v)
        raise TypeError(f"cannot coerce {v!r} into {self}")

    def elements(self, cap: int = ENUM_CAP):
        """All elements in canonical order (atom-0 value varies fastest)."""
        if self.size > cap:
            raise CapExceeded(f"{self} has {self.size} elements, above the cap {cap}")
        q = self.field.q
        atoms = self.bool_ring.atom_count
        for idx in range(self.size):
            vals = []
            t = idx
            for _ in range(atoms):
                vals.append(self.field.from_index(t % q))
                t //= q
            yield self.from_values(vals)

    def cached_elements(self, cap: int = PRODUCT_CHECK_CAP):
        if self._elem_list is None or len(self._elem_list) > cap:
            if self.size > cap:
                raise CapExceeded(f"{self} has {self.size} elements, above the cap {cap}")
            self._elem_list = tuple(self.elements(cap))
        return self._elem_list

    def element_index(self, x: "StepElem") -> int:
        q = self.field.q
        idx = 0
        for j in range(self.bool_ring.atom_count - 1, -1, -1):
            idx = idx * q + x.value_at(j).index
        return idx

    def random_element(self, rng: random.Random) -> "StepElem":
        atoms = self.bool_ring.atom_count
        if atoms <= 24:
            return self.from_values([self.field.random_element(rng) for _ in range(atoms)])
        # wide universe: a few random blocks instead of per-atom sampling
        remaining = self.bool_ring.full_mask
        pairs = []
        blocks = rng.randint(1, min(self.field.q, 8))
        for _ in range(blocks - 1):
            take = remaining & rng.getrandbits(atoms)
            if take:
                pairs.append((take, self.field.random_element(rng)))
                remaining &= ~take
        if remaining:
            pairs.append((remaining, self.field.random_element(rng)))
        return self.from_blocks(pairs)

    def convex(self, coeffs, values) -> "StepElem":
        """Sum a_i * x_i for a complete orthogonal idempotent family (a_i)."""
        masks = _coeff_masks(self, coeffs)
        values = [self.coerce(v) for v in values]
        if len(masks) != len(values):
            raise ValueError("coefficient and value sequences differ in length")
        pairs = []
        for mask, val in zip(masks, values):
            if not mask:
                continue
            for bmask, bval in val.blocks:
                m = bmask & mask
                if m:
                    pairs.append((m, bval))
        return self.from_blocks(pairs)


def _coeff_masks(ring, coeffs):
    """Masks of a coefficient family; validates it is a partition of unity."""
    masks = []
    union = 0
    total = 0
    for c in coeffs:
        if isinstance(c, BoolElem):
            if c.ring != ring.bool_ring:
                raise ValueError("coefficient over a different Boolean ring")
            mask = c.mask
        elif isinstance(c, StepElem):
            if c.ring != ring:
                raise ValueError("coefficient from a different ring")
            b = c.as_bool_elem()
            if b is None:
                raise ValueError(f"coefficient {c} is not idempotent")
            mask = b.mask
        else:
            raise TypeError(f"bad coefficient {c!r}")
        masks.append(mask)
        union |= mask
        total += mask.bit_count()
    if not masks or union != ring.bool_ring.full_mask or total != ring.bool_ring.atom_count:
        raise ValueError("coefficients do not form a complete orthogonal idempotent family")
    return masks


class StepElem:
    """Normalized step function; construct through StepRing factories."""

    __slots__ = ("ring", "blocks", "_hash")

    def __init__(self, ring, blocks):
        self.ring = ring
        self.blocks = blocks
        self._hash = hash((ring.field.p, ring.field.n, ring.bool_ring.atom_count,
                           tuple((m, v.index) for m, v in blocks)))

    # -- arithmetic: common refinement of the two partitions ----------------

    def _combine(self, other, op):
        if not isinstance(other, StepElem):
            other = self.ring.coerce(other)
        elif other.ring != self.ring:
            raise ValueError(f"mixed rings: {self.ring} vs {other.ring}")
        acc = {}
        for ma, va in self.blocks:
            for mb, vb in other.blocks:
                m = ma & mb
                if m:
                    v = op(va, vb)
                    prev = acc.get(v.index)
                    acc[v.index] = (m if prev is None else prev[0] | m, v)
        return StepElem(self.ring, tuple(acc[i] for i in sorted(acc)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return self._valuewise(lambda v: -v)

    def _valuewise(self, fn):
        acc = {}
        for m, v in self.blocks:
            w = fn(v)
            prev = acc.get(w.index)
            acc[w.index] = (m if prev is None else prev[0] | m, w)
        return StepElem(self.ring, tuple(acc[i] for i in sorted(acc)))

    def scale(self, c: FieldElem) -> "StepElem":
        return self._valuewise(lambda v: v * c)

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers of step elements")
        if e == 0:
            return self.ring.one
        return self._valuewise(lambda v: v ** e)

    # -- regular-ring structure ---------------------------------------------

    def support_mask_int(self) -> int:
        m = 0
        for mask, v in self.blocks:
            if v:
                m |= mask
        return m

    def support_mask(self) -> BoolElem:
        return self.ring.bool_ring.from_mask(self.support_mask_int())

    def support(self) -> "StepElem":
        """The idempotent generating the same principal ideal: 1 where x != 0."""
        return self.ring.indicator(self.support_mask_int())

    def quasi_inverse(self) -> "StepElem":
        """x* with x x* x = x and x* x x* = x*: blockwise inverse on support."""
        return self._valuewise(lambda v: v.inverse() if v else v)

    def unit_part(self) -> "StepElem":
        """Unit u with x = u * support(x): x on the support, 1 elsewhere."""
        return self._valuewise(lambda v: v if v else self.ring.field.one)

    def is_idempotent(self) -> bool:
        return all(v.index <= 1 for _, v in self.blocks)

    def as_bool_elem(self):
        if not self.is_idempotent():
            return None
        return self.ring.bool_ring.from_mask(self.support_mask_int())

    # -- evaluation at primes -------------------------------------------------

    def value_at(self, atom: int) -> FieldElem:
        """Project to the quotient field at the prime ideal of the given atom."""
        if not 0 <= atom < self.ring.bool_ring.atom_count:
            raise ValueError(f"atom {atom} out of range for {self.ring}")
        bit = 1 << atom
        for mask, v in self.blocks:
            if mask & bit:
                return v
        raise VerificationError("blocks do not cover the atom universe")

    def values(self):
        return tuple(v for _, v in self.blocks)

    # -- plumbing -------------------------------------------------------------

    def __bool__(self):
        return self.support_mask_int() != 0

    def __eq__(self, other):
        if isinstance(other, StepElem):
            return (self._hash == other._hash and self.ring == other.ring
                    and len(self.blocks) == len(other.blocks)
                    and all(ma == mb and va == vb for (ma, va), (mb, vb)
                            in zip(self.blocks, other.blocks)))
        return NotImplemented

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return tuple((v.index, m) for m, v in self.blocks)

    def __str__(self):
        ring = self.ring
        parts = []
        for mask, v in self.blocks:
            parts.append(f"{ring.bool_ring.from_mask(mask)}->{v}")
        return "{" + "; ".join(parts) + "}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# convex combinations and the constructive extraction


@dataclass(frozen=True)
class ConvexCombination:
    """Coefficients (a complete orthogonal idempotent family) and values."""

    coeffs: tuple
    values: tuple

    def evaluate(self, ring):
        return ring.convex(self.coeffs, self.values)


def convex_combination(ring: StepRing, coeffs, values) -> StepElem:
    return ring.convex(coeffs, values)


def extract_combination(x: StepElem, gens) -> ConvexCombination:
    """Write x = sum a_i x_i over the given family, constructively.

    b_i is the support of x - x_i and a_i = (1 - b_i) * prod_{j<i} b_j; zero
    coefficients are retained and the order follows the input family, so the
    output is reproducible bit for bit.  Fails if some atom's value is not
    attained by any generator there.
    """
    ring = x.ring
    gens = [ring.coerce(g) for g in gens]
    full = ring.bool_ring.full_mask
    b_masks = [(x - g).support_mask_int() for g in gens]
    running = full
    for b in b_masks:
        running &= b
    if running:
        atom = (running & -running).bit_length() - 1
        raise ValueError(
            f"family does not reach {x} at atom {atom}: value "
            f"{x.value_at(atom)} is not attained by any generator there")
    coeffs = []
    running = full
    for b in b_masks:
        coeffs.append(ring.bool_ring.from_mask((full ^ b) & running))
        running &= b
    return ConvexCombination(tuple(coeffs), tuple(gens))


# ---------------------------------------------------------------------------
# the finite-cover witness check


@dataclass(frozen=True)
class CoverReport:
    """Outcome of checking that a family covers every residue field."""

    ok: bool
    missing: tuple  # (atom, missing value) pairs, or (factor, atom, value)
    product_ok: bool
    product_exhaustive: bool
    product_checked: int

    def __bool__(self):
        return self.ok


def check_residue_cover(ring: StepRing, gens, *, product_cap: int = PRODUCT_CHECK_CAP,
                        product_samples: int = 256, rng: random.Random | None = None) -> CoverReport:
    """Decide whether the family hits every value of every residue field.

    The per-atom residue coverage is the decision procedure; the vanishing of
    prod (x - g) over the whole ring is cross-checked exhaustively when the
    ring is small enough, on a seeded sample otherwise.
    """
    gens = [ring.coerce(g) for g in gens]
    missing = []
    all_values = None
    for atom in range(ring.bool_ring.atom_count):
        residues = {g.value_at(atom).index for g in gens}
        if len(residues) != ring.field.q:
            if all_values is None:
                all_values = list(ring.field.elements())
            for v in all_values:
                if v.index not in residues:
                    missing.append((atom, v))
    ok = not missing
    exhaustive = ring.size <= product_cap
    checked = 0
    product_ok = True
    if exhaustive:
        candidates = ring.elements(product_cap)
    elif product_samples <= 0:
        candidates = ()  # caller cross-checks the product on its own
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
