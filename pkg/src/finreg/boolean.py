"""Finite Boolean rings as powerset algebras over an indexed atom universe.

Elements are atom subsets stored as integer bitmasks; sum is symmetric
difference, product is intersection.  Prime ideals correspond one-to-one
with atoms (the sets missing that atom).
"""

from __future__ import annotations

from .errors import CapExceeded

ATOM_CAP = 1 << 20
ENUM_ATOM_CAP = 22  # full powerset enumeration only below this


class BooleanRing:
    __slots__ = ("atom_count", "full_mask")

    def __init__(self, atom_count: int):
        if not isinstance(atom_count, int) or atom_count < 1:
            raise ValueError(f"atom count must be a positive integer, got {atom_count!r}")
        if atom_count > ATOM_CAP:
            raise CapExceeded(f"atom count {atom_count} exceeds the cap {ATOM_CAP}")
        self.atom_count = atom_count
        self.full_mask = (1 << atom_count) - 1

    def __eq__(self, other):
        if isinstance(other, BooleanRing):
            return self.atom_count == other.atom_count
        return NotImplemented

    def __hash__(self):
        return hash(("B", self.atom_count))

    def __str__(self):
        return f"B(atoms={self.atom_count})"

    __repr__ = __str__

    @property
    def size(self):
        return 1 << self.atom_count

    @property
    def zero(self):
        return BoolElem(self, 0)

    @property
    def one(self):
        return BoolElem(self, self.full_mask)

    def atom(self, j: int) -> "BoolElem":
        if not 0 <= j < self.atom_count:
            raise ValueError(f"atom {j} out of range for {self}")
        return BoolElem(self, 1 << j)

    def subset(self, atoms) -> "BoolElem":
        mask = 0
        for j in atoms:
            if not 0 <= j < self.atom_count:
                raise ValueError(f"atom {j} out of range for {self}")
            mask |= 1 << j
        return BoolElem(self, mask)

    def from_mask(self, mask: int) -> "BoolElem":
        if not 0 <= mask <= self.full_mask:
            raise ValueError(f"mask {mask:#x} out of range for {self}")
        return BoolElem(self, mask)

    def elements(self):
        if self.atom_count > ENUM_ATOM_CAP:
            raise CapExceeded(f"cannot enumerate {self}: 2^{self.atom_count} elements")
        return (BoolElem(self, m) for m in range(self.full_mask + 1))

    def prime_ideals(self):
        return tuple(PrimeIdeal(self, j) for j in range(self.atom_count))


class BoolElem:
    __slots__ = ("ring", "mask")

    def __init__(self, ring, mask):
        self.ring = ring
        self.mask = mask

    def _check(self, other):
        if not isinstance(other, BoolElem):
            raise TypeError(f"expected a Boolean element, got {other!r}")
        if other.ring != self.ring:
            raise ValueError(f"mixed Boolean rings: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):  # ring sum = symmetric difference
        o = self._check(other)
        return BoolElem(self.ring, self.mask ^ o.mask)

    def __mul__(self, other):  # ring product = intersection
        o = self._check(other)
        return BoolElem(self.ring, self.mask & o.mask)

    def __or__(self, other):  # lattice join
        o = self._check(other)
        return BoolElem(self.ring, self.mask | o.mask)

    def complement(self):
        return BoolElem(self.ring, self.mask ^ self.ring.full_mask)

    def __le__(self, other):
        o = self._check(other)
        return self.mask & ~o.mask == 0

    def __bool__(self):
        return self.mask != 0

    def __eq__(self, other):
        if isinstance(other, BoolElem):
            return self.mask == other.mask and self.ring == other.ring
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.atom_count, self.mask))

    def atoms(self):
        m = self.mask
        out = []
        j = 0
        while m:
            if m & 1:
                out.append(j)
            m >>= 1
            j += 1
        return tuple(out)

    @property
    def count(self):
        return self.mask.bit_count()

    def __str__(self):
        if self.mask == self.ring.full_mask:
            return "[all]"
        return "[" + ",".join(str(j) for j in self.atoms()) + "]"

    __repr__ = __str__


class PrimeIdeal:
    """The prime (= maximal) ideal of all subsets missing one atom."""

    __slots__ = ("ring", "atom")

    def __init__(self, ring, atom):
        self.ring = ring
        self.atom = atom

    def __contains__(self, elem: BoolElem) -> bool:
        if elem.ring != self.ring:
            raise ValueError("element of a different Boolean ring")
        return (elem.mask >> self.atom) & 1 == 0

    def __eq__(self, other):
        if isinstance(other, PrimeIdeal):
            return self.ring == other.ring and self.atom == other.atom
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.atom_count, "prime", self.atom))

    def __repr__(self):
        return f"prime(atom={self.atom})"


def is_partition_of_unity(elems) -> bool:
    """True iff the family is pairwise disjoint with union the full atom set.

    Zero members are permitted; the empty family is not a partition.
    """
    elems = list(elems)
    if not elems:
        return False
    ring = elems[0].ring
    union = 0
    total = 0
    for e in elems:
        if e.ring != ring:
            raise ValueError("mixed Boolean rings in family")
        union |= e.mask
        total += e.mask.bit_count()
    return union == ring.full_mask and total == ring.atom_count
