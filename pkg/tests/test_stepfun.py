import itertools
import random

import pytest

from finreg.boolean import BooleanRing
from finreg.fields import GF
from finreg.stepfun import (StepRing, check_residue_cover, convex_combination,
                            extract_combination)


def ring(q, atoms):
    return StepRing(GF(q), BooleanRing(atoms))


def dense(x):
    """Independent view: the tuple of values atom by atom."""
    return tuple(x.value_at(j) for j in range(x.ring.bool_ring.atom_count))


def test_arithmetic_matches_pointwise_oracle():
    rng = random.Random(11)
    for _ in range(300):
        R = ring(rng.choice((2, 3, 4, 5, 9)), rng.randint(1, 5))
        x, y = R.random_element(rng), R.random_element(rng)
        vx, vy = dense(x), dense(y)
        assert dense(x + y) == tuple(a + b for a, b in zip(vx, vy))
        assert dense(x * y) == tuple(a * b for a, b in zip(vx, vy))
        assert dense(x - y) == tuple(a - b for a, b in zip(vx, vy))
        assert dense(-x) == tuple(-a for a in vx)


def test_spec_arithmetic_examples():
    R = ring(3, 2)
    x = R.from_values([1, 2])
    y = R.from_values([2, 2])
    assert x + y == R.from_values([0, 1])
    b = R.indicator(R.bool_ring.atom(0))
    assert x * b == R.from_values([1, 0])
    assert x + R.zero == x and x * R.one == x


def test_identities_and_normal_form():
    R = ring(4, 3)
    K = R.field
    g = K.generator
    x = R.from_values([g, g, K.zero])
    # the same element assembled from split, shuffled blocks
    y = R.from_blocks([(0b010, g), (0b100, K.zero), (0b001, g)])
    assert x == y and hash(x) == hash(y)
    assert len(x.blocks) == 2  # equal values merged
    assert str(x) == "{[2]->0; [0,1]->g}"


def test_support_idempotent():
    R = ring(4, 2)
    K = R.field
    assert R.zero.support() == R.zero
    assert R.one.support() == R.one
    assert R.scalar(K.generator).support() == R.one
    x = R.from_values([K.generator, K.zero])
    assert x.support() == R.indicator(R.bool_ring.atom(0))
    assert x.support() * x.support() == x.support()


def test_quasi_inverse():
    R3 = ring(3, 2)
    x = R3.from_values([2, 0])
    xi = x.quasi_inverse()
    assert xi == R3.from_values([2, 0])  # 2 is its own inverse mod 3
    assert R3.zero.quasi_inverse() == R3.zero
    u = R3.scalar(2)
    assert u.quasi_inverse() == R3.scalar(2)
    rng = random.Random(3)
    for _ in range(200):
        R = ring(rng.choice((2, 3, 4, 8)), rng.randint(1, 4))
        x = R.random_element(rng)
        xi = x.quasi_inverse()
        assert x * xi * x == x and xi * x * xi == xi
        assert x * xi == x.support()
        assert x.unit_part() * x.support() == x


def test_convex_combination():
    R = ring(3, 2)
    B = R.bool_ring
    assert R.convex([B.one], [2]) == R.scalar(2)
    x = R.convex([B.atom(0), B.atom(1)], [1, 2])
    assert x == R.from_values([1, 2])
    # permuting the pairs leaves the result unchanged
    assert R.convex([B.atom(1), B.atom(0)], [2, 1]) == x
    with pytest.raises(ValueError):
        R.convex([B.atom(0), B.atom(0)], [1, 2])


def test_extraction_follows_the_constructive_formula():
    R = ring(3, 2)
    x = R.from_values([1, 2])
    combo = extract_combination(x, [0, 1, 2])
    # supports: x-0 is everywhere nonzero, x-1 vanishes on atom 0, x-2 on atom 1
    assert [c.mask for c in combo.coeffs] == [0b00, 0b01, 0b10]
    assert combo.evaluate(R) == x
    # zero coefficients are retained, order follows the generators
    assert len(combo.coeffs) == 3


def test_extraction_scalar_shortcut():
    R = ring(5, 3)
    combo = extract_combination(R.scalar(3), [3, 0, 1])
    assert [c.mask for c in combo.coeffs] == [R.bool_ring.full_mask, 0, 0]


def test_extraction_exhaustive_reconstruction_gf2_b3():
    R = ring(2, 3)
    for x in R.elements():
        combo = extract_combination(x, [0, 1])
        assert combo.evaluate(R) == x


def test_extraction_error_names_the_offending_atom():
    R = ring(3, 2)
    x = R.from_values([1, 2])
    with pytest.raises(ValueError, match="atom 1"):
        extract_combination(x, [0, 1])


def test_extraction_with_step_function_generators():
    R = ring(3, 2)
    g1 = R.from_values([1, 2])
    g2 = R.from_values([2, 0])
    g3 = R.from_values([0, 1])
    # residues at atom 0: {1, 2, 0}; atom 1: {2, 0, 1}: full cover
    assert check_residue_cover(R, [g1, g2, g3]).ok
    for x in R.elements():
        combo = extract_combination(x, [g1, g2, g3])
        assert combo.evaluate(R) == x


def test_cover_check_examples():
    R22 = ring(2, 2)
    assert check_residue_cover(R22, [0, 1]).ok

    R41 = ring(4, 1)
    rep = check_residue_cover(R41, [0, 1])
    assert not rep.ok
    missing = {str(v) for _, v in rep.missing}
    assert missing == {"g", "g+1"}

    R32 = ring(3, 2)
    rep = check_residue_cover(R32, [0, 1, 2])
    assert rep.ok and rep.product_ok and rep.product_exhaustive
    assert rep.product_checked == 9


def test_evaluation_is_a_ring_homomorphism():
    R = ring(3, 2)
    elems = list(R.elements())
    for j in (0, 1):
        for x, y, z in itertools.product(elems, repeat=3):
            assert (x * y + z).value_at(j) == x.value_at(j) * y.value_at(j) + z.value_at(j)


def test_scalar_and_idempotent_evaluation():
    R = ring(4, 3)
    K = R.field
    for k in K.elements():
        for j in range(3):
            assert R.scalar(k).value_at(j) == k
    b = R.indicator(R.bool_ring.subset([1]))
    assert [b.value_at(j).index for j in range(3)] == [0, 1, 0]


def test_idempotents_are_exactly_the_indicators():
    for q, atoms in ((2, 3), (3, 2), (4, 2)):
        R = ring(q, atoms)
        idems = [x for x in R.elements() if x * x == x]
        assert len(idems) == 2 ** atoms
        indicators = {R.indicator(b.mask) for b in R.bool_ring.elements()}
        assert set(idems) == indicators


def test_support_commutes_with_combinations():
    R = ring(3, 2)
    B = R.bool_ring
    elems = list(R.elements())
    for a in B.elements():
        coeffs = (a, a.complement())
        for x, y in itertools.product(elems, repeat=2):
            lhs = R.convex(coeffs, (x, y)).support()
            rhs = R.convex(coeffs, (x.support(), y.support()))
            assert lhs == rhs


def test_wide_atom_universe_stays_cheap():
    # element size tracks the number of distinct values, not the atom count
    R = ring(4, 1 << 20)
    rng = random.Random(77)
    x = R.random_element(rng)
    y = R.random_element(rng)
    assert len((x * y + x).blocks) <= 4
    assert (x * x.quasi_inverse()) == x.support()
    b = R.bool_ring.subset([0, 999_999])
    ind = R.indicator(b)
    assert (ind * ind) == ind
    assert x.value_at(999_999) == (x * ind).value_at(999_999)


def test_zero_atom_universe_rejected():
    with pytest.raises(ValueError):
        ring(3, 0)


def test_mixed_ring_errors():
    with pytest.raises(ValueError):
        ring(3, 2).one + ring(3, 3).one
    with pytest.raises(ValueError):
        ring(3, 2).one + ring(5, 2).one
