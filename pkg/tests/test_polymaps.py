import itertools
import random

import pytest

from finreg.fields import GF
from finreg.products import ProductRing
from finreg.polymaps import (MapTable, PolyMap, as_table, commutes_with_conv,
                             contractive_maps, contractive_to_polynomial,
                             is_contractive, is_polynomial, iteration_orbit,
                             per_atom_functions, polynomial_witness_bruteforce,
                             quotient_order_bound, random_polymap,
                             support_exponent)


def P(*specs):
    return ProductRing([(GF(q), atoms) for q, atoms in specs])


def swap_map(ring):
    S = ring.factors[0]
    return MapTable.from_function(ring, lambda x: ring.element(
        [S.from_values([x.parts[0].value_at(1), x.parts[0].value_at(0)])]))


def test_poly_eval_examples():
    R = P((2, 1), (4, 1))
    X = PolyMap(R, [R.zero, R.one])
    assert all(X.evaluate(x) == x for x in R.elements())
    c = R.element([1, GF(4).generator])
    const = PolyMap(R, [c])
    assert all(const.evaluate(x) == c for x in R.elements())
    cube = PolyMap(R, [R.zero, R.zero, R.zero, R.one])
    x = R.element([1, GF(4).generator])
    assert cube.evaluate(x) == R.element([1, 1])  # g^3 = 1


def test_polymap_normalization_and_equality():
    R = P((3, 1))
    assert PolyMap(R, [R.one, R.zero, R.zero]) == PolyMap(R, [R.one])
    assert PolyMap(R, []).degree == -1
    # distinct coefficients, same induced function: X^3 vs X over GF(3)
    X = PolyMap(R, [R.zero, R.one])
    X3 = PolyMap(R, [R.zero, R.zero, R.zero, R.one])
    assert X != X3 and X.same_function(X3)


def test_contractive_identity_and_constants():
    R = P((2, 2))
    ident = PolyMap(R, [R.zero, R.one]).induced_table()
    assert is_contractive(ident) == (True, None)
    for x in R.elements():
        const = MapTable.from_function(R, lambda _, ix=x: ix)
        assert is_contractive(const)[0]


def test_swap_is_not_contractive_with_the_known_witness():
    R = P((2, 2))
    f = swap_map(R)
    ok, witness = is_contractive(f)
    assert not ok and witness is not None
    # the specific pair (0,1) vs (0,0) violates the inequality
    S = R.factors[0]
    x = R.element([S.from_values([0, 1])])
    y = R.element([S.from_values([0, 0])])
    dom = (x - y).support_profile()
    img = (f(x) - f(y)).support_profile()
    assert any(m & ~d for m, d in zip(img, dom))
    okc, _ = commutes_with_conv(f)
    assert not okc
    assert is_polynomial(f) == (False, None)


def test_per_atom_view_is_equivalent_to_contractivity():
    R = P((2, 2))
    elems = R.cached_elements()
    coordinatewise = 0
    for images in itertools.product(elems, repeat=len(elems)):
        f = MapTable(R, dict(zip(elems, images)))
        ok, _ = is_contractive(f)
        assert ok == (per_atom_functions(f) is not None)
        coordinatewise += ok
    assert coordinatewise == 16  # one function GF(2)->GF(2) per atom


def test_conv_commuting_matches_contractivity_exhaustively():
    for ring in (P((2, 2)), P((4, 1))):
        elems = ring.cached_elements()
        for images in itertools.product(elems, repeat=len(elems)):
            f = MapTable(ring, dict(zip(elems, images)))
            assert is_contractive(f)[0] == commutes_with_conv(f)[0]


def test_support_map_is_contractive_everywhere():
    for ring in (P((2, 2)), P((4, 1)), P((2, 1), (4, 1)), P((3, 2))):
        f = MapTable.from_function(ring, lambda x: x.support())
        assert is_contractive(f)[0]
        assert commutes_with_conv(f)[0]


def test_orbit_increment_char2():
    R = P((2, 2))
    cert = iteration_orbit(PolyMap(R, [R.one, R.one]), gens=[0, 1])
    assert cert.orbit_size == 2 and cert.period == 2 and cert.tail == 0
    assert cert.methods_agree and cert.boolean_subring_size is not None


def test_orbit_increment_char3():
    R = P((3, 2))
    cert = iteration_orbit(PolyMap(R, [R.one, R.one]), gens=[0, 1, 2])
    assert cert.orbit_size == 3


def test_orbit_increment_char6():
    R = P((2, 1), (3, 1))
    cert = iteration_orbit(PolyMap(R, [R.one, R.one]), gens=[R.scalar(k) for k in range(6)])
    assert cert.orbit_size == 6


def test_orbit_frobenius():
    for q, expect in ((4, 2), (8, 3), (16, 4)):
        R = P((q, 1))
        sq = PolyMap(R, [R.zero, R.zero, R.one])
        gens = [R.scalar_at(0, k) for k in GF(q).elements()]
        cert = iteration_orbit(sq, gens=gens)
        assert cert.orbit_size == expect, (q, cert)


def test_orbit_table_only_and_refusal():
    R = P((2, 2))
    f = swap_map(R)
    cert = iteration_orbit(f)  # table method alone is fine
    assert cert.orbit_size == 2 and cert.generators is None
    with pytest.raises(ValueError, match="refused"):
        iteration_orbit(f, gens=[0, 1])


def test_orbit_methods_agree_on_random_polynomials():
    rng = random.Random(17)
    rings = [P((2, 3)), P((3, 2)), P((4, 2)), P((8, 2)), P((2, 2), (4, 1))]
    for ring in rings:
        gens = [ring.scalar_at(i, k) for i, f in enumerate(ring.factors)
                for k in f.field.elements()]
        for _ in range(10):
            f = random_polymap(ring, rng)
            cert = iteration_orbit(f, gens=gens)
            assert cert.methods_agree
            # every certificate matrix keeps orthogonal-partition columns
            for matrix in cert.matrices:
                for col in matrix:
                    union = [0] * len(ring.factors)
                    total = 0
                    for prof in col:
                        for i, m in enumerate(prof):
                            union[i] |= m
                            total += m.bit_count()
                    assert total == ring.total_atoms
                    assert all(u == f_.bool_ring.full_mask
                               for u, f_ in zip(union, ring.factors))


def test_support_exponent_examples():
    assert support_exponent(P((2, 3)))[:1] == (1,)
    m24, ok24 = support_exponent(P((2, 1), (4, 1)))
    assert (m24, ok24) == (3, True)
    m34, ok34 = support_exponent(P((3, 1), (4, 1)))
    assert (m34, ok34) == (6, True)
    m234, ok234 = support_exponent(P((2, 1), (3, 1), (4, 1)))
    assert (m234, ok234) == (6, True)


def test_quotient_order_bound():
    rep = quotient_order_bound(P((2, 1), (4, 1)), 3)
    assert rep.bound == 6 and rep.holds_strictly
    # degree-1 support map on a Boolean ring: the strict bound fails exactly
    # at the order-2 boundary, and is flagged rather than hidden
    edge = quotient_order_bound(P((2, 2)), 1)
    assert edge.boundary_cases == (2,)
    assert edge.ok_up_to_boundary and not edge.holds_strictly
    bad = quotient_order_bound(P((9, 1)), 2)
    assert bad.strict_violations == (9,)


def test_contractive_to_polynomial_identity():
    R = P((3, 2))
    ident = PolyMap(R, [R.zero, R.one]).induced_table()
    poly = contractive_to_polynomial(ident)
    assert poly == PolyMap(R, [R.zero, R.one])


def test_contractive_to_polynomial_shift():
    R = P((2, 1), (4, 1))
    c = R.element([1, GF(4).generator])
    shift = PolyMap(R, [c, R.one]).induced_table()
    ok, witness = is_polynomial(shift)
    assert ok and witness == PolyMap(R, [c, R.one])


def test_support_map_interpolates_to_the_cube():
    R = P((2, 1), (4, 1))
    f = MapTable.from_function(R, lambda x: x.support())
    poly = contractive_to_polynomial(f)
    cube = PolyMap(R, [R.zero, R.zero, R.zero, R.one])
    assert poly.same_function(cube)
    assert poly.degree <= 3


def test_contractive_to_polynomial_rejects_non_contractive():
    R = P((2, 2))
    with pytest.raises(ValueError, match="not contractive"):
        contractive_to_polynomial(swap_map(R))


def test_coordinatewise_maps_roundtrip():
    R = P((3, 2))
    sq = {x: x * x for x in GF(3).elements()}
    const1 = {x: GF(3).one for x in GF(3).elements()}
    from finreg.polymaps import _table_from_atom_functions
    f = _table_from_atom_functions(R, {(0, 0): sq, (0, 1): const1})
    poly = contractive_to_polynomial(f)
    assert all(poly.evaluate(x) == f(x) for x in R.cached_elements())


def test_bruteforce_oracle_agrees_on_all_maps_of_a_tiny_ring():
    R = P((2, 2))
    elems = R.cached_elements()
    for images in itertools.product(elems, repeat=len(elems)):
        f = MapTable(R, dict(zip(elems, images)))
        witness = polynomial_witness_bruteforce(f)
        contractive, _ = is_contractive(f)
        assert (witness is not None) == contractive
        if witness is not None:
            assert all(witness.evaluate(x) == f(x) for x in elems)


def test_polynomials_are_contractive_in_bulk():
    rng = random.Random(23)
    for ring in (P((2, 2)), P((3, 1), (2, 1)), P((4, 1), (3, 1))):
        for _ in range(200):
            table = random_polymap(ring, rng).induced_table()
            assert is_contractive(table)[0]


def test_contractive_enumeration_counts():
    assert sum(1 for _ in contractive_maps(P((2, 2)))) == 16
    assert sum(1 for _ in contractive_maps(P((3, 2)))) == 729


def test_interpolation_roundtrip_gf2_b3():
    R = P((2, 3))
    count = 0
    for f in contractive_maps(R):
        poly = contractive_to_polynomial(f)
        assert all(poly.evaluate(x) == y for x, y in f.mapping.items())
        count += 1
    assert count == 64  # one function GF(2)->GF(2) per atom
