"""Finite fields, monomial quotient rings, and square-zero extensions."""

import itertools

import pytest

from framecalc.rings import (ArtinRing, Field, NotAUnit, dual_numbers,
                             dual_number_extension, extension_field,
                             prime_field, truncated_poly_ring)


def test_prime_field_arithmetic_exhaustive():
    F = Field(5)
    els = list(F.elements())
    assert len(els) == 5
    for a in els:
        for b in els:
            assert a + b == b + a
            assert a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert a * (b + c) == a * b + a * c


def test_extension_field_f9():
    F9 = Field(3, 2)
    els = list(F9.elements())
    assert len(els) == 9
    # multiplicative group has order 8
    g = F9.gen()
    powers = set()
    x = F9.one()
    for _ in range(8):
        x = x * g
        powers.add(x.coeffs)
    # the default modulus is chosen so that t generates (checked, not assumed)
    nonzero = [a for a in els if not a.is_zero()]
    for a in nonzero:
        assert a.inverse() * a == F9.one()


def test_frobenius_is_additive_on_f9():
    F9 = Field(3, 2)
    for a in F9.elements():
        for b in F9.elements():
            assert (a + b) ** 3 == a ** 3 + b ** 3


def test_bad_field_parameters():
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        Field(3, 2, [1, 0, 2])  # not monic
    with pytest.raises(ValueError):
        Field(2, 2, [1, 1])  # wrong degree


def test_artin_ring_basis_and_size():
    R = dual_numbers(3)
    assert R.size == 9
    assert len(R.basis) == 2
    T = truncated_poly_ring(3, "x", 3)
    assert T.size == 27
    two_vars = ArtinRing(Field(2), ("x", "y"), ((2, 0), (0, 2), (1, 1)))
    assert len(two_vars.basis) == 3  # 1, x, y


def test_artin_ring_not_cofinite():
    with pytest.raises(ValueError):
        ArtinRing(Field(3), ("x", "y"), ((2, 0),))


def test_ring_axioms_exhaustive_dual_numbers():
    R = dual_numbers(2)
    els = list(R.elements())
    assert len(els) == 4
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a + R.zero() == a
        assert a * R.one() == a
        assert a + (-a) == R.zero()


def test_units_and_inverses():
    R = truncated_poly_ring(3, "x", 2)
    units = list(R.units())
    assert len(units) == 6
    for u in units:
        assert u * u.invert() == R.one()
    x = R.el({(1,): 1})
    assert not x.is_unit()
    with pytest.raises(NotAUnit):
        x.invert()


def test_residue_roundtrip():
    R = truncated_poly_ring(3, "x", 2)
    for a in R.elements():
        r = R.to_residue(a)
        assert R.to_residue(R.lift_residue(r)) == r


def test_square_zero_extension_projection_section():
    ext = dual_number_extension(3)
    A, B = ext.A, ext.B
    for b in B.elements():
        a = ext.proj(b)
        assert a.ring == A
        assert ext.proj(ext.section(a)) == a
    # the section is additive and multiplicative modulo J
    for a1 in A.elements():
        for a2 in A.elements():
            assert ext.proj(ext.section(a1) * ext.section(a2)) == a1 * a2


def test_kernel_squares_to_zero():
    ext = dual_number_extension(5)
    js = list(ext.j_elements())
    assert len(js) == ext.j_size == 5
    for x in js:
        for y in js:
            assert (x * y).is_zero()


def test_kernel_not_square_zero_rejected():
    from framecalc.rings import SquareZeroExtension
    B = truncated_poly_ring(3, "x", 3)
    with pytest.raises(ValueError):
        SquareZeroExtension(B, ((1,),))  # kernel (x, x^2) has x*x != 0


def test_elements_enumeration_is_deterministic():
    R = extension_field(3, 2)
    first = [repr(a) for a in R.elements()]
    second = [repr(a) for a in R.elements()]
    assert first == second
    assert len(first) == 9
