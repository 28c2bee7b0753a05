"""Truncated Witt ring arithmetic against ring axioms and frozen values."""

import itertools

import pytest

from framecalc.rings import (dual_number_extension, extension_field,
                             prime_field, truncated_poly_ring)
from framecalc.witt import (LogCoords, NotInIdeal, TruncationUnderflow,
                            WittRing, divided_frobenius, frobenius_fixed,
                            log_elements, log_from_witt, log_shift,
                            teichmuller, truncate, verschiebung,
                            verschiebung_trunc, witt_frobenius)


RINGS_SMALL = [
    (prime_field(3), 2),      # 9 elements
    (prime_field(3), 3),      # 27
    (prime_field(2), 3),      # 8
    (extension_field(3, 2), 2),          # 81
    (truncated_poly_ring(3, "x", 2), 2),  # 81
]


@pytest.mark.parametrize("ring,m", RINGS_SMALL)
def test_ring_axioms_exhaustive(ring, m):
    wr = WittRing(ring, m)
    els = list(wr.elements())
    assert len(els) == ring.size ** m <= 10 ** 4
    zero, one = wr.zero(), wr.one()
    for x in els:
        assert x + zero == x
        assert x * one == x
        assert x + (-x) == zero
    # pairwise laws exhaustively; triples only for the smallest rings
    for x in els:
        for y in els:
            assert x + y == y + x
            assert x * y == y * x
    # triple laws on a deterministic sub-grid (full |W|^3 is out of scale)
    sample = els[:: max(1, len(els) // 9)]
    for x, y, z in itertools.product(sample, repeat=3):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


@pytest.mark.parametrize("p,m", [(3, 1), (3, 2), (3, 3), (2, 3)])
def test_additive_order_of_one(p, m):
    wr = WittRing(prime_field(p), m)
    one = wr.one()
    acc = one
    order = 1
    while not acc.is_zero():
        acc = acc + one
        order += 1
        assert order <= p ** m
    assert order == p ** m
    # and W_m(F_p) is cyclic: from_int is a bijection onto the ring
    images = {wr.from_int(k) for k in range(p ** m)}
    assert len(images) == p ** m


def test_frozen_values_w2_f3():
    wr = WittRing(prime_field(3), 2)
    R = wr.ring
    W = lambda a, b: wr.el([R.el(a), R.el(b)])
    assert W(1, 0) + W(2, 0) == W(0, 0)
    assert W(1, 1) * W(1, 1) == W(1, 2)
    assert -W(1, 0) == W(2, 0)


def test_teichmuller_is_multiplicative():
    ring = extension_field(3, 2)
    for a in ring.elements():
        for b in ring.elements():
            lhs = teichmuller(a, 3) * teichmuller(b, 3)
            assert lhs == teichmuller(a * b, 3)


def test_verschiebung_is_additive():
    wr = WittRing(prime_field(3), 2)
    for x in wr.elements():
        for y in wr.elements():
            assert verschiebung(x + y) == verschiebung(x) + verschiebung(y)
            assert verschiebung_trunc(x + y) == \
                verschiebung_trunc(x) + verschiebung_trunc(y)


def test_frobenius_is_a_ring_map():
    wr = WittRing(prime_field(3), 3)
    els = list(wr.elements())
    for x in els[::3]:
        for y in els[::3]:
            assert witt_frobenius(x + y) == witt_frobenius(x) + witt_frobenius(y)
            assert witt_frobenius(x * y) == witt_frobenius(x) * witt_frobenius(y)


def test_frobenius_after_verschiebung_is_p():
    wr = WittRing(prime_field(3), 2)
    for x in wr.elements():
        assert witt_frobenius(verschiebung(x)) == x + x + x


def test_fixed_length_frobenius_char_p():
    # over F_p the fixed-length Frobenius is the identity; over F_9 it is
    # the field Frobenius componentwise
    wr = WittRing(prime_field(3), 2)
    for x in wr.elements():
        assert frobenius_fixed(x) == x
    ring9 = extension_field(3, 2)
    wr9 = WittRing(ring9, 2)
    x = wr9.el([ring9.el(ring9.field.el([1, 1])),
                ring9.el(ring9.field.el([0, 2]))])
    fx = frobenius_fixed(x)
    assert fx.comps[0] == x.comps[0] ** 3
    assert fx.comps[1] == x.comps[1] ** 3


def test_divided_frobenius_is_a_section_of_v():
    wr = WittRing(prime_field(3), 3)
    small = WittRing(prime_field(3), 2)
    for x in small.elements():
        assert divided_frobenius(verschiebung(x)) == x
    with pytest.raises(NotInIdeal):
        divided_frobenius(wr.one())


def test_truncation_and_underflow():
    wr = WittRing(prime_field(3), 3)
    x = wr.el([1, 2, 1])
    assert truncate(x, 2) == WittRing(prime_field(3), 2).el([1, 2])
    with pytest.raises(TruncationUnderflow):
        witt_frobenius(WittRing(prime_field(3), 1).one())


def test_log_coordinates_are_additive():
    ext = dual_number_extension(3)
    els = list(log_elements(ext, 2))
    assert len(els) == 9
    for x in els:
        for y in els:
            # Witt addition of J-supported vectors is componentwise: the
            # cross terms all carry products of kernel elements
            assert (x.embed() + y.embed()) == (x + y).embed()
    for x in els:
        assert log_from_witt(ext, x.embed()) == x


def test_log_shift_is_nilpotent():
    ext = dual_number_extension(3)
    for x in log_elements(ext, 3):
        y = x
        for _ in range(3):
            y = log_shift(y)
        assert y.is_zero()
