"""Graded matrices, the display group action, F-zips, and orbit counts."""

import itertools
import random

import pytest

from framecalc import linalg
from framecalc.rings import prime_field, extension_field
from framecalc.frames import WittFrame, ZipFrame
from framecalc.displays import (Display, GradedElem, GradedMatrix,
                                all_displays, classify_fzips, classify_orbits,
                                dual, from_fzip, group_elements,
                                in_display_group, is_isomorphic_bruteforce,
                                tensor, to_fzip, twist, unit_display)
from framecalc.fixtures import rand_group_element


F3 = prime_field(3)
ZF3 = ZipFrame(F3)
WF3 = WittFrame(F3, 2)


def test_graded_sigma_tau_are_multiplicative():
    rng = random.Random(2)
    mu = (1, 0)
    for frame in (ZF3, WF3):
        for _ in range(25):
            A = rand_group_element(frame, mu, rng)
            B = rand_group_element(frame, mu, rng)
            C = A * B
            s0 = frame.s0
            assert linalg.mat_eq(C.sigma(), linalg.mat_mul(s0, A.sigma(), B.sigma()))
            assert linalg.mat_eq(C.tau(), linalg.mat_mul(s0, A.tau(), B.tau()))


def test_graded_entry_degrees_enforced():
    with pytest.raises(ValueError):
        GradedMatrix(ZF3, (1, 0), (1, 0),
                     [[GradedElem(ZF3, 1, F3.zero()), GradedElem(ZF3, 1, F3.zero())],
                      [GradedElem(ZF3, 1, F3.zero()), GradedElem(ZF3, 1, F3.zero())]])


def test_act_is_a_right_action():
    rng = random.Random(5)
    mu = (1, 0)
    for frame in (ZF3, WF3):
        d = Display(frame, mu, linalg.identity(frame.s0, 2))
        for _ in range(20):
            A = rand_group_element(frame, mu, rng)
            B = rand_group_element(frame, mu, rng)
            assert d.act(A * B) == d.act(A).act(B)


def test_display_group_membership_weights_10():
    # over the zip frame with mu = (1,0), tau kills the degree-1 slot, so
    # group elements are exactly those with unit diagonal
    count = 0
    for g in group_elements(ZF3, (1, 0)):
        count += 1
        assert not g.entries[0][0].payload.is_zero()
        assert not g.entries[1][1].payload.is_zero()
    assert count == 36


def test_weight_zero_group_is_gln():
    # all of GL_2(F_3): 48 elements
    assert sum(1 for _ in group_elements(ZF3, (0, 0))) == 48


def test_fzip_roundtrip_exhaustive_rank_le_2():
    total = 0
    for mu in [(0,), (1,), (1, 1), (1, 0), (0, 0)]:
        frame = ZF3
        for d in all_displays(frame, len(mu), mu):
            z = to_fzip(d)
            back = from_fzip(z, frame)
            assert back == d
            assert to_fzip(back).weights == z.weights
            total += 1
    # 2 + 2 + three rank-2 types with |GL_2(F_3)| = 48 invertible matrices
    assert total == 2 + 2 + 3 * 48 == 148


def test_fzip_weights_read_off_mu():
    d = Display(ZF3, (1, 0), [[F3.zero(), F3.one()], [F3.one(), F3.el(2)]])
    assert to_fzip(d).weights == (1, 0)


def test_orbit_count_f2_dual_route():
    zf = ZipFrame(prime_field(2))
    orbits = classify_orbits(zf, (1, 0))
    zips = classify_fzips(zf, (1, 0))
    assert len(orbits) == 2
    assert len(zips) == 2
    assert sorted(len(o) for o in orbits) == [2, 4]


def test_orbit_count_f3_dual_route():
    orbits = classify_orbits(ZF3, (1, 0))
    zips = classify_fzips(ZF3, (1, 0))
    assert len(orbits) == 6
    assert len(zips) == 6


def test_orbit_count_rank1_f3():
    orbits = classify_orbits(ZF3, (1,))
    zips = classify_fzips(ZF3, (1,))
    assert len(orbits) == 2
    assert len(zips) == 2


def test_orbit_multiset_is_twist_invariant():
    # twisting by the unit display is an equivalence of groupoids: orbit
    # sizes at mu and mu + k agree
    base = sorted(len(o) for o in classify_orbits(ZF3, (1, 0)))
    shifted = sorted(len(o) for o in classify_orbits(ZF3, (2, 1)))
    assert base == shifted


def test_twist_and_dual_are_inverses_up_to_double_dual():
    d = Display(ZF3, (1, 0), [[F3.zero(), F3.one()], [F3.one(), F3.el(2)]])
    assert twist(twist(d, 1), -1) == d
    dd = dual(dual(d))
    assert dd.mu == d.mu
    assert linalg.mat_eq(dd.phi, d.phi)


def test_tensor_with_unit_is_identity_on_phi():
    d = Display(ZF3, (1, 0), [[F3.one(), F3.one()], [F3.el(2), F3.one()]])
    u = unit_display(ZF3, 1, 0)
    t = tensor(d, u)
    assert t.mu == d.mu
    assert linalg.mat_eq(t.phi, d.phi)


def test_isomorphic_bruteforce_consistent_with_orbits():
    orbits = classify_orbits(ZF3, (1, 0))
    reps = [next(iter(o)) for o in orbits]
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            assert is_isomorphic_bruteforce(a, b) == (i == j)


def test_invertibility_is_checked():
    with pytest.raises(ValueError):
        Display(ZF3, (1, 0), [[F3.zero(), F3.zero()],
                              [F3.zero(), F3.one()]])
    with pytest.raises(ValueError):
        Display(ZF3, (0, 1), linalg.identity(F3, 2))  # weights must descend
