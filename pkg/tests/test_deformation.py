"""Descent along thickenings, Hodge lifts, and fiber classification."""

import itertools
import random

import pytest

from framecalc import linalg
from framecalc.rings import dual_number_extension
from framecalc.frames import RelativeFrame, Thickening, WittFrame
from framecalc.displays import Display, GradedMatrix
from framecalc.orthogonal import verify_orth
from framecalc.deformation import (KernelCoords, WittKernelCoords,
                                   classify_witt_fiber, conj_operator,
                                   enumerate_hodge_deformations,
                                   hodge_lift_matrix, hodge_lift_parameters,
                                   is_isomorphic_witt, k3_deform,
                                   lift_display, lift_orth_display,
                                   lift_uniqueness_witness, reduce_display,
                                   reduce_witt_display, solve_descent,
                                   solve_identity_iso, tau_inverse_kernel,
                                   theta, witt_fiber_member_class,
                                   witt_zip_lift_pairs)
from framecalc.fixtures import gl2_fixture, k3_fixture


def _rand_kernel_matrix(th, mu, rng):
    """I + random J-supported entries over W_2(B)."""
    s0 = th.source.s0
    js = list(th.ext.j_elements())
    n = len(mu)
    I = linalg.identity(s0, n)
    return [[I[i][j] + s0.el([rng.choice(js), rng.choice(js)])
             for j in range(n)] for i in range(n)]


def test_lift_reduce_is_identity_gl():
    th, d = gl2_fixture()
    dhat = lift_display(th, d)
    assert linalg.mat_eq(reduce_display(th, dhat).phi, d.phi)


def test_lift_reduce_is_identity_orth():
    th, d = k3_fixture()
    dhat = lift_orth_display(th, d)
    assert verify_orth(dhat)
    assert linalg.mat_eq(reduce_display(th, dhat).phi, d.phi)


def test_theta_shifts_positive_and_kills_nonpositive():
    th, d = gl2_fixture()
    rel = th.source
    mu = d.mu
    rng = random.Random(1)
    Y = _rand_kernel_matrix(th, mu, rng)
    T = theta(rel, mu, Y)
    # only the (1,0) slot has positive degree for mu = (1,0)
    assert T[0][0] == rel.s0.one()
    assert T[1][1] == rel.s0.one()
    assert T[0][1].is_zero()
    shifted = rel.s0.el([Y[1][0].comps[1], rel.ext.B.zero()])
    assert T[1][0] == shifted


def test_descent_operator_is_nilpotent():
    th, d = gl2_fixture()
    rel = th.source
    rng = random.Random(2)
    g = d.phi
    g_hat = lift_display(th, d).phi
    g_inv = linalg.mat_inverse(rel.s0, g_hat)
    I = linalg.identity(rel.s0, 2)
    for _ in range(10):
        term = _rand_kernel_matrix(th, d.mu, rng)
        for _ in range(rel.m + 1):
            term = conj_operator(rel, d.mu, g_hat, g_inv, term)
        assert linalg.mat_eq(term, I)


def test_solve_descent_exact_and_unique():
    th, d = gl2_fixture()
    rel = th.source
    rng = random.Random(3)
    g = lift_display(th, d).phi
    for _ in range(30):
        h = _rand_kernel_matrix(th, d.mu, rng)
        y = solve_descent(rel, d.mu, g, h)  # re-substitution asserted inside
        y2 = solve_descent(rel, d.mu, g, h)
        assert linalg.mat_eq(y, y2)


def test_tau_inverse_kernel_inverts_tau():
    th, d = gl2_fixture()
    rel = th.source
    rng = random.Random(4)
    for _ in range(20):
        Y = _rand_kernel_matrix(th, d.mu, rng)
        z = tau_inverse_kernel(rel, d.mu, Y)
        assert linalg.mat_eq(z.tau(), Y)
        assert linalg.mat_eq(z.sigma(), theta(rel, d.mu, Y))


def test_two_lifts_conjugate_by_descent_witness():
    th, d = gl2_fixture()
    rel = th.source
    rng = random.Random(5)
    d1 = lift_display(th, d)
    js = list(th.ext.j_elements())
    s0 = rel.s0
    for _ in range(50):
        eta = [[s0.el([rng.choice(js), rng.choice(js)]) for _ in range(2)]
               for _ in range(2)]
        d2 = Display(rel, d.mu, linalg.mat_add(d1.phi, eta))
        z = lift_uniqueness_witness(rel, d1, d2)  # asserts d1.act(z) == d2
        assert linalg.mat_eq(d1.act(z).phi, d2.phi)


def test_hodge_lift_counts():
    th_gl, d_gl = gl2_fixture()
    assert len(list(hodge_lift_parameters(th_gl.source, d_gl.mu))) == 3
    th_k3, d_k3 = k3_fixture()
    assert len(list(hodge_lift_parameters(th_k3.source, d_k3.mu,
                                          orth=True))) == 9


def test_hodge_lift_matrices_have_identity_sigma():
    th, d = gl2_fixture()
    rel = th.source
    I = linalg.identity(rel.s0, d.n)
    for params in hodge_lift_parameters(rel, d.mu):
        A = hodge_lift_matrix(rel, d.mu, params)
        assert linalg.mat_eq(A.sigma(), I)


def test_hodge_deformations_reduce_and_are_distinct():
    th, d = gl2_fixture()
    deformations = enumerate_hodge_deformations(th, d)
    assert len(deformations) == 3
    seen = set()
    for dd in deformations:
        assert dd.frame.kind == "witt"
        assert linalg.mat_eq(
            reduce_witt_display(th.ext, th.target, dd).phi, d.phi)
        seen.add(hash(dd))
    assert len(seen) == 3


def test_classify_gl_fixture_frozen_report():
    th, d = gl2_fixture()
    report = classify_witt_fiber(th, d)
    assert report["passed"]
    assert report["classes"] == 3
    assert report["hodge_lifts"] == 3
    assert report["fiber_dim"] == 8
    assert report["action_rank"] == 7
    assert report["cosets"] == 3
    assert report["stab_components"] == 6
    # each Hodge deformation lands in its own class
    classes = {witt_fiber_member_class(report, dd)
               for dd in report["deformations"]}
    assert classes == {0, 1, 2}


def test_gl_deformations_pairwise_noniso_over_witt_b():
    th, d = gl2_fixture()
    ext = th.ext
    frame_b = WittFrame(ext.B, 2)
    deformations = enumerate_hodge_deformations(th, d)
    coords = WittKernelCoords(frame_b, d.mu, "resfield")
    pairs = witt_zip_lift_pairs(frame_b, d.mu, ext.A, ext.section)
    resmap = lambda w: ext.proj(w.comps[0])
    for i, a in enumerate(deformations):
        for j, b in enumerate(deformations):
            assert is_isomorphic_witt(coords, pairs, resmap, a, b) == (i == j)


def test_gl_deformations_all_iso_over_relative_frame():
    # unique lifting: over the relative frame the whole fiber is one class
    th, d = gl2_fixture()
    rel = th.source
    deformations = enumerate_hodge_deformations(th, d)
    rels = [Display(rel, d.mu, dd.phi) for dd in deformations]
    coords = KernelCoords(rel, d.mu, "zip")
    for other in rels[1:]:
        z = solve_identity_iso(coords, rels[0], other)
        assert z is not None
        assert rels[0].act(z) == other


def test_k3_deform_count_and_verification():
    th, d = k3_fixture()
    deformations = k3_deform(th, d)
    assert len(deformations) == 9
    seen = set()
    for dd in deformations:
        assert verify_orth(dd)
        assert linalg.mat_eq(
            reduce_witt_display(th.ext, th.target, dd).phi, d.phi)
        seen.add(hash(dd))
    assert len(seen) == 9


def test_ordinary_base_collapses_to_one_class():
    # with the identity matrix as base the kernel action is surjective on
    # the fiber directions: a single class, and a single Hodge lift class
    ext = dual_number_extension(3)
    th = Thickening(ext, 2)
    s0 = th.target.s0
    d = Display(th.target, (1, 0), linalg.identity(s0, 2))
    report = classify_witt_fiber(th, d)
    assert report["classes"] == 1
    assert report["action_rank"] == 8
    assert not report["passed"]  # the Hodge count 3 is not matched
