"""Frame axioms, the zip projection, and the two thickenings."""

import pytest

from framecalc.rings import (dual_number_extension, extension_field,
                             prime_field, truncated_poly_ring)
from framecalc.frames import (HodgeThickening, RelativeFrame,
                              TautologicalFrame, Thickening, WittFrame,
                              ZipFrame, check_zip_projection,
                              frame_axiom_check, zip_projection)


def frames_under_test():
    return [
        WittFrame(prime_field(3), 2),
        ZipFrame(prime_field(3)),
        ZipFrame(extension_field(3, 2)),
        ZipFrame(truncated_poly_ring(3, "x", 2)),
        RelativeFrame(dual_number_extension(3), 2),
        TautologicalFrame(prime_field(3)),
    ]


@pytest.mark.parametrize("frame", frames_under_test(),
                         ids=lambda f: f.kind + "/" + repr(f.s0))
def test_frame_axioms(frame):
    report = frame_axiom_check(frame, budget=20000, seed=0)
    assert report["passed"], report["failures"][:5]
    assert report["mode"] == "exhaustive"


@pytest.mark.parametrize("frame", [WittFrame(prime_field(3), 2),
                                   RelativeFrame(dual_number_extension(3), 2)],
                         ids=["witt", "relative"])
def test_zip_projection_commutes(frame):
    report = check_zip_projection(frame, budget=20000, seed=0)
    assert report["passed"], report["failures"][:5]
    assert report["mode"] == "exhaustive"


def test_zip_projection_target():
    frame = WittFrame(prime_field(3), 2)
    pi0, piP, target = zip_projection(frame)
    assert target.kind == "zip"
    # pi0 is reduction to the first Witt component
    x = frame.s0.el([1, 2])
    assert pi0(x) == target.ring.el(1)


def test_relative_frame_p_is_at_least_3():
    with pytest.raises(ValueError):
        RelativeFrame(dual_number_extension(2), 2)


def test_thickening_reduction_is_surjective():
    ext = dual_number_extension(3)
    th = Thickening(ext, 2)
    targets = {th.eps0(th.lift0(s)) for s in th.target.s0.elements()}
    assert len(targets) == th.target.s0.size
    for s in th.target.s0.elements():
        assert th.eps0(th.lift0(s)) == s


def test_thickening_compatibilities_and_kernel():
    ext = dual_number_extension(3)
    th = Thickening(ext, 2)
    report = th.check(samples=50, seed=0)
    assert report["passed"], report["failures"][:5]
    assert th.k0_size == 9
    # every kernel element projects to zero and sdot is nilpotent of order m
    for k in th.k0_elements():
        assert th.eps0(k).is_zero()
        assert th.sdotK(th.sdotK(k)).is_zero()


def test_hodge_thickening_cokernel_is_j():
    ext = dual_number_extension(3)
    ht = HodgeThickening(ext, 2)
    assert ht.s_prime.kind == "witt"
    assert ht.s_rel.kind == "relative"
    report = ht.check()
    assert report["passed"], report["failures"][:5]


def test_tautological_frame_sigma_is_frobenius():
    frame = TautologicalFrame(prime_field(5))
    for a in frame.s0.elements():
        assert frame.sigma0(a) == a ** 5
