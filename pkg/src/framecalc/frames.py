"""Frames in the uniform presentation (S_0, P, t1, tP, nu, act, sigma0, sigmadot).

All frames used here have a constant positive part: S_n = P for every n >= 1,
so a frame is finite data.  Negative degrees never materialize; they are
handled symbolically by tau-payloads in the display layer.

The four constructors are the truncated Witt frame W_m(R), the zip frame
(W_1 with its canonical divided structure), the relative frame W_m(B/A) for a
square-zero extension, and the tautological frame with zero positive part.
The zip frame is a final object: every frame carries a canonical projection
to the zip frame of its quotient ring R = S_0/t1(P), checked by
`check_zip_projection`.
"""

from __future__ import annotations

import itertools
import random

from .rings import ArtinRing, RingMismatch, SquareZeroExtension
from .witt import (WittRing, WittVector, divided_frobenius, frobenius_fixed,
                   verschiebung_trunc)


class Frame:
    """Common interface; concrete frames fill in the structure maps."""

    kind = "abstract"

    # subclasses set: s0 (ring-like), r_ring, p (prime), has_p_module

    # -- P-module structure ----------------------------------------------------

    def p_zero(self):
        raise NotImplementedError

    def p_add(self, x, y):
        raise NotImplementedError

    def p_neg(self, x):
        raise NotImplementedError

    def p_sub(self, x, y):
        return self.p_add(x, self.p_neg(y))

    def p_is_zero(self, x):
        return x == self.p_zero()

    def p_elements(self, cap=10 ** 7):
        raise NotImplementedError

    # -- structure maps ----------------------------------------------------------

    def t1(self, x):
        raise NotImplementedError

    def tP(self, x):
        raise NotImplementedError

    def nu(self, x, y):
        raise NotImplementedError

    def act(self, s, x):
        raise NotImplementedError

    def sigma0(self, s):
        raise NotImplementedError

    def sigmadot(self, x):
        raise NotImplementedError

    # -- quotient to R -----------------------------------------------------------

    def reduce(self, s):
        raise NotImplementedError

    def p_int(self, s0=None):
        """The element p of S0."""
        return self.s0.from_int(self.p)

    def __repr__(self):
        return f"<{self.kind} frame over {self.s0!r}>"


class WittFrame(Frame):
    """The truncated Witt frame: S0 = W_m(R), P = W_m(R) representing I_{m+1} via v."""

    kind = "witt"

    def __init__(self, ring, m):
        self.ring = ring
        self.m = m
        self.s0 = WittRing(ring, m)
        self.r_ring = ring
        self.p = ring.p
        self.has_p_module = True
        self._p_elem = self.s0.from_int(self.p)

    def __eq__(self, other):
        return isinstance(other, WittFrame) and self.s0 == other.s0

    def __hash__(self):
        return hash(("witt", self.s0))

    def p_zero(self):
        return self.s0.zero()

    def p_add(self, x, y):
        return x + y

    def p_neg(self, x):
        return -x

    def p_is_zero(self, x):
        return x.is_zero()

    def p_elements(self, cap=10 ** 7):
        return self.s0.elements(cap)

    def t1(self, x):
        return verschiebung_trunc(x)

    def tP(self, x):
        return self._p_elem * x

    def nu(self, x, y):
        return x * y

    def act(self, s, x):
        return frobenius_fixed(s) * x

    def sigma0(self, s):
        return frobenius_fixed(s)

    def sigmadot(self, x):
        return x

    def reduce(self, s):
        return s.comps[0]


class ZipFrame(Frame):
    """S0 = P = R with t = 0; the final frame for R."""

    kind = "zip"

    def __init__(self, ring):
        self.ring = ring
        self.s0 = ring
        self.r_ring = ring
        self.p = ring.p
        self.has_p_module = True

    def __eq__(self, other):
        return isinstance(other, ZipFrame) and self.s0 == other.s0

    def __hash__(self):
        return hash(("zip", self.s0))

    def p_zero(self):
        return self.ring.zero()

    def p_add(self, x, y):
        return x + y

    def p_neg(self, x):
        return -x

    def p_is_zero(self, x):
        return x.is_zero()

    def p_elements(self, cap=10 ** 7):
        return self.ring.elements(cap)

    def t1(self, x):
        return self.ring.zero()

    def tP(self, x):
        return self.ring.zero()

    def nu(self, x, y):
        return x * y

    def act(self, s, x):
        return s ** self.p * x

    def sigma0(self, s):
        return s ** self.p

    def sigmadot(self, x):
        return x

    def reduce(self, s):
        return s


class RelativeFrame(Frame):
    """W_m(B/A) for a square-zero extension B -> A = B/J.

    P consists of pairs (a, x) with a in W_m(B) and x in J, representing
    v(a) + [x]; the product rule (v(a)+x)(v(b)+y) = v(ab) + xy collapses to
    (ab, 0) because J^2 = 0.  The pair presentation is exact at the desk
    settings used throughout (all shipped deformation runs use m = 2) and is
    validated by frame_axiom_check at construction scale.
    """

    kind = "relative"

    def __init__(self, ext, m):
        if ext.B.p == 2:
            raise ValueError("relative frames require p >= 3")
        if m < 2:
            raise ValueError("relative frames require m >= 2 (m = 1 degenerates)")
        self.ext = ext
        self.m = m
        self.s0 = WittRing(ext.B, m)
        self.r_ring = ext.A
        self.p = ext.B.p
        self.has_p_module = True
        self._p_elem = self.s0.from_int(self.p)

    def __eq__(self, other):
        return (isinstance(other, RelativeFrame) and self.s0 == other.s0
                and self.ext.A == other.ext.A)

    def __hash__(self):
        return hash(("relative", self.s0, self.ext.A))

    def p_zero(self):
        return (self.s0.zero(), self.ext.B.zero())

    def p_add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def p_neg(self, x):
        return (-x[0], -x[1])

    def p_is_zero(self, x):
        return x[0].is_zero() and x[1].is_zero()

    def p_elements(self, cap=10 ** 7):
        for a in self.s0.elements(cap):
            for x in self.ext.j_elements():
                yield (a, x)

    def embed_j(self, x):
        """[x] = (x, 0, ..., 0) in W_m(B) for x in J."""
        return self.s0.el([x] + [self.ext.B.zero()] * (self.m - 1))

    def t1(self, x):
        a, j = x
        return verschiebung_trunc(a) + self.embed_j(j)

    def tP(self, x):
        a, j = x
        return (self._p_elem * a, j)

    def nu(self, x, y):
        return (x[0] * y[0], self.ext.B.zero())

    def act(self, s, x):
        a, j = x
        return (frobenius_fixed(s) * a, s.comps[0] * j)

    def sigma0(self, s):
        return frobenius_fixed(s)

    def sigmadot(self, x):
        return x[0]

    def reduce(self, s):
        return self.ext.proj(s.comps[0])


class TautologicalFrame(Frame):
    """S0 = A with zero positive part; sigma extends the Frobenius."""

    kind = "tautological"

    def __init__(self, ring):
        self.ring = ring
        self.s0 = ring
        self.r_ring = ring
        self.p = ring.p
        self.has_p_module = False

    def __eq__(self, other):
        return isinstance(other, TautologicalFrame) and self.s0 == other.s0

    def __hash__(self):
        return hash(("taut", self.s0))

    def p_zero(self):
        return None

    def p_add(self, x, y):
        return None

    def p_neg(self, x):
        return None

    def p_is_zero(self, x):
        return True

    def p_elements(self, cap=10 ** 7):
        yield None

    def t1(self, x):
        return self.ring.zero()

    def tP(self, x):
        return None

    def nu(self, x, y):
        return None

    def act(self, s, x):
        return None

    def sigma0(self, s):
        return s ** self.p

    def sigmadot(self, x):
        return self.ring.zero()

    def reduce(self, s):
        return s


# ---------------------------------------------------------------------------
# Constructors (names mirror the operation contracts)
# ---------------------------------------------------------------------------

def build_truncated_witt_frame(ring, m):
    return WittFrame(ring, m)


def build_zip_frame(ring):
    return ZipFrame(ring)


def build_relative_frame(ext, m):
    return RelativeFrame(ext, m)


def build_tautological_frame(ring):
    return TautologicalFrame(ring)


# ---------------------------------------------------------------------------
# Axiom checking
# ---------------------------------------------------------------------------

def _sample(seq, rng, count):
    seq = list(seq)
    if count >= len(seq):
        return seq
    return [seq[rng.randrange(len(seq))] for _ in range(count)]


def frame_axiom_check(frame, budget=20000, seed=0, samples=200):
    """Verify the recovery axioms; exhaustive when |S0|*|P| fits the budget.

    Returns a report dict with a failure witness for every broken identity.
    """
    rng = random.Random(seed)
    failures = []
    s0_all = list(frame.s0.elements()) if frame.s0.size <= budget else None
    if frame.has_p_module:
        p_all = list(frame.p_elements())
    else:
        p_all = [None]
    exhaustive = (s0_all is not None and len(p_all) * max(len(s0_all), 1) <= budget)
    if exhaustive:
        s0_sample, p_sample = s0_all, p_all
    else:
        s0_sample = _sample(s0_all or frame.s0.elements(), rng, samples)
        p_sample = _sample(p_all, rng, samples)
    checks = 0
    p_elem = frame.p_int()

    # (ii) sigma0 is a Frobenius lift: sigma0(s) - s^p in p*S0
    p_multiples = {p_elem * s for s in (s0_all or s0_sample)}
    for s in s0_sample:
        checks += 1
        if frame.sigma0(s) - s ** frame.p not in p_multiples:
            failures.append({"axiom": "frobenius-lift", "witness": repr(s)})
            break

    if frame.has_p_module:
        # (iii) sigma0(t1(x)) = p*sigmadot(x) and sigmadot(tP(x)) = p*sigmadot(x)
        for x in p_sample:
            checks += 2
            if frame.sigma0(frame.t1(x)) != p_elem * frame.sigmadot(x):
                failures.append({"axiom": "sigma0-t1", "witness": repr(x)})
                break
            if frame.sigmadot(frame.tP(x)) != p_elem * frame.sigmadot(x):
                failures.append({"axiom": "sigmadot-tP", "witness": repr(x)})
                break
        # (i) linearity of t and Verjüngung compatibility
        pair_iter = (itertools.product(p_sample, p_sample) if exhaustive
                     else zip(_sample(p_all, rng, samples), _sample(p_all, rng, samples)))
        for x, y in pair_iter:
            checks += 3
            if frame.act(frame.t1(x), y) != frame.tP(frame.nu(y, x)):
                failures.append({"axiom": "t-linearity-act",
                                 "witness": (repr(x), repr(y))})
                break
            if frame.nu(y, frame.tP(x)) != frame.tP(frame.nu(y, x)):
                failures.append({"axiom": "t-linearity-nu",
                                 "witness": (repr(x), repr(y))})
                break
            # (iv) multiplicativity of sigmadot on nu
            if frame.sigmadot(frame.nu(x, y)) != frame.sigmadot(x) * frame.sigmadot(y):
                failures.append({"axiom": "sigmadot-nu",
                                 "witness": (repr(x), repr(y))})
                break
        # (iv) sigmadot(act(s,x)) = sigma0(s)*sigmadot(x)
        mixed_iter = (itertools.product(s0_sample, p_sample) if exhaustive
                      else zip(_sample(s0_all or frame.s0.elements(), rng, samples),
                               _sample(p_all, rng, samples)))
        for s, x in mixed_iter:
            checks += 3
            if frame.sigmadot(frame.act(s, x)) != frame.sigma0(s) * frame.sigmadot(x):
                failures.append({"axiom": "sigmadot-act",
                                 "witness": (repr(s), repr(x))})
                break
            # projection formulas: t commutes with the S0-action
            if frame.t1(frame.act(s, x)) != s * frame.t1(x):
                failures.append({"axiom": "t1-projection",
                                 "witness": (repr(s), repr(x))})
                break
            if frame.tP(frame.act(s, x)) != frame.act(s, frame.tP(x)):
                failures.append({"axiom": "tP-projection",
                                 "witness": (repr(s), repr(x))})
                break

    return {
        "passed": not failures,
        "failures": failures,
        "mode": "exhaustive" if exhaustive else "sampled",
        "checks": checks,
    }


# ---------------------------------------------------------------------------
# Canonical projection to the zip frame (the final object)
# ---------------------------------------------------------------------------

def zip_projection(frame):
    """(pi0, piP, target): the canonical frame map to the zip frame of R."""
    target = ZipFrame(frame.r_ring)

    def pi0(s):
        return frame.reduce(s)

    def piP(x):
        return frame.reduce(frame.sigmadot(x))

    return pi0, piP, target


def check_zip_projection(frame, budget=20000, seed=0, samples=100):
    """The projection commutes with every structure map (sample or exhaustive)."""
    pi0, piP, target = zip_projection(frame)
    rng = random.Random(seed)
    s0_all = list(frame.s0.elements()) if frame.s0.size <= budget else None
    p_all = list(frame.p_elements()) if frame.has_p_module else [None]
    exhaustive = s0_all is not None and len(s0_all) * len(p_all) <= budget
    s0s = s0_all if exhaustive else _sample(s0_all or frame.s0.elements(), rng, samples)
    ps = p_all if exhaustive else _sample(p_all, rng, samples)
    failures = []
    for s in s0s:
        if pi0(frame.sigma0(s)) != target.sigma0(pi0(s)):
            failures.append(("sigma0", repr(s)))
    for a in s0s:
        for b in (s0s if exhaustive else s0s[:10]):
            if pi0(a + b) != pi0(a) + pi0(b) or pi0(a * b) != pi0(a) * pi0(b):
                failures.append(("ring-hom", (repr(a), repr(b))))
    if frame.has_p_module:
        for x in ps:
            if not pi0(frame.t1(x)).is_zero():
                failures.append(("t1", repr(x)))
            if not piP(frame.tP(x)).is_zero():
                failures.append(("tP", repr(x)))
            if pi0(frame.sigmadot(x)) != target.sigmadot(piP(x)):
                failures.append(("sigmadot", repr(x)))
        for x in ps:
            for y in (ps if exhaustive else ps[:10]):
                if piP(frame.nu(x, y)) != target.nu(piP(x), piP(y)):
                    failures.append(("nu", (repr(x), repr(y))))
        for s in s0s:
            for x in (ps if exhaustive else ps[:10]):
                if piP(frame.act(s, x)) != target.act(pi0(s), piP(x)):
                    failures.append(("act", (repr(s), repr(x))))
    return {"passed": not failures, "failures": failures,
            "mode": "exhaustive" if exhaustive else "sampled"}


# ---------------------------------------------------------------------------
# Thickenings
# ---------------------------------------------------------------------------

class Thickening:
    """The 1-thickening W_m(B/A) -> W_m(A) with its sigma-dot-nilpotent kernel.

    K0 = W_m(J) in log coordinates, realized inside S~0 = W_m(B) as the
    J-supported Witt vectors; sigma-dot acts by the coordinate shift and is
    nilpotent of order m.  Truncation note: tau_1 is not bijective on the
    truncated kernel, so sigma-dot on K0 is primary data here (it agrees with
    sigma_1 composed with tau_1^{-1} before truncation).
    """

    def __init__(self, ext, m):
        self.ext = ext
        self.m = m
        self.source = RelativeFrame(ext, m)
        self.target = WittFrame(ext.A, m)
        self.nilpotency_index = m

    def eps0(self, s):
        """W_m(B) -> W_m(A), component-wise projection."""
        return self.target.s0.el([self.ext.proj(c) for c in s.comps])

    def epsP(self, x):
        a, _ = x
        return self.eps0(a)

    def lift0(self, s):
        """The monomial-basis section W_m(A) -> W_m(B) (component-wise)."""
        return self.source.s0.el([self.ext.section(c) for c in s.comps])

    def in_k0(self, s):
        return all(self.ext.in_kernel(c) for c in s.comps)

    def k0_elements(self):
        base = list(self.ext.j_elements())
        for combo in itertools.product(base, repeat=self.m):
            yield self.source.s0.el(list(combo))

    @property
    def k0_size(self):
        return self.ext.j_size ** self.m

    def sdotK(self, k):
        """The divided Frobenius on K0: shift of log coordinates."""
        assert self.in_k0(k)
        return self.source.s0.el(list(k.comps[1:]) + [self.ext.B.zero()])

    def check(self, samples=50, seed=0):
        """Frame-compatibility of eps and the kernel identities."""
        rng = random.Random(seed)
        failures = []
        src, tgt = self.source, self.target
        s0s = _sample(src.s0.elements(), rng, samples)
        ps = _sample(src.p_elements(), rng, samples)
        for s in s0s:
            if self.eps0(src.sigma0(s)) != tgt.sigma0(self.eps0(s)):
                failures.append(("sigma0", repr(s)))
        for x in ps:
            if self.eps0(src.t1(x)) != tgt.t1(self.epsP(x)):
                failures.append(("t1", repr(x)))
            if self.epsP(src.tP(x)) != tgt.tP(self.epsP(x)):
                failures.append(("tP", repr(x)))
            if self.eps0(src.sigmadot(x)) != tgt.sigmadot(self.epsP(x)):
                failures.append(("sigmadot", repr(x)))
        for x, y in zip(ps, reversed(ps)):
            if self.epsP(src.nu(x, y)) != tgt.nu(self.epsP(x), self.epsP(y)):
                failures.append(("nu", (repr(x), repr(y))))
        for s, x in zip(s0s, ps):
            if self.epsP(src.act(s, x)) != tgt.act(self.eps0(s), self.epsP(x)):
                failures.append(("act", (repr(s), repr(x))))
        # kernel identities, exhaustive (K0 is tiny)
        p_elem = src.p_int()
        for k in self.k0_elements():
            if src.sigma0(k) != p_elem * self.sdotK(k):
                failures.append(("p*sdot=sigma0|K0", repr(k)))
            it = k
            for _ in range(self.nilpotency_index):
                it = self.sdotK(it)
            if not it.is_zero():
                failures.append(("sdot-nilpotent", repr(k)))
        return {"passed": not failures, "failures": failures}


def build_thickening(ext, m):
    return Thickening(ext, m)


class HodgeThickening:
    """The inclusion alpha: W_m(B)-frame -> W_m(B/A)-frame over the same S0.

    alpha is the identity on S0 and a |-> (a, 0) on positive parts; the
    cokernel in each positive degree is J via (a, x) |-> x, which is the
    hypothesis making lifts along alpha classified by Hodge-filtration lifts.
    """

    def __init__(self, ext, m):
        self.ext = ext
        self.m = m
        self.s_prime = WittFrame(ext.B, m)
        self.s_rel = RelativeFrame(ext, m)

    def alpha0(self, s):
        return s

    def alphaP(self, a):
        return (a, self.ext.B.zero())

    def coker(self, x):
        return x[1]

    def check(self):
        """t^n: S_n -> S_0 induces an isomorphism S_n/S'_n ~= J, for n = 1, 2."""
        failures = []
        rel = self.s_rel
        for x in rel.p_elements():
            # degree 1: first Witt coordinate of t1 reads off the J-part
            if rel.t1(x).comps[0] != x[1]:
                failures.append(("t1-coker", repr(x)))
            # degree 2: same for t1 . tP
            if rel.t1(rel.tP(x)).comps[0] != x[1]:
                failures.append(("t2-coker", repr(x)))
            # alpha image has trivial J-part
            if not self.coker(self.alphaP(x[0])).is_zero():
                failures.append(("alpha-image", repr(x)))
        return {"passed": not failures, "failures": failures}


def build_hodge_thickening(ext, m):
    return HodgeThickening(ext, m)
