"""Truncated Witt vectors W_m(R) over monomial-quotient rings.

W_m stores components with indices 0..m-1.  Verschiebung raises the length,
Frobenius lowers it; the fixed-length Frobenius lift used by frames is the
component-wise p-power map (the universal correction terms vanish in
characteristic p, which the tests check against the ghost-derived
polynomials).
"""

from __future__ import annotations

import itertools

from . import wittpoly
from .rings import NotAUnit, RingMismatch


class WittRing:
    """Arithmetic context for W_m(R): caches the universal polynomials mod p.

    Instances are interned on (ring, m) so the polynomial caches and the
    small-ring operation tables are shared by every construction site.
    """

    _instances = {}

    def __new__(cls, ring, m):
        inst = cls._instances.get((ring, m))
        if inst is None:
            inst = super().__new__(cls)
            cls._instances[(ring, m)] = inst
        return inst

    def __init__(self, ring, m):
        if getattr(self, "_ready", False):
            return
        if m < 1:
            raise ValueError("length must be >= 1")
        self.ring = ring
        self.m = m
        self.p = ring.p
        self.size = ring.size ** m
        self._sum = [wittpoly.eval_terms(self.p, "sum", n) for n in range(m)]
        self._prod = [wittpoly.eval_terms(self.p, "prod", n) for n in range(m)]
        self._neg = [wittpoly.eval_terms(self.p, "neg", n) for n in range(m)]
        self._frob = [wittpoly.eval_terms(self.p, "frob", n) for n in range(max(m - 1, 0))]
        # memoize binary operations when the ring is small enough that the
        # operation tables fit comfortably (enumeration-heavy workloads)
        self._memo = {} if self.size <= 4096 else None
        self._ready = True

    def __eq__(self, other):
        return (isinstance(other, WittRing) and self.ring == other.ring
                and self.m == other.m)

    def __hash__(self):
        return hash((self.ring, self.m))

    def __repr__(self):
        return f"W_{self.m}({self.ring!r})"

    # -- construction ---------------------------------------------------------

    def el(self, comps):
        comps = tuple(self.ring.el(c) for c in comps)
        if len(comps) != self.m:
            raise ValueError(f"expected {self.m} components")
        return WittVector(self, comps)

    def zero(self):
        return self.el([0] * self.m)

    def one(self):
        return self.el([1] + [0] * (self.m - 1))

    def from_int(self, n):
        # the additive order of 1 divides p^m since R is an F_p-algebra
        result = self.zero()
        one = self.one()
        for _ in range(n % (self.p ** self.m)):
            result = result + one
        return result

    def teichmuller(self, a):
        return self.el([a] + [0] * (self.m - 1))

    def elements(self, cap=10 ** 7):
        if self.size > cap:
            raise ValueError(f"|W_m(R)| = {self.size} exceeds cap {cap}")
        base = list(self.ring.elements(cap))
        for combo in itertools.product(base, repeat=self.m):
            yield WittVector(self, combo)

    # -- residue interface (W_m(R) is local with the same residue field) -------

    @property
    def residue_field(self):
        return self.ring.residue_field

    def to_residue(self, x):
        return self.ring.to_residue(x.comps[0])

    def lift_residue(self, c):
        return self.el([self.ring.lift_residue(c)] + [0] * (self.m - 1))

    # -- core arithmetic -------------------------------------------------------

    def add(self, x, y):
        if self._memo is not None:
            key = ("+",) + tuple(c.key() for c in x.comps + y.comps)
            hit = self._memo.get(key)
            if hit is not None:
                return hit
        comps = []
        for n in range(self.m):
            sub = x.comps[: n + 1] + y.comps[: n + 1]
            comps.append(wittpoly.eval_poly(self._sum[n], sub, self.ring))
        out = WittVector(self, tuple(comps))
        if self._memo is not None:
            self._memo[key] = out
        return out

    def mul(self, x, y):
        if self._memo is not None:
            key = ("*",) + tuple(c.key() for c in x.comps + y.comps)
            hit = self._memo.get(key)
            if hit is not None:
                return hit
        comps = []
        for n in range(self.m):
            sub = x.comps[: n + 1] + y.comps[: n + 1]
            comps.append(wittpoly.eval_poly(self._prod[n], sub, self.ring))
        out = WittVector(self, tuple(comps))
        if self._memo is not None:
            self._memo[key] = out
        return out

    def neg(self, x):
        comps = []
        for n in range(self.m):
            comps.append(wittpoly.eval_poly(self._neg[n], x.comps[: n + 1], self.ring))
        return WittVector(self, tuple(comps))


class WittVector:
    """Element of W_m(R)."""

    __slots__ = ("wring", "comps")

    def __init__(self, wring, comps):
        self.wring = wring
        self.comps = comps

    def __eq__(self, other):
        return (isinstance(other, WittVector) and self.wring == other.wring
                and self.comps == other.comps)

    def __hash__(self):
        return hash(tuple(c.key() for c in self.comps))

    def __repr__(self):
        return "(" + ", ".join(repr(c) for c in self.comps) + ")"

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def _check(self, other):
        if self.wring != other.wring:
            raise RingMismatch("Witt ring mismatch")

    def __add__(self, other):
        self._check(other)
        return self.wring.add(self, other)

    def __sub__(self, other):
        self._check(other)
        return self.wring.add(self, self.wring.neg(other))

    def __neg__(self):
        return self.wring.neg(self)

    def __mul__(self, other):
        self._check(other)
        return self.wring.mul(self, other)

    def __pow__(self, n):
        result = self.wring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- units ----------------------------------------------------------------

    def is_unit(self):
        return not self.wring.to_residue(self).is_zero()

    def invert(self):
        if not self.is_unit():
            raise NotAUnit(f"{self!r} is not a unit")
        wr = self.wring
        u0 = wr.lift_residue(wr.to_residue(self).inverse())
        err = wr.one() - self * u0
        total = wr.one()
        term = wr.one()
        bound = wr.m * (len(wr.ring.basis) + 1)
        for _ in range(bound):
            if err.is_zero():
                break
            term = term * err
            if term.is_zero():
                break
            total = total + term
        inv = u0 * total
        assert self * inv == wr.one()
        return inv


# ---------------------------------------------------------------------------
# Structure operations
# ---------------------------------------------------------------------------

class TruncationUnderflow(ValueError):
    pass


class NotInIdeal(ValueError):
    pass


def verschiebung(x):
    """(x_0,...,x_{m-1}) -> (0, x_0,...,x_{m-1}) in W_{m+1}(R)."""
    wr = WittRing(x.wring.ring, x.wring.m + 1)
    return wr.el((x.wring.ring.zero(),) + x.comps)


def verschiebung_trunc(x):
    """Verschiebung followed by truncation back to W_m: (0, x_0,...,x_{m-2})."""
    return x.wring.el((x.wring.ring.zero(),) + x.comps[:-1])


def witt_frobenius(x):
    """The ghost-shift Frobenius W_m -> W_{m-1}, from the universal polynomials."""
    wr = x.wring
    if wr.m < 2:
        raise TruncationUnderflow("Frobenius needs length >= 2")
    target = WittRing(wr.ring, wr.m - 1)
    comps = []
    for n in range(wr.m - 1):
        comps.append(wittpoly.eval_poly(wr._frob[n], x.comps[: n + 2], wr.ring))
    return target.el(comps)


def frobenius_fixed(x):
    """The fixed-length Frobenius lift: component-wise p-power (char p)."""
    p = x.wring.p
    return x.wring.el([c ** p for c in x.comps])


def teichmuller(a, m):
    return WittRing(a.ring, m).teichmuller(a)


def divided_frobenius(x):
    """sigma-dot on the image of v: (0, a_0,...,a_{m-2}) -> (a_0,...,a_{m-2})."""
    if not x.comps[0].is_zero():
        raise NotInIdeal("first component must vanish")
    if x.wring.m < 2:
        raise TruncationUnderflow("divided Frobenius needs length >= 2")
    target = WittRing(x.wring.ring, x.wring.m - 1)
    return target.el(x.comps[1:])


def truncate(x, m):
    if m > x.wring.m:
        raise ValueError("cannot truncate upward")
    return WittRing(x.wring.ring, m).el(x.comps[:m])


# ---------------------------------------------------------------------------
# Log coordinates on W_m(J) for a square-zero kernel J
# ---------------------------------------------------------------------------

class LogCoords:
    """An element of W_m(J), J^2 = 0, in logarithmic coordinates.

    With J^2 = 0 every addition cross-term vanishes and the divided ghost
    components are the coordinates themselves, so log is the identity on
    coordinates; addition is component-wise and sigma-dot is the shift.
    """

    __slots__ = ("ext", "m", "comps")

    def __init__(self, ext, m, comps):
        comps = tuple(comps)
        if len(comps) != m:
            raise ValueError("length mismatch")
        for c in comps:
            if not ext.in_kernel(c):
                raise ValueError("component not in J")
        self.ext = ext
        self.m = m
        self.comps = comps

    def __eq__(self, other):
        return (isinstance(other, LogCoords) and self.ext is other.ext
                and self.comps == other.comps)

    def __hash__(self):
        return hash(tuple(c.key() for c in self.comps))

    def __add__(self, other):
        return LogCoords(self.ext, self.m,
                         [a + b for a, b in zip(self.comps, other.comps)])

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def embed(self):
        """The corresponding Witt vector in W_m(B) (component-wise inclusion)."""
        return WittRing(self.ext.B, self.m).el(self.comps)


def log_shift(x):
    """(j_0,...,j_{m-1}) -> (j_1,...,j_{m-1},0); nilpotent of order <= m."""
    zero = x.ext.B.zero()
    return LogCoords(x.ext, x.m, x.comps[1:] + (zero,))


def log_from_witt(ext, x):
    """Read off log coordinates from a J-supported Witt vector over B."""
    return LogCoords(ext, x.wring.m, x.comps)


def log_elements(ext, m):
    """All of W_m(J) in deterministic order."""
    import itertools as _it
    base = list(ext.j_elements())
    for combo in _it.product(base, repeat=m):
        yield LogCoords(ext, m, combo)
