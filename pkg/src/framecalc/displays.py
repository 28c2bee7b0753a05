"""Displays over frames: graded matrices, the display group, and F-zips.

A display of type mu (weights, non-increasing) is an invertible matrix Phi
over S0; the display group acts on the right by Phi . A = tau(A)^-1 Phi
sigma(A) for a graded invertible matrix A.  The graded entry in slot (i, j)
lives in degree mu_j - mu_i: positive degrees carry a P-payload, degree <= -k
carries an S0-payload standing for s t^k.

Over the zip frame a display is the same thing as an F-zip, and `to_fzip` /
`from_fzip` realize the translation concretely; F-zip isomorphism via raw
filtered semilinear algebra is the independent cross-check for orbit counts.
"""

from __future__ import annotations

import itertools
import random

from . import linalg
from .rings import RingMismatch


# ---------------------------------------------------------------------------
# Graded elements
# ---------------------------------------------------------------------------

class GradedElem:
    """An element of S_d: payload in P for d >= 1, in S0 for d <= 0."""

    __slots__ = ("frame", "degree", "payload")

    def __init__(self, frame, degree, payload):
        self.frame = frame
        self.degree = degree
        self.payload = payload

    @classmethod
    def zero(cls, frame, degree):
        return cls(frame, degree,
                   frame.p_zero() if degree >= 1 else frame.s0.zero())

    @classmethod
    def unit(cls, frame):
        return cls(frame, 0, frame.s0.one())

    def __eq__(self, other):
        return (isinstance(other, GradedElem) and self.degree == other.degree
                and self.payload == other.payload)

    def __hash__(self):
        return hash((self.degree, self.payload))

    def __repr__(self):
        return f"<deg {self.degree}: {self.payload!r}>"

    def is_zero(self):
        if self.degree >= 1:
            return self.frame.p_is_zero(self.payload)
        return self.payload.is_zero()

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch in graded sum")
        if self.degree >= 1:
            return GradedElem(self.frame, self.degree,
                              self.frame.p_add(self.payload, other.payload))
        return GradedElem(self.frame, self.degree, self.payload + other.payload)

    def __neg__(self):
        if self.degree >= 1:
            return GradedElem(self.frame, self.degree, self.frame.p_neg(self.payload))
        return GradedElem(self.frame, self.degree, -self.payload)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        fr = self.frame
        d1, d2 = self.degree, other.degree
        e = d1 + d2
        if d1 >= 1 and d2 >= 1:
            return GradedElem(fr, e, fr.nu(self.payload, other.payload))
        if d1 <= 0 and d2 <= 0:
            return GradedElem(fr, e, self.payload * other.payload)
        if d1 >= 1:  # commute so the S0 factor is on the left
            return other * self
        s, x = self.payload, other.payload
        if e >= 1:
            out = fr.act(s, x)
            for _ in range(-d1):
                out = fr.tP(out)
            return GradedElem(fr, e, out)
        # the t's outweigh the positive part; land in S0 via t1
        y = x
        for _ in range(d2 - 1):
            y = fr.tP(y)
        return GradedElem(fr, e, s * fr.t1(y))

    def sigma(self):
        """The degree-preserving Frobenius, landing in S0."""
        fr = self.frame
        if self.degree >= 1:
            return fr.sigmadot(self.payload)
        out = fr.sigma0(self.payload)
        p_elem = fr.p_int()
        for _ in range(-self.degree):
            out = p_elem * out
        return out

    def tau(self):
        """Multiply by t until degree 0; the resulting S0 element."""
        fr = self.frame
        if self.degree <= 0:
            return self.payload
        y = self.payload
        for _ in range(self.degree - 1):
            y = fr.tP(y)
        return fr.t1(y)


# ---------------------------------------------------------------------------
# Graded matrices and the display group
# ---------------------------------------------------------------------------

class GradedMatrix:
    """Matrix with entry (i, j) of degree mu_col[j] - mu_row[i]."""

    def __init__(self, frame, mu_row, mu_col, entries):
        self.frame = frame
        self.mu_row = tuple(mu_row)
        self.mu_col = tuple(mu_col)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                if e.degree != self.mu_col[j] - self.mu_row[i]:
                    raise ValueError("entry degree does not match weights")
        self.entries = [list(row) for row in entries]

    @classmethod
    def identity(cls, frame, mu):
        n = len(mu)
        entries = [[GradedElem.unit(frame) if i == j
                    else GradedElem.zero(frame, mu[j] - mu[i])
                    for j in range(n)] for i in range(n)]
        return cls(frame, mu, mu, entries)

    @classmethod
    def from_payloads(cls, frame, mu, grid):
        n = len(mu)
        entries = [[GradedElem(frame, mu[j] - mu[i], grid[i][j])
                    for j in range(n)] for i in range(n)]
        return cls(frame, mu, mu, entries)

    def payload_grid(self):
        return [[e.payload for e in row] for row in self.entries]

    def __eq__(self, other):
        return (isinstance(other, GradedMatrix)
                and self.mu_row == other.mu_row and self.mu_col == other.mu_col
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.mu_row, self.mu_col,
                     tuple(tuple(row) for row in self.entries)))

    def __repr__(self):
        return f"<graded {len(self.entries)}x{len(self.mu_col)} matrix>"

    def __mul__(self, other):
        if self.mu_col != other.mu_row:
            raise ValueError("weight mismatch in graded product")
        rows, inner, cols = len(self.entries), len(other.entries), len(other.mu_col)
        out = []
        for i in range(rows):
            row = []
            for j in range(cols):
                acc = GradedElem.zero(self.frame, other.mu_col[j] - self.mu_row[i])
                for k in range(inner):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return GradedMatrix(self.frame, self.mu_row, other.mu_col, out)

    def __add__(self, other):
        return GradedMatrix(self.frame, self.mu_row, self.mu_col,
                            [[a + b for a, b in zip(ra, rb)]
                             for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return GradedMatrix(self.frame, self.mu_row, self.mu_col,
                            [[a - b for a, b in zip(ra, rb)]
                             for ra, rb in zip(self.entries, other.entries)])

    def transpose(self):
        n, m = len(self.entries), len(self.mu_col)
        return GradedMatrix(self.frame,
                            tuple(-w for w in self.mu_col),
                            tuple(-w for w in self.mu_row),
                            [[self.entries[i][j] for i in range(n)]
                             for j in range(m)])

    def sigma(self):
        return [[e.sigma() for e in row] for row in self.entries]

    def tau(self):
        return [[e.tau() for e in row] for row in self.entries]


def in_display_group(A):
    """Graded invertibility: tau(A) is invertible over the local ring S0."""
    return linalg.is_invertible(A.frame.s0, A.tau())


def group_elements(frame, mu, cap=10 ** 7):
    """All elements of the display group G(mu) over a small frame."""
    n = len(mu)
    slots = []
    for i in range(n):
        for j in range(n):
            d = mu[j] - mu[i]
            if d >= 1:
                slots.append(list(frame.p_elements(cap)))
            else:
                slots.append(list(frame.s0.elements(cap)))
    total = 1
    for s in slots:
        total *= len(s)
        if total > cap:
            raise ValueError("display group too large to enumerate")
    for combo in itertools.product(*slots):
        grid = [[combo[i * n + j] for j in range(n)] for i in range(n)]
        A = GradedMatrix.from_payloads(frame, mu, grid)
        if in_display_group(A):
            yield A


# ---------------------------------------------------------------------------
# Displays
# ---------------------------------------------------------------------------

class Display:
    """A pair (mu, Phi) with mu non-increasing and Phi invertible over S0."""

    def __init__(self, frame, mu, phi, check=True):
        mu = tuple(mu)
        if list(mu) != sorted(mu, reverse=True):
            raise ValueError("weights must be non-increasing")
        self.frame = frame
        self.mu = mu
        self.phi = [list(row) for row in phi]
        if check and not linalg.is_invertible(frame.s0, self.phi):
            raise ValueError("structure matrix is not invertible")

    @property
    def n(self):
        return len(self.mu)

    def __eq__(self, other):
        return (isinstance(other, Display) and self.frame == other.frame
                and self.mu == other.mu and linalg.mat_eq(self.phi, other.phi))

    def __hash__(self):
        return hash((self.mu, tuple(tuple(row) for row in self.phi)))

    def __repr__(self):
        return f"<display mu={self.mu} over {self.frame.kind}>"

    def act(self, A):
        """Right action Phi . A = tau(A)^-1 Phi sigma(A)."""
        if A.mu_row != self.mu or A.mu_col != self.mu:
            raise ValueError("group element has the wrong type")
        s0 = self.frame.s0
        tau_inv = linalg.mat_inverse(s0, A.tau())
        return Display(self.frame, self.mu,
                       linalg.mat_mul(s0, linalg.mat_mul(s0, tau_inv, self.phi),
                                      A.sigma()), check=False)

    def hodge_filtration(self):
        """E_k = span of the standard vectors with weight >= k, as index lists."""
        ks = range(min(self.mu), max(self.mu) + 2)
        return {k: [i for i, w in enumerate(self.mu) if w >= k] for k in ks}


def tensor(d1, d2):
    """Tensor product display; weights sorted non-increasing, stable in (i, j)."""
    if d1.frame != d2.frame:
        raise RingMismatch("displays over different frames")
    s0 = d1.frame.s0
    pairs = sorted(itertools.product(range(d1.n), range(d2.n)),
                   key=lambda ij: -(d1.mu[ij[0]] + d2.mu[ij[1]]))
    mu = tuple(d1.mu[i] + d2.mu[j] for i, j in pairs)
    phi = [[d1.phi[i][k] * d2.phi[j][l] for (k, l) in pairs]
           for (i, j) in pairs]
    return Display(d1.frame, mu, phi, check=False)


def dual(d):
    """Weights negated and reversed; Phi replaced by its inverse transpose."""
    inv = linalg.mat_inverse(d.frame.s0, d.phi)
    n = d.n
    mu = tuple(-d.mu[n - 1 - i] for i in range(n))
    phi = [[inv[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)]
    return Display(d.frame, mu, phi, check=False)


def twist(d, k):
    """Tensor with the weight-k unit display: shift every weight by k."""
    return Display(d.frame, tuple(w + k for w in d.mu), d.phi, check=False)


def unit_display(frame, n=1, weight=0):
    return Display(frame, (weight,) * n, linalg.identity(frame.s0, n))


# ---------------------------------------------------------------------------
# F-zips (displays over the zip frame, in filtration form)
# ---------------------------------------------------------------------------

class FZip:
    """Descending C, ascending D, and semilinear gr-isomorphisms.

    `alpha[i]` is a list of (representative, image) pairs: the classes of the
    representatives span gr_C^i and the image classes span gr_D_i.
    """

    def __init__(self, ring, n, C, D, alpha):
        self.ring = ring
        self.n = n
        self.C = {i: [list(v) for v in cols] for i, cols in C.items()}
        self.D = {i: [list(v) for v in cols] for i, cols in D.items()}
        self.alpha = {i: [(list(r), list(v)) for r, v in pairs]
                      for i, pairs in alpha.items()}

    @property
    def weights(self):
        out = []
        for i, pairs in sorted(self.alpha.items(), reverse=True):
            out.extend([i] * len(pairs))
        return tuple(out)

    def __repr__(self):
        return f"<F-zip of rank {self.n}, weights {self.weights}>"


def to_fzip(d):
    """Display over the zip frame -> F-zip with standard C and Phi-column D."""
    if d.frame.kind != "zip":
        raise ValueError("to_fzip expects a display over a zip frame")
    R = d.frame.ring
    n = d.n
    lo, hi = min(d.mu), max(d.mu)
    unit = [[R.one() if i == j else R.zero() for i in range(n)] for j in range(n)]
    cols = [[d.phi[r][j] for r in range(n)] for j in range(n)]
    C = {i: [unit[j] for j in range(n) if d.mu[j] >= i] for i in range(lo, hi + 2)}
    D = {i: [cols[j] for j in range(n) if d.mu[j] <= i] for i in range(lo - 1, hi + 1)}
    alpha = {i: [(unit[j], cols[j]) for j in range(n) if d.mu[j] == i]
             for i in range(lo, hi + 1) if i in d.mu}
    return FZip(R, n, C, D, alpha)


def from_fzip(z, frame):
    """Reassemble a display from an F-zip; inverse to `to_fzip` on the nose
    when the representatives are the standard vectors and Phi-columns."""
    R = frame.ring
    n = z.n
    mu = z.weights
    reps, images = [], []
    for i in sorted(z.alpha, reverse=True):
        for r, v in z.alpha[i]:
            reps.append(r)
            images.append(v)
    T = [[reps[j][i] for j in range(n)] for i in range(n)]
    M = [[images[j][i] for j in range(n)] for i in range(n)]
    T_inv = linalg.mat_inverse(R, T)
    return Display(frame, mu, linalg.mat_mul(R, T_inv, M), check=False)


# ---------------------------------------------------------------------------
# Isomorphism and orbit classification over zip frames
# ---------------------------------------------------------------------------

def all_displays(frame, n, mu, cap=10 ** 7):
    """Every display of the given type over a small frame (invertible Phi)."""
    base = list(frame.s0.elements(cap))
    total = len(base) ** (n * n)
    if total > cap:
        raise ValueError("display space too large to enumerate")
    for combo in itertools.product(base, repeat=n * n):
        phi = [[combo[i * n + j] for j in range(n)] for i in range(n)]
        if linalg.is_invertible(frame.s0, phi):
            yield Display(frame, mu, phi, check=False)


def classify_orbits(frame, mu, cap=10 ** 7):
    """Orbits of the display-group action; returns a list of orbits (sets)."""
    n = len(mu)
    group = list(group_elements(frame, mu, cap))
    seen = set()
    orbits = []
    for d in all_displays(frame, n, mu, cap):
        if d in seen:
            continue
        orbit = set()
        frontier = [d]
        while frontier:
            cur = frontier.pop()
            if cur in orbit:
                continue
            orbit.add(cur)
            for g in group:
                nxt = cur.act(g)
                if nxt not in orbit:
                    frontier.append(nxt)
        orbits.append(orbit)
        seen |= orbit
    return orbits


def is_isomorphic_bruteforce(d1, d2, cap=10 ** 7):
    """Search the whole display group for an element carrying d1 to d2."""
    if d1.frame != d2.frame or d1.mu != d2.mu:
        return False
    for g in group_elements(d1.frame, d1.mu, cap):
        if d1.act(g) == d2:
            return True
    return False


def _frobenius_vec(ring, v, p):
    return [c ** p for c in v]


def fzip_isomorphic(z1, z2, cap=10 ** 7):
    """F-zip isomorphism by raw filtered semilinear algebra.

    Enumerates invertible g over R preserving both filtrations and commuting
    with the graded semilinear maps; independent of the display-group action.
    """
    if z1.weights != z2.weights or z1.ring != z2.ring:
        return False
    R = z1.ring
    n = z1.n
    p = R.p
    base = list(R.elements(cap))
    for combo in itertools.product(base, repeat=n * n):
        g = [[combo[i * n + j] for j in range(n)] for i in range(n)]
        if not linalg.is_invertible(R, g):
            continue
        ok = True
        for i, cols in z1.C.items():
            target = z2.C[i]
            for c in cols:
                gc = [sum((g[r][k] * c[k] for k in range(n)), R.zero())
                      for r in range(n)]
                if not (linalg.span_contains(R, target, gc) if target
                        else all(v.is_zero() for v in gc)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for i, cols in z1.D.items():
                target = z2.D[i]
                for c in cols:
                    gc = [sum((g[r][k] * c[k] for k in range(n)), R.zero())
                          for r in range(n)]
                    if not (linalg.span_contains(R, target, gc) if target
                            else all(v.is_zero() for v in gc)):
                        ok = False
                        break
                if not ok:
                    break
        if not ok:
            continue
        # semilinear compatibility on each graded piece:
        # alpha2(gr g^(p) (r)) == gr g (alpha1(r))  modulo D_{i-1} + C^{i+1}
        for i, pairs in z1.alpha.items():
            below_D = z2.D.get(i - 1, [])
            above_C = z2.C.get(i + 1, [])
            for r, v in pairs:
                gr = [sum((g[a][k] * r[k] for k in range(n)), R.zero())
                      for a in range(n)]
                gr_frob = _frobenius_vec(R, gr, p)
                # express the Frobenius-twisted image through alpha2: the class
                # of gr mod C^{i+1} determines it, so solve in representatives
                img2 = _alpha_apply(z2, i, gr_frob, above_C)
                if img2 is None:
                    ok = False
                    break
                gv = [sum((g[a][k] * v[k] for k in range(n)), R.zero())
                      for a in range(n)]
                diff = [x - y for x, y in zip(img2, gv)]
                if below_D:
                    if not linalg.span_contains(R, below_D, diff):
                        ok = False
                        break
                elif not all(x.is_zero() for x in diff):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def _alpha_apply(z, i, w_frob, above_C):
    """Image under alpha_i of the class of w (already Frobenius-twisted).

    Writes w^(p) as a combination of rep^(p) classes mod (C^{i+1})^(p) using
    residue-field linear algebra, then takes that combination of images.
    """
    R = z.ring
    n = z.n
    p = R.p
    pairs = z.alpha[i]
    cols = [_frobenius_vec(R, r, p) for r, _ in pairs]
    cols = cols + [_frobenius_vec(R, c, p) for c in above_C]
    M = [[cols[cj][r] for cj in range(len(cols))] for r in range(n)]
    coeffs = _gauss_local(R, M, list(w_frob))
    if coeffs is None:
        return None
    out = [R.zero()] * n
    for c, (_, img) in zip(coeffs[: len(pairs)], pairs):
        out = [o + c * v for o, v in zip(out, img)]
    return out


def _gauss_local(ring, M, rhs):
    """One exact solution of M x = rhs over a local ring via unit pivots."""
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if aug[r][col].is_unit():
                pivot = r
                break
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = aug[rank][col].invert()
        aug[rank] = [inv * v for v in aug[rank]]
        for r in range(nrows):
            if r != rank and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if not aug[r][ncols].is_zero():
            return None
    x = [ring.zero()] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    # exact verification (unit-pivot elimination can miss non-unit obstructions)
    for i in range(nrows):
        acc = ring.zero()
        for j in range(ncols):
            acc = acc + M[i][j] * x[j]
        if acc != rhs[i]:
            return None
    return x


def classify_fzips(frame, mu, cap=10 ** 7):
    """Independent orbit count: partition F-zips by raw isomorphism."""
    classes = []
    for d in all_displays(frame, len(mu), mu, cap):
        z = to_fzip(d)
        for rep in classes:
            if fzip_isomorphic(rep, z, cap):
                break
        else:
            classes.append(z)
    return classes
