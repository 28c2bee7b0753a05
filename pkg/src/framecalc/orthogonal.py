"""Split orthogonal structure on displays: graded Gram forms and O(psi).

The standard split form is the antidiagonal J; a weight type is self-dual
when mu_i + mu_{n-1-i} = 0.  The Gram form of a graded matrix has entry
(i, j) in degree mu_i + mu_j, and a group element is orthogonal when its
Gram form equals J.  Both tau and sigma turn the graded condition into the
plain matrix condition M^t J M = J over S0.

Also here: the big-cell decomposition g = q u (parabolic times unipotent),
graded inversion through it, minuscule exponentials for the positive
unipotent part, and perturbative Gram normalization.
"""

from __future__ import annotations

import itertools

from . import linalg
from .displays import Display, GradedElem, GradedMatrix, in_display_group


def standard_J(ring, n):
    return [[ring.one() if i + j == n - 1 else ring.zero() for j in range(n)]
            for i in range(n)]


def is_self_dual_type(mu):
    n = len(mu)
    return all(mu[i] + mu[n - 1 - i] == 0 for i in range(n))


def standard_gram(frame, mu):
    """The graded matrix of the split form J for a self-dual type."""
    n = len(mu)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            d = mu[i] + mu[j]
            if j == n - 1 - i:
                row.append(GradedElem(frame, 0, frame.s0.one()))
            else:
                row.append(GradedElem.zero(frame, d))
        entries.append(row)
    return GradedMatrix(frame, tuple(-w for w in mu), tuple(mu), entries)


def form_transform(B, A):
    """A^t B A: the Gram form in the basis given by the columns of A."""
    return A.transpose() * B * A


def gram(A):
    return form_transform(standard_gram(A.frame, A.mu_col), A)


def in_orth_group(A):
    return in_display_group(A) and gram(A) == standard_gram(A.frame, A.mu_col)


def is_orth_matrix(ring, M):
    """Plain condition M^t J M = J over a ring."""
    J = standard_J(ring, len(M))
    lhs = linalg.mat_mul(ring, linalg.transpose(M), linalg.mat_mul(ring, J, M))
    return linalg.mat_eq(lhs, J)


class OrthDisplay(Display):
    """A display whose structure matrix preserves the split form."""

    def __init__(self, frame, mu, phi, check=True):
        if not is_self_dual_type(mu):
            raise ValueError("weight type is not self-dual")
        super().__init__(frame, mu, phi, check=check)
        if check and not verify_orth(self):
            raise ValueError("structure matrix does not preserve the form")

    def act(self, A):
        d = super().act(A)
        return OrthDisplay(self.frame, d.mu, d.phi, check=False)


def verify_orth(d):
    return (is_self_dual_type(d.mu)
            and is_orth_matrix(d.frame.s0, d.phi)
            and linalg.is_invertible(d.frame.s0, d.phi))


# ---------------------------------------------------------------------------
# Big-cell decomposition g = q u
# ---------------------------------------------------------------------------

def _blocks(mu):
    """Index blocks of equal weight, in order (weights are non-increasing)."""
    blocks = []
    for i, w in enumerate(mu):
        if blocks and mu[blocks[-1][0]] == w:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def unipotent_inverse(U):
    """Inverse of I + N with N supported strictly below the block diagonal."""
    frame = U.frame
    I = GradedMatrix.identity(frame, U.mu_col)
    N = U - I
    inv = I
    term = I
    for _ in range(len(U.mu_col)):
        term = term * N
        if all(e.is_zero() for row in term.entries for e in row):
            break
        inv = inv - term if _ % 2 == 0 else inv + term
    assert all(e.is_zero() for row in ((inv * U) - I).entries for e in row)
    return inv


def decompose(g):
    """Factor g = q u with u unipotent of positive degrees and q of degrees <= 0.

    Works block-row by block-row from the lowest weight upward; exists exactly
    when g is in the display group (the degree-0 diagonal blocks are
    invertible), and the factorization is unique.
    """
    frame = g.frame
    mu = g.mu_col
    s0 = frame.s0
    blocks = _blocks(mu)
    work = GradedMatrix(frame, mu, mu, g.entries)
    u_inv_total = GradedMatrix.identity(frame, mu)
    for b in range(len(blocks) - 1, 0, -1):
        rows = blocks[b]
        left = [j for blk in blocks[:b] for j in blk]
        # diagonal block is degree 0: invert its payload matrix over S0
        D = [[work.entries[i][j].payload for j in rows] for i in rows]
        D_inv = linalg.mat_inverse(s0, D)
        # X = D^-1 * (block-row entries left of the diagonal), positive degrees
        step_inv = GradedMatrix.identity(frame, mu)  # will hold I - X
        changed = False
        for bi, i in enumerate(rows):
            for j in left:
                acc = GradedElem.zero(frame, mu[j] - mu[i])
                for bk, k in enumerate(rows):
                    scal = GradedElem(frame, 0, D_inv[bi][bk])
                    acc = acc + scal * work.entries[k][j]
                if not acc.is_zero():
                    changed = True
                step_inv.entries[i][j] = -acc
        if not changed:
            continue
        # right-multiply by (I - X): clears this block-row's left entries
        work = work * step_inv
        u_inv_total = u_inv_total * step_inv
    u = unipotent_inverse(u_inv_total)
    q = work
    # sanity: q has no positive-degree entries, and q * u recomposes g
    for i in range(len(mu)):
        for j in range(len(mu)):
            if mu[j] - mu[i] >= 1 and not q.entries[i][j].is_zero():
                raise AssertionError("decomposition left a positive entry")
    assert (q * u) == g
    return q, u


def graded_inverse(g):
    """Inverse in the display group via the big-cell decomposition."""
    frame = g.frame
    mu = g.mu_col
    s0 = frame.s0
    q, u = decompose(g)
    u_inv = unipotent_inverse(u)
    # q = D + N with D the block-diagonal (degree-0) part, N above the blocks
    blocks = _blocks(mu)
    I = GradedMatrix.identity(frame, mu)
    D = GradedMatrix.identity(frame, mu)
    for blk in blocks:
        for i in blk:
            for j in blk:
                D.entries[i][j] = q.entries[i][j]
    D_inv = GradedMatrix.identity(frame, mu)
    for blk in blocks:
        sub = [[q.entries[i][j].payload for j in blk] for i in blk]
        sub_inv = linalg.mat_inverse(s0, sub)
        for bi, i in enumerate(blk):
            for bj, j in enumerate(blk):
                D_inv.entries[i][j] = GradedElem(frame, 0, sub_inv[bi][bj])
    M = D_inv * q  # unipotent, strictly above the block diagonal
    N = M - I
    M_inv = I
    term = I
    sign = -1
    for _ in range(len(blocks)):
        term = term * N
        if all(e.is_zero() for row in term.entries for e in row):
            break
        M_inv = M_inv + term if sign > 0 else M_inv - term
        sign = -sign
    q_inv = M_inv * D_inv
    out = u_inv * q_inv
    assert (g * out) == I
    return out


# ---------------------------------------------------------------------------
# Minuscule unipotents
# ---------------------------------------------------------------------------

def _int_scalar(frame, k):
    """k as a degree-0 graded scalar (integers are Frobenius-fixed)."""
    return GradedElem(frame, 0, frame.s0.from_int(k))


def _half(frame):
    pm = frame.p
    # 1/2 modulo the additive order of 1 (a power of p, p odd)
    order = pm
    while not (frame.s0.from_int(order)).is_zero():
        order *= pm
    return _int_scalar(frame, (order + 1) // 2)


def exp_plus_gl(frame, mu, grid):
    """I + N for N with the given positive-degree payloads (zeros elsewhere)."""
    n = len(mu)
    A = GradedMatrix.identity(frame, mu)
    for (i, j), x in grid.items():
        if mu[j] - mu[i] < 1:
            raise ValueError("slot is not of positive degree")
        A.entries[i][j] = GradedElem(frame, mu[j] - mu[i], x)
    return A


def log_plus_gl(A):
    """Payloads of the strictly positive part of a unipotent element."""
    mu = A.mu_col
    return {(i, j): A.entries[i][j].payload
            for i in range(len(mu)) for j in range(len(mu))
            if mu[j] - mu[i] >= 1 and not A.entries[i][j].is_zero()}

def exp_plus_orth(frame, mu, xs):
    """The orthogonal unipotent with column-0 entries xs (middle rows).

    The last row is forced to -xs reversed and the corner entry of degree 2
    is -1/2 times sum x_k x_{n-1-k}; the result lies in O by construction.
    """
    n = len(mu)
    if len(xs) != n - 2:
        raise ValueError("expected one payload per middle row")
    A = GradedMatrix.identity(frame, mu)
    for idx, x in enumerate(xs):
        i = idx + 1
        A.entries[i][0] = GradedElem(frame, mu[0] - mu[i], x)
        A.entries[n - 1][n - 1 - i] = -GradedElem(frame, mu[n - 1 - i] - mu[n - 1], x)
    corner = GradedElem.zero(frame, mu[0] - mu[n - 1])
    for idx in range(n - 2):
        corner = corner + (GradedElem(frame, mu[0] - mu[idx + 1], xs[idx])
                           * GradedElem(frame, mu[0] - mu[n - 2 - idx], xs[n - 3 - idx]))
    A.entries[n - 1][0] = -(_half(frame) * corner)
    return A


def log_plus_orth(A):
    """Read back the free parameters (the middle column-0 payloads)."""
    n = len(A.mu_col)
    return [A.entries[i][0].payload for i in range(1, n - 1)]


def exp_minus_orth(frame, mu, xs):
    """The transposed-type unipotent: row 0 / last column, degrees <= -1."""
    n = len(mu)
    A = GradedMatrix.identity(frame, mu)
    for idx, x in enumerate(xs):
        j = idx + 1
        A.entries[0][j] = GradedElem(frame, mu[j] - mu[0], x)
        A.entries[n - 1 - j][n - 1] = -GradedElem(frame, mu[n - 1] - mu[n - 1 - j], x)
    corner = GradedElem.zero(frame, mu[n - 1] - mu[0])
    for idx in range(n - 2):
        corner = corner + (GradedElem(frame, mu[idx + 1] - mu[0], xs[idx])
                           * GradedElem(frame, mu[n - 2 - idx] - mu[0], xs[n - 3 - idx]))
    A.entries[0][n - 1] = -(_half(frame) * corner)
    return A


# ---------------------------------------------------------------------------
# Small orthogonal groups, exactly
# ---------------------------------------------------------------------------

def o2_elements(ring):
    """O of the split binary form over a finite local ring with 2 a unit:
    diag(a, a^-1) and antidiag(b, b^-1)."""
    for a in ring.elements():
        if not a.is_unit():
            continue
        inv = a.invert()
        yield [[a, ring.zero()], [ring.zero(), inv]]
        yield [[ring.zero(), a], [inv, ring.zero()]]


def levi_elements(frame, mu):
    """Degree-0 block-diagonal orthogonal elements for mu = (1, 0, 0, -1)."""
    s0 = frame.s0
    units = [u for u in s0.elements() if u.is_unit()]
    for a in units:
        a_inv = a.invert()
        for H in o2_elements(s0):
            grid = [[s0.zero()] * 4 for _ in range(4)]
            grid[0][0] = a
            grid[3][3] = a_inv
            for i in range(2):
                for j in range(2):
                    grid[1 + i][1 + j] = H[i][j]
            yield GradedMatrix.from_payloads(frame, mu, grid)


def orth_group_elements(frame, mu):
    """All of the orthogonal display group for mu = (1, 0, 0, -1).

    Enumerated through the (unique) factorization l u- u+; uniqueness is
    asserted by deduplication.
    """
    if tuple(mu) != (1, 0, 0, -1):
        raise ValueError("enumeration implemented for the K3 type only")
    p_all = list(frame.p_elements())
    s_all = list(frame.s0.elements())
    seen = set()
    for l in levi_elements(frame, mu):
        for xm in itertools.product(s_all, repeat=2):
            um = exp_minus_orth(frame, mu, list(xm))
            lum = l * um
            for xp in itertools.product(p_all, repeat=2):
                up = exp_plus_orth(frame, mu, list(xp))
                g = lum * up
                key = hash(g)
                if key in seen:
                    raise AssertionError("factorization is not unique")
                seen.add(key)
                yield g


# ---------------------------------------------------------------------------
# Gram normalization
# ---------------------------------------------------------------------------

class GramNotSplit(ValueError):
    pass


def _form_value(B, x, y):
    """B(x, y) for graded columns x, y (lists of graded entries)."""
    frame = B.frame
    n = len(x)
    acc = None
    for i in range(n):
        for j in range(n):
            term = x[i] * B.entries[i][j] * y[j]
            acc = term if acc is None else acc + term
    return acc


def normalize_gram(B, max_iter=64):
    """A basis change A with A^t B A = J, for B a perturbation of J.

    Hyperbolic pairs are extracted from the outside in (isotropic vectors by
    nilpotent fixed-point iteration, using that 2 is a unit), the middle
    weight-0 block is centered by a Newton step; everything is verified
    exactly at the end.
    """
    frame = B.frame
    mu = B.mu_col
    n = len(mu)
    if not is_self_dual_type(mu):
        raise GramNotSplit("weight type is not self-dual")
    half = _half(frame)
    one = GradedElem(frame, 0, frame.s0.one())
    A = GradedMatrix.identity(frame, mu)

    def col(j):
        return [A.entries[i][j] for i in range(n)]

    def set_col(j, v):
        for i in range(n):
            A.entries[i][j] = v[i]

    def scale(s, v):
        return [s * e for e in v]

    def sub(v, w):
        return [a - b for a, b in zip(v, w)]

    t = 0
    while t < n - 1 - t and mu[t] > 0:
        v, w = col(t), col(n - 1 - t)
        converged = False
        for _ in range(max_iter):
            bvw = _form_value(B, v, w)
            if not bvw.payload.is_unit():
                raise GramNotSplit("hyperbolic pairing is not a unit")
            w = scale(GradedElem(frame, 0, bvw.payload.invert()), w)
            cw = _form_value(B, w, w)
            w = sub(w, scale(half * cw, v))
            cv = _form_value(B, v, v)
            v = sub(v, scale(half * cv, w))
            if (_form_value(B, v, v).is_zero() and _form_value(B, w, w).is_zero()
                    and _form_value(B, v, w) == one):
                converged = True
                break
        if not converged:
            raise GramNotSplit("isotropic iteration did not converge")
        set_col(t, v)
        set_col(n - 1 - t, w)
        for j in range(t + 1, n - 1 - t):
            u = col(j)
            u = sub(u, scale(_form_value(B, u, w), v))
            u = sub(u, scale(_form_value(B, u, v), w))
            set_col(j, u)
        t += 1
    mids = [j for j in range(n) if mu[j] == 0]
    if mids:
        s0 = frame.s0
        J0 = standard_J(s0, len(mids))
        for _ in range(max_iter):
            M = [[_form_value(B, col(a), col(b)).payload for b in mids]
                 for a in mids]
            C = linalg.mat_sub(M, J0)
            if all(e.is_zero() for row in C for e in row):
                break
            # T = I - J0 C / 2 (J0 is an involution), quadratic convergence
            half_s = half.payload
            corr = [[half_s * e for e in row] for row in linalg.mat_mul(s0, J0, C)]
            T = linalg.mat_sub(linalg.identity(s0, len(mids)), corr)
            newcols = []
            for b in range(len(mids)):
                acc = [GradedElem.zero(frame, mu[mids[b]] - mu[i]) for i in range(n)]
                for a in range(len(mids)):
                    acc = [x + GradedElem(frame, 0, T[a][b]) * y
                           for x, y in zip(acc, col(mids[a]))]
                newcols.append(acc)
            for b, j in enumerate(mids):
                set_col(j, newcols[b])
        else:
            raise GramNotSplit("middle-block centering did not converge")
    if form_transform(B, A) != standard_gram(frame, mu):
        raise GramNotSplit("normalization failed exact verification")
    return A


# ---------------------------------------------------------------------------
# Orbit classification for orthogonal displays over a zip frame
# ---------------------------------------------------------------------------

def all_orth_displays(frame, mu, cap=10 ** 7):
    """Every orthogonal display of the given type over a small zip frame."""
    base = list(frame.s0.elements(cap))
    n = len(mu)
    total = len(base) ** (n * n)
    if total > cap:
        raise ValueError("too many matrices to enumerate")
    for combo in itertools.product(base, repeat=n * n):
        phi = [[combo[i * n + j] for j in range(n)] for i in range(n)]
        if not linalg.is_invertible(frame.s0, phi):
            continue
        d = OrthDisplay(frame, mu, phi, check=False)
        if verify_orth(d):
            yield d


def classify_orth_orbits(frame, mu, cap=10 ** 7):
    group = list(orth_group_elements(frame, mu))
    seen = set()
    orbits = []
    for d in all_orth_displays(frame, mu, cap):
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
