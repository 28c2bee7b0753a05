"""Exact linear algebra over finite local rings and their residue fields.

Matrices are plain lists of lists of ring elements; "ring" means any object
with the small protocol used throughout the package (zero/one/from_int,
to_residue/lift_residue, residue_field), which both ArtinRing and WittRing
provide.  Inversion over a local ring is residue inversion followed by
Newton correction on the nilpotent error, which converges in finitely many
steps and is verified exactly.
"""

from __future__ import annotations


class SingularMatrix(ValueError):
    pass


# ---------------------------------------------------------------------------
# Generic matrix helpers
# ---------------------------------------------------------------------------

def identity(ring, n):
    return [[ring.one() if i == j else ring.zero() for j in range(n)]
            for i in range(n)]


def zeros(ring, rows, cols):
    return [[ring.zero() for _ in range(cols)] for _ in range(rows)]


def mat_mul(ring, A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(inner):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A):
    return [[-a for a in row] for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_apply(f, A):
    return [[f(a) for a in row] for row in A]


def scalar_mul(s, A):
    return [[s * a for a in row] for row in A]


# ---------------------------------------------------------------------------
# Residue-field Gaussian elimination
# ---------------------------------------------------------------------------

def field_inverse(field, M):
    """Inverse of a matrix over a finite field, or None if singular."""
    n = len(M)
    aug = [list(row) + [field.one() if i == j else field.zero()
                        for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not aug[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * v for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def field_rank(field, M):
    if not M:
        return 0
    rows = [list(r) for r in M]
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [inv * v for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def field_solve(field, M, rhs):
    """One solution of M x = rhs over a field, or None.  rhs: list of columns allowed."""
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if not aug[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = aug[rank][col].inverse()
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
    x = [field.zero()] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return x


# ---------------------------------------------------------------------------
# Local-ring matrix inversion
# ---------------------------------------------------------------------------

def residue_matrix(ring, A):
    return [[ring.to_residue(a) for a in row] for row in A]


def is_invertible(ring, A):
    return field_inverse(ring.residue_field, residue_matrix(ring, A)) is not None


def mat_inverse(ring, A):
    """Exact inverse over a finite local ring (residue inverse + Newton)."""
    n = len(A)
    res_inv = field_inverse(ring.residue_field, residue_matrix(ring, A))
    if res_inv is None:
        raise SingularMatrix("matrix is singular over the residue field")
    X = mat_apply(ring.lift_residue, res_inv)
    I = identity(ring, n)
    for _ in range(64):
        AX = mat_mul(ring, A, X)
        if mat_eq(AX, I):
            return X
        # X <- X (2I - A X)
        X = mat_mul(ring, X, mat_sub(mat_add(I, I), AX))
    raise AssertionError("Newton iteration failed to converge")  # pragma: no cover


# ---------------------------------------------------------------------------
# Summand utilities over local rings (for Hodge filtrations)
# ---------------------------------------------------------------------------

def column_echelon_pivots(ring, cols):
    """Row indices of unit pivots for a list of column vectors spanning a free summand."""
    work = [list(c) for c in cols]
    pivots = []
    for ci, col in enumerate(work):
        pivot = None
        for r in range(len(col)):
            if r in pivots:
                continue
            if col[r].is_unit():
                pivot = r
                break
        if pivot is None:
            raise SingularMatrix("columns do not span a free summand")
        inv = col[pivot].invert()
        work[ci] = [inv * v for v in col]
        for cj in range(len(work)):
            if cj != ci and not work[cj][pivot].is_zero():
                f = work[cj][pivot]
                work[cj] = [v - f * w for v, w in zip(work[cj], work[ci])]
        pivots.append(pivot)
    return pivots


def span_contains(ring, cols, vec):
    """Whether vec lies in the span of cols (free-summand columns) over a local ring."""
    if not cols:
        return all(v.is_zero() for v in vec)
    work = [list(c) for c in cols] + [list(vec)]
    # eliminate with unit pivots of the generating columns
    pivots = []
    for ci in range(len(cols)):
        col = work[ci]
        pivot = None
        for r in range(len(col)):
            if r in pivots:
                continue
            if col[r].is_unit():
                pivot = r
                break
        if pivot is None:
            raise SingularMatrix("columns do not span a free summand")
        inv = col[pivot].invert()
        work[ci] = [inv * v for v in col]
        for cj in range(len(work)):
            if cj != ci and not work[cj][pivot].is_zero():
                f = work[cj][pivot]
                work[cj] = [v - f * w for v, w in zip(work[cj], work[ci])]
        pivots.append(pivot)
    return all(v.is_zero() for v in work[-1])


def span_equal(ring, cols1, cols2):
    if len(cols1) != len(cols2):
        return False
    return (all(span_contains(ring, cols1, v) for v in cols2)
            and all(span_contains(ring, cols2, v) for v in cols1))


def perp_space(ring, gram, cols, n):
    """Basis of {x : x^t G c = 0 for all c in cols} as a free summand of ring^n.

    Works over our local rings because the orthogonal complement of a free
    summand with respect to a unimodular form is again free: we solve the
    unit-pivot echelon system exactly.
    """
    if not cols:
        return [[ring.one() if i == j else ring.zero() for i in range(n)]
                for j in range(n)]
    # rows of the constraint matrix: (G c)^t for each c
    constraints = []
    for c in cols:
        col = [sum((gram[i][k] * c[k] for k in range(n)), ring.zero())
               for i in range(n)]
        constraints.append(col)
    # row reduce constraints with unit pivots, then read off the kernel
    work = [list(r) for r in constraints]
    pivots = []
    for ri in range(len(work)):
        row = work[ri]
        pivot = None
        for cidx in range(n):
            if cidx in pivots:
                continue
            if row[cidx].is_unit():
                pivot = cidx
                break
        if pivot is None:
            raise SingularMatrix("constraints do not form a free summand")
        inv = row[pivot].invert()
        work[ri] = [inv * v for v in row]
        for rj in range(len(work)):
            if rj != ri and not work[rj][pivot].is_zero():
                f = work[rj][pivot]
                work[rj] = [v - f * w for v, w in zip(work[rj], work[ri])]
        pivots.append(pivot)
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [ring.zero()] * n
        vec[fc] = ring.one()
        for ri, pv in enumerate(pivots):
            vec[pv] = -work[ri][fc]
        kernel.append(vec)
    return kernel
