"""Deformations of displays along square-zero thickenings.

Everything here exploits one fact: products of kernel entries vanish, so the
kernel of G(relative frame) -> G(target) is an elementary abelian group and
the right action of a kernel element on a display is affine-linear in its
F_p-coordinates.  Isomorphism questions therefore reduce to exact linear
algebra over F_p, and the classical descent operator theta is nilpotent,
which gives unique solvability of the lifting equations.

Two independent routes are kept side by side: the theta/descent iteration and
the direct linear solve; the tests play them against each other.
"""

from __future__ import annotations

import itertools
import random

from . import linalg
from .displays import Display, GradedElem, GradedMatrix
from .frames import WittFrame, ZipFrame
from .orthogonal import (OrthDisplay, exp_minus_orth, exp_plus_orth,
                         graded_inverse, o2_elements, standard_J, verify_orth)
from .rings import RingElem
from .witt import WittVector


# ---------------------------------------------------------------------------
# Mod-p linear algebra on int vectors
# ---------------------------------------------------------------------------

def _solve_modp(p, cols, rhs):
    """Coefficients x with sum x_j cols[j] = rhs mod p, or None."""
    nrows = len(rhs)
    ncols = len(cols)
    aug = [[cols[j][i] % p for j in range(ncols)] + [rhs[i] % p]
           for i in range(nrows)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if aug[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], p - 2, p)
        aug[rank] = [(inv * v) % p for v in aug[rank]]
        for r in range(nrows):
            if r != rank and aug[r][col] % p:
                f = aug[r][col]
                aug[r] = [(v - f * w) % p for v, w in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if aug[r][ncols] % p:
            return None
    x = [0] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return x


def _rank_modp(p, cols):
    if not cols:
        return 0
    nrows = len(cols[0])
    rows = [[c[i] % p for c in cols] for i in range(nrows)]
    rank = 0
    for col in range(len(cols)):
        piv = None
        for r in range(rank, nrows):
            if rows[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(inv * v) % p for v in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(v - f * w) % p for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Lifting and reduction of displays
# ---------------------------------------------------------------------------

def lift_display(th, d):
    """The monomial-section lift of a display along the thickening."""
    if d.frame != th.target:
        raise ValueError("display is not over the target frame")
    phi = [[th.lift0(e) for e in row] for row in d.phi]
    return Display(th.source, d.mu, phi, check=False)


def lift_orth_display(th, d):
    """Section lift followed by the square-zero orthogonality correction.

    With E = U^t J U - J (entries in the kernel), U(I - J E / 2) preserves
    the form exactly because kernel products vanish.
    """
    s0 = th.source.s0
    n = d.n
    U = [[th.lift0(e) for e in row] for row in d.phi]
    J = standard_J(s0, n)
    E = linalg.mat_sub(
        linalg.mat_mul(s0, linalg.transpose(U), linalg.mat_mul(s0, J, U)), J)
    half = s0.from_int((_one_order(s0) + 1) // 2)
    corr = [[half * e for e in row] for row in linalg.mat_mul(s0, J, E)]
    phi = linalg.mat_mul(s0, U, linalg.mat_sub(linalg.identity(s0, n), corr))
    out = OrthDisplay(th.source, d.mu, phi, check=False)
    if not verify_orth(out):
        raise AssertionError("orthogonal correction failed")
    return out


def _one_order(s0):
    """Additive order of 1 in S0 (a power of p)."""
    order = s0.p
    while not s0.from_int(order).is_zero():
        order *= s0.p
    return order


def reduce_display(th, d):
    """Push a display over the relative frame down to W_m(A)."""
    if d.frame != th.source:
        raise ValueError("display is not over the source frame")
    phi = [[th.eps0(e) for e in row] for row in d.phi]
    out = Display(th.target, d.mu, phi, check=False)
    if isinstance(d, OrthDisplay):
        out = OrthDisplay(th.target, d.mu, phi, check=False)
    return out


# ---------------------------------------------------------------------------
# The descent operator theta and its conjugates
# ---------------------------------------------------------------------------

def _shift_witt(w):
    return w.wring.el(list(w.comps[1:]) + [w.wring.ring.zero()])


def theta(relframe, mu, Y):
    """The composite sigma after tau^-1 on the kernel group G(K0).

    Y = I + kappa with kappa entries in the kernel ideal.  Degree <= 0
    entries die (sigma0 kills the kernel, and extra p-factors only help);
    a degree >= 1 entry becomes the downward Witt-coordinate shift of
    itself: tau^-1 presents it as a pair (a, x) with tau = (x, a_0, ...),
    and sigma-dot of the pair is a.
    """
    n = len(mu)
    s0 = relframe.s0
    out = linalg.identity(s0, n)
    for i in range(n):
        for j in range(n):
            if mu[j] - mu[i] < 1:
                continue
            out[i][j] = _shift_witt(Y[i][j])
    return out


def conj_operator(relframe, mu, g, g_inv, Y):
    """U_g(Y) = g theta(Y) g^-1, on matrices over S0."""
    s0 = relframe.s0
    return linalg.mat_mul(s0, g, linalg.mat_mul(s0, theta(relframe, mu, Y), g_inv))


def solve_descent(relframe, mu, g, h, max_iter=None):
    """The unique Y in G(K0) with U_g(Y)^-1 Y = h, via Y = ... U^2(h) U(h) h.

    Terminates because theta is nilpotent: each step shifts the Witt
    coordinates of every kernel entry down.  Uniqueness is rechecked by
    exact re-substitution.
    """
    s0 = relframe.s0
    g_inv = linalg.mat_inverse(s0, g)
    bound = max_iter or (relframe.m + 2)
    I = linalg.identity(s0, len(mu))
    y = I
    term = h
    for _ in range(bound + 1):
        if linalg.mat_eq(term, I):
            break
        y = linalg.mat_mul(s0, term, y)
        term = conj_operator(relframe, mu, g, g_inv, term)
    else:
        raise AssertionError("descent iteration did not terminate")
    u_y = conj_operator(relframe, mu, g, g_inv, y)
    assert linalg.mat_eq(
        linalg.mat_mul(s0, linalg.mat_inverse(s0, u_y), y), h)
    return y


def tau_inverse_kernel(relframe, mu, Y):
    """The graded kernel element z with tau(z) = Y and sigma(z) = theta(Y).

    Degree <= 0 entries carry over as payloads; a degree >= 1 entry
    (w_0, w_1, ...) becomes the pair ((w_1, ..., 0), w_0), the canonical
    choice with vanishing top coordinate.
    """
    n = len(mu)
    I = linalg.identity(relframe.s0, n)
    out = GradedMatrix.identity(relframe, mu)
    for i in range(n):
        for j in range(n):
            d = mu[j] - mu[i]
            e = Y[i][j] - I[i][j]
            if e.is_zero():
                continue
            if d >= 1:
                pay = (_shift_witt(e), e.comps[0])
            else:
                pay = e
            out.entries[i][j] = out.entries[i][j] + GradedElem(relframe, d, pay)
    return out


def lift_uniqueness_witness(relframe, d1, d2):
    """The graded element z with d1.act(z) = d2, through the descent
    product, for two displays whose matrices differ by a kernel factor
    h = phi2 phi1^-1; verified by exact re-substitution."""
    s0 = relframe.s0
    h = linalg.mat_mul(s0, d2.phi, linalg.mat_inverse(s0, d1.phi))
    h_inv = linalg.mat_inverse(s0, h)
    y = solve_descent(relframe, d1.mu, d1.phi, h_inv)
    z = tau_inverse_kernel(relframe, d1.mu, y)
    assert linalg.mat_eq(d1.act(z).phi, d2.phi), \
        "descent witness failed exact verification"
    return z


# ---------------------------------------------------------------------------
# F_p-coordinates on kernel slots
# ---------------------------------------------------------------------------

class KernelCoords:
    """Coordinates for I + kappa with kappa supported on kernel payloads.

    kind "thickening": the kernel of eps to W_m(A) (J-supported everywhere).
    kind "zip": the kernel of the projection to the zip frame of A (first
    Witt coordinate in J, the rest free); requires m = 2, where kernel
    products vanish exactly.
    """

    def __init__(self, relframe, mu, kind):
        if relframe.ext.B.field.f != 1:
            raise ValueError("coordinates require a prime residue field")
        if kind == "zip" and relframe.m != 2:
            raise ValueError("zip-kernel coordinates require m = 2")
        self.relframe = relframe
        self.frame = relframe
        self.mu = tuple(mu)
        self.kind = kind
        self.p = relframe.p
        ext = relframe.ext
        B = ext.B
        m = relframe.m
        if kind == "thickening":
            comp_monos = [list(ext.J_basis) for _ in range(m)]
        else:
            comp_monos = [list(ext.J_basis)] + [list(B.basis)] * (m - 1)
        self.value_basis = [(c, mo) for c, monos in enumerate(comp_monos)
                            for mo in monos]
        self._value_pos = {cm: k for k, cm in enumerate(self.value_basis)}
        n = len(self.mu)
        self.slots = []
        for i in range(n):
            for j in range(n):
                d = self.mu[j] - self.mu[i]
                payloads = []
                for c, mo in self.value_basis:
                    w = self._witt_unit(c, mo)
                    payloads.append((w, B.zero()) if d >= 1 else w)
                if d >= 1:
                    for mo in ext.J_basis:
                        payloads.append((relframe.s0.zero(), B.el({mo: 1})))
                self.slots.append((i, j, d, payloads))
        self.offsets = []
        total = 0
        for _, _, _, payloads in self.slots:
            self.offsets.append(total)
            total += len(payloads)
        self.dim = total

    def _witt_unit(self, c, mo):
        B = self.relframe.ext.B
        comps = [B.zero()] * self.relframe.m
        comps[c] = B.el({mo: 1})
        return self.relframe.s0.el(comps)

    # -- delta matrices --------------------------------------------------------

    def zero_delta(self):
        """Entry grid of graded zeros (a kappa, not a group element)."""
        n = len(self.mu)
        return [[GradedElem.zero(self.relframe, self.mu[j] - self.mu[i])
                 for j in range(n)] for i in range(n)]

    def basis_slot(self, idx):
        """(slot_index, payload) for global coordinate index idx."""
        for s, off in enumerate(self.offsets):
            count = len(self.slots[s][3])
            if off <= idx < off + count:
                return s, self.slots[s][3][idx - off]
        raise IndexError(idx)

    def decode(self, vec):
        """Coordinates -> the group element I + kappa."""
        relframe = self.relframe
        n = len(self.mu)
        out = GradedMatrix.identity(relframe, self.mu)
        for s, (i, j, d, payloads) in enumerate(self.slots):
            off = self.offsets[s]
            acc = None
            for k, pay in enumerate(payloads):
                c = vec[off + k] % self.p
                if not c:
                    continue
                e = GradedElem(relframe, d, pay)
                term = e
                for _ in range(c - 1):
                    term = term + e
                acc = term if acc is None else acc + term
            if acc is not None:
                out.entries[i][j] = out.entries[i][j] + acc
        return out

    def encode_kappa(self, z):
        """Group element I + kappa -> coordinates (must be exactly supported)."""
        I = GradedMatrix.identity(self.relframe, self.mu)
        diff = z - I
        vec = [0] * self.dim
        for s, (i, j, d, payloads) in enumerate(self.slots):
            e = diff.entries[i][j]
            off = self.offsets[s]
            if d >= 1:
                a, x = e.payload
                self._encode_witt(a, vec, off)
                if any(m_ not in self.relframe.ext.J_basis for m_ in x.coeffs):
                    raise ValueError("J-part outside the kernel basis")
                for k, mo in enumerate(self.relframe.ext.J_basis):
                    c = x.coeffs.get(mo, None)
                    vec[off + len(self.value_basis) + k] = (
                        c.coeffs[0] if c is not None else 0)
            else:
                self._encode_witt(e.payload, vec, off)
        return vec

    def _encode_witt(self, w, vec, off):
        for c_idx, comp in enumerate(w.comps):
            for mo, c in comp.coeffs.items():
                pos = self._value_pos.get((c_idx, mo))
                if pos is None:
                    raise ValueError("value outside the kernel coordinate space")
                vec[off + pos] = c.coeffs[0]

    # -- value (equation) encoding --------------------------------------------

    def encode_value_matrix(self, M):
        """Matrix over S0 with kernel entries -> flat coordinate vector."""
        out = []
        for row in M:
            for e in row:
                v = [0] * len(self.value_basis)
                for c_idx, comp in enumerate(e.comps):
                    for mo, c in comp.coeffs.items():
                        pos = self._value_pos.get((c_idx, mo))
                        if pos is None:
                            raise ValueError("value outside the kernel space")
                        v[pos] = c.coeffs[0]
                out.extend(v)
        return out

    # -- sigma and tau of a single basis kappa ---------------------------------

    def sigma_tau_single(self, idx):
        """(sigma_matrix, tau_matrix) over S0 for the idx-th basis kappa."""
        relframe = self.relframe
        s0 = relframe.s0
        n = len(self.mu)
        s_idx, pay = self.basis_slot(idx)
        i, j, d, _ = self.slots[s_idx]
        sig = linalg.zeros(s0, n, n)
        tau = linalg.zeros(s0, n, n)
        e = GradedElem(relframe, d, pay)
        sig[i][j] = e.sigma()
        tau[i][j] = e.tau()
        return sig, tau


def kernel_group_elements(coords):
    """Every element of the kernel group, through its coordinates."""
    for combo in itertools.product(range(coords.p), repeat=coords.dim):
        yield coords.decode(list(combo))


class WittKernelCoords:
    """Coordinates on kernel subgroups of the display group of a Witt frame.

    Same role as KernelCoords, but over W_m(B) itself, where positive-degree
    payloads are plain Witt vectors.  kind "jsupp": all coordinates supported
    on the kernel ideal J of a square-zero extension (the kernel of the
    reduction to W_m(A)).  kind "resfield": leading Witt coordinate in the
    maximal ideal, higher coordinates free (the kernel of the reduction to
    the zip frame of the residue field); needs m = 2 and a square-zero
    maximal ideal so that kernel products vanish exactly.
    """

    def __init__(self, frame, mu, kind, ext=None):
        ring = frame.ring
        if ring.field.f != 1:
            raise ValueError("coordinates require a prime residue field")
        self.frame = frame
        self.mu = tuple(mu)
        self.kind = kind
        self.ext = ext
        self.p = frame.p
        m = frame.m
        if kind == "jsupp":
            if ext is None or ext.B != ring:
                raise ValueError("jsupp coordinates need the extension of the base ring")
            comp_monos = [list(ext.J_basis) for _ in range(m)]
        elif kind == "resfield":
            if m != 2:
                raise ValueError("resfield coordinates require m = 2")
            nilp = [mo for mo in ring.basis if mo != ring._one_mono()]
            for m1 in nilp:
                for m2 in nilp:
                    if not (ring.el({m1: 1}) * ring.el({m2: 1})).is_zero():
                        raise ValueError("maximal ideal is not square-zero")
            comp_monos = [nilp] + [list(ring.basis)] * (m - 1)
        else:
            raise ValueError(kind)
        self.value_basis = [(c, mo) for c, monos in enumerate(comp_monos)
                            for mo in monos]
        self._value_pos = {cm: k for k, cm in enumerate(self.value_basis)}
        n = len(self.mu)
        self.slots = []
        for i in range(n):
            for j in range(n):
                d = self.mu[j] - self.mu[i]
                payloads = [self._witt_unit(c, mo) for c, mo in self.value_basis]
                self.slots.append((i, j, d, payloads))
        self.offsets = []
        total = 0
        for _, _, _, payloads in self.slots:
            self.offsets.append(total)
            total += len(payloads)
        self.dim = total

    def _witt_unit(self, c, mo):
        ring = self.frame.ring
        comps = [ring.zero()] * self.frame.m
        comps[c] = ring.el({mo: 1})
        return self.frame.s0.el(comps)

    def basis_slot(self, idx):
        for s, off in enumerate(self.offsets):
            count = len(self.slots[s][3])
            if off <= idx < off + count:
                return s, self.slots[s][3][idx - off]
        raise IndexError(idx)

    def decode(self, vec):
        frame = self.frame
        out = GradedMatrix.identity(frame, self.mu)
        for s, (i, j, d, payloads) in enumerate(self.slots):
            off = self.offsets[s]
            acc = None
            for k, pay in enumerate(payloads):
                c = vec[off + k] % self.p
                if not c:
                    continue
                e = GradedElem(frame, d, pay)
                term = e
                for _ in range(c - 1):
                    term = term + e
                acc = term if acc is None else acc + term
            if acc is not None:
                out.entries[i][j] = out.entries[i][j] + acc
        return out

    def encode_kappa(self, z):
        I = GradedMatrix.identity(self.frame, self.mu)
        diff = z - I
        vec = [0] * self.dim
        for s, (i, j, d, payloads) in enumerate(self.slots):
            self._encode_witt(diff.entries[i][j].payload, vec, self.offsets[s])
        return vec

    def _encode_witt(self, w, vec, off):
        for c_idx, comp in enumerate(w.comps):
            for mo, c in comp.coeffs.items():
                pos = self._value_pos.get((c_idx, mo))
                if pos is None:
                    raise ValueError("value outside the kernel coordinate space")
                vec[off + pos] = c.coeffs[0]

    def encode_value_matrix(self, M):
        out = []
        for row in M:
            for e in row:
                v = [0] * len(self.value_basis)
                for c_idx, comp in enumerate(e.comps):
                    for mo, c in comp.coeffs.items():
                        pos = self._value_pos.get((c_idx, mo))
                        if pos is None:
                            raise ValueError("value outside the kernel space")
                        v[pos] = c.coeffs[0]
                out.extend(v)
        return out

    def sigma_tau_single(self, idx):
        s0 = self.frame.s0
        n = len(self.mu)
        s_idx, pay = self.basis_slot(idx)
        i, j, d, _ = self.slots[s_idx]
        sig = linalg.zeros(s0, n, n)
        tau = linalg.zeros(s0, n, n)
        e = GradedElem(self.frame, d, pay)
        sig[i][j] = e.sigma()
        tau[i][j] = e.tau()
        return sig, tau


# ---------------------------------------------------------------------------
# The affine-linear isomorphism solver
# ---------------------------------------------------------------------------

def _combine_sparse(coords, combo):
    """A sparse integer combination [(idx, coeff)] as a coordinate vector."""
    vec = [0] * coords.dim
    for idx, c in combo:
        vec[idx] = (vec[idx] + c) % coords.p
    return vec


def skew_basis(coords):
    """Sparse basis of the orthogonality-kernel condition
    kappa_{n-1-i, j} + kappa_{n-1-j, i} = 0 (self-paired slots drop out)."""
    n = len(coords.mu)
    slot_of = {(i, j): s for s, (i, j, _, _) in enumerate(coords.slots)}
    combos = []
    seen = set()
    for s, (i, j, d, payloads) in enumerate(coords.slots):
        partner = (n - 1 - j, n - 1 - i)
        if partner == (i, j):
            continue  # 2 kappa = 0 forces the slot to vanish
        key = tuple(sorted([(i, j), partner]))
        if key in seen:
            continue
        seen.add(key)
        s2 = slot_of[partner]
        for k in range(len(payloads)):
            combos.append([(coords.offsets[s] + k, 1),
                           (coords.offsets[s2] + k, coords.p - 1)])
    return combos


def _linear_columns(coords, left_phi, right_phi, basis_vectors):
    """Columns of zeta -> left sigma(zeta) - tau(zeta) right, in value coords."""
    s0 = coords.frame.s0
    n = len(coords.mu)
    singles = {}
    cols = []
    for bv in basis_vectors:
        sig_tot = linalg.zeros(s0, n, n)
        tau_tot = linalg.zeros(s0, n, n)
        for idx, c in [(k, v) for k, v in enumerate(bv) if v % coords.p]:
            if idx not in singles:
                singles[idx] = coords.sigma_tau_single(idx)
            sig1, tau1 = singles[idx]
            for _ in range(c % coords.p):
                sig_tot = linalg.mat_add(sig_tot, sig1)
                tau_tot = linalg.mat_add(tau_tot, tau1)
        val = linalg.mat_sub(linalg.mat_mul(s0, left_phi, sig_tot),
                             linalg.mat_mul(s0, tau_tot, right_phi))
        cols.append(coords.encode_value_matrix(val))
    return cols


def solve_identity_iso(coords, d1, d2, basis_vectors=None, verify=True):
    """z = I + kappa with d1.act(z) == d2, or None; complete by linearity.

    basis_vectors restricts kappa to a subspace (e.g. the orthogonal one);
    each is a full coordinate vector.
    """
    if basis_vectors is None:
        basis_vectors = []
        for k in range(coords.dim):
            v = [0] * coords.dim
            v[k] = 1
            basis_vectors.append(v)
    rhs_mat = linalg.mat_sub(d2.phi, d1.phi)
    try:
        rhs = coords.encode_value_matrix(rhs_mat)
    except ValueError:
        return None  # not in the same fiber of the projection
    cols = _linear_columns(coords, d1.phi, d2.phi, basis_vectors)
    sol = _solve_modp(coords.p, cols, rhs)
    if sol is None:
        return None
    total = [0] * coords.dim
    for c, bv in zip(sol, basis_vectors):
        if c % coords.p:
            total = [(t + c * v) % coords.p for t, v in zip(total, bv)]
    z = coords.decode(total)
    if verify:
        assert d1.act(z) == Display(d1.frame, d1.mu, d2.phi, check=False), \
            "linear solution failed exact verification"
    return z


# ---------------------------------------------------------------------------
# Hodge filtration lifts
# ---------------------------------------------------------------------------

def hodge_lift_parameters(relframe, mu, orth=False):
    """The parameter grids of the lifts of the Hodge flag along J.

    GL: one J-value per strictly-positive slot.  Orthogonal (minuscule
    self-dual type): the isotropic line determines the flag, J^(n-2) values.
    """
    ext = relframe.ext
    js = list(ext.j_elements())
    n = len(mu)
    if orth:
        for combo in itertools.product(js, repeat=n - 2):
            yield list(combo)
    else:
        slots = [(i, j) for i in range(n) for j in range(n) if mu[j] - mu[i] >= 1]
        for combo in itertools.product(js, repeat=len(slots)):
            yield dict(zip(slots, combo))


def hodge_lift_matrix(relframe, mu, params, orth=False):
    """The graded unipotent I + Delta with payloads (0, delta); sigma of it
    is the identity, so acting by it deforms only through tau."""
    zero_w = relframe.s0.zero()
    if orth:
        pays = [(zero_w, x) for x in params]
        return exp_plus_orth(relframe, mu, pays)
    A = GradedMatrix.identity(relframe, mu)
    for (i, j), x in params.items():
        A.entries[i][j] = GradedElem(relframe, mu[j] - mu[i], (zero_w, x))
    return A


def apply_hodge_lift(dhat, A, out_frame=None):
    """Deform a lifted display by a Hodge-flag lift.

    With out_frame set (the Witt frame of B), the resulting matrix is read
    as a display over W_m(B); sigma of the lift matrix is the identity, so
    the action deforms only through tau and the result still reduces to the
    original display.
    """
    y = dhat.act(A)
    if out_frame is None:
        return y
    cls = OrthDisplay if isinstance(dhat, OrthDisplay) else Display
    return cls(out_frame, y.mu, y.phi, check=False)


def enumerate_hodge_deformations(th, d, orth=False):
    """All deformations of d along the thickening, one per Hodge lift,
    emitted as displays over the Witt frame of B."""
    relframe = th.source
    out_frame = WittFrame(relframe.ext.B, relframe.m)
    dhat = lift_orth_display(th, d) if orth else lift_display(th, d)
    out = []
    for params in hodge_lift_parameters(relframe, d.mu, orth=orth):
        A = hodge_lift_matrix(relframe, d.mu, params, orth=orth)
        out.append(apply_hodge_lift(dhat, A, out_frame=out_frame))
    return out


# ---------------------------------------------------------------------------
# Fiber classification (complete, by the coset argument)
# ---------------------------------------------------------------------------

def fiber_direction_basis(frame, ext, n, orth_base=None):
    """Basis of the space of kernel matrices K with base + K in the fiber.

    frame is any frame with S0 = W_m(B) (the relative frame or the Witt
    frame of B).  For the orthogonal fiber (orth_base = the lifted Phi), K
    is cut out by the linear condition K^t J Phi + Phi^t J K = 0 (the
    quadratic term vanishes on kernel entries).
    """
    s0 = frame.s0
    m = frame.m
    B = ext.B
    units = []
    for i in range(n):
        for j in range(n):
            for c in range(m):
                for mo in ext.J_basis:
                    K = linalg.zeros(s0, n, n)
                    comps = [B.zero()] * m
                    comps[c] = B.el({mo: 1})
                    K[i][j] = s0.el(comps)
                    units.append(K)
    if orth_base is None:
        return units
    J = standard_J(s0, n)
    p = frame.p

    def cond(K):
        t1 = linalg.mat_mul(s0, linalg.transpose(K), linalg.mat_mul(s0, J, orth_base))
        t2 = linalg.mat_mul(s0, linalg.transpose(orth_base), linalg.mat_mul(s0, J, K))
        return linalg.mat_add(t1, t2)

    # coordinates of the condition in the J-supported value space
    coords_val = [(c, mo) for c in range(m) for mo in ext.J_basis]
    pos = {cm: k for k, cm in enumerate(coords_val)}

    def encode(M):
        out = []
        for row in M:
            for e in row:
                v = [0] * len(coords_val)
                for c_idx, comp in enumerate(e.comps):
                    for mo, c in comp.coeffs.items():
                        v[pos[(c_idx, mo)]] = c.coeffs[0]
                out.extend(v)
        return out

    cols = [encode(cond(K)) for K in units]
    # kernel of the condition map, by elimination over F_p
    nrows = len(cols[0])
    rows = [[cols[j][i] for j in range(len(units))] for i in range(nrows)]
    pivots = []
    rank = 0
    for col in range(len(units)):
        piv = None
        for r in range(rank, nrows):
            if rows[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(inv * v) % p for v in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(v - f * w) % p for v, w in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(len(units)) if c not in pivots]
    basis = []
    for fc in free:
        coeffs = [0] * len(units)
        coeffs[fc] = 1
        for r, pv in enumerate(pivots):
            coeffs[pv] = (-rows[r][fc]) % p
        M = linalg.zeros(s0, n, n)
        for c, K in zip(coeffs, units):
            if c:
                for _ in range(c):
                    M = linalg.mat_add(M, K)
        basis.append(M)
    return basis


def _echelon(p, vecs):
    """Reduced echelon basis [(pivot, vector)] of the span of vecs mod p."""
    basis = []
    for v in vecs:
        v = [x % p for x in v]
        for piv, b in basis:
            if v[piv]:
                f = v[piv]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = pow(v[piv], p - 2, p)
        v = [(inv * x) % p for x in v]
        reduced = []
        for pv, b in basis:
            if b[piv]:
                f = b[piv]
                b = [(x - f * y) % p for x, y in zip(b, v)]
            reduced.append((pv, b))
        basis = sorted(reduced + [(piv, v)])
    return basis


def _reduce_by(p, basis, vec):
    v = [x % p for x in vec]
    for piv, b in basis:
        if v[piv]:
            f = v[piv]
            v = [(x - f * y) % p for x, y in zip(v, b)]
    return tuple(v)


# ---------------------------------------------------------------------------
# Base change between W_m(A) and W_m(B)
# ---------------------------------------------------------------------------

def witt_map(wring_out, f, w):
    """Apply a coefficient map componentwise to a Witt vector."""
    return wring_out.el([f(c) for c in w.comps])


def embed_witt_display(ext, frame_b, d):
    """Read a display over W_m(A) as one over W_m(B) through the monomial
    section (a ring homomorphism for split square-zero extensions)."""
    sb = frame_b.s0
    phi = [[witt_map(sb, ext.section, e) for e in row] for row in d.phi]
    cls = OrthDisplay if isinstance(d, OrthDisplay) else Display
    return cls(frame_b, d.mu, phi, check=False)


def reduce_witt_display(ext, frame_a, d):
    """Push a display over W_m(B) down to W_m(A) componentwise."""
    sa = frame_a.s0
    phi = [[witt_map(sa, ext.proj, e) for e in row] for row in d.phi]
    cls = OrthDisplay if isinstance(d, OrthDisplay) else Display
    return cls(frame_a, d.mu, phi, check=False)


def embed_graded(ext, frame_b, A):
    """Base-change a graded matrix over the Witt frame of A to that of B."""
    sb = frame_b.s0
    mu = A.mu_col
    n = len(mu)
    out = GradedMatrix.identity(frame_b, mu)
    for i in range(n):
        for j in range(n):
            e = A.entries[i][j]
            out.entries[i][j] = GradedElem(
                frame_b, e.degree, witt_map(sb, ext.section, e.payload))
    return out


# ---------------------------------------------------------------------------
# The zip-level tower over a Witt frame
# ---------------------------------------------------------------------------

def witt_zip_lift_pairs(wframe, mu, zring, lift_scalar):
    """(g0 over the zip frame of the residue field, exact Teichmueller lift
    over the Witt frame) for the whole zip-level display group."""
    from .displays import group_elements
    zf = ZipFrame(zring)
    s0 = wframe.s0
    pairs = []
    for g0 in group_elements(zf, mu):
        grid = [[s0.teichmuller(lift_scalar(e.payload)) for e in row]
                for row in g0.entries]
        pairs.append((g0, GradedMatrix.from_payloads(wframe, mu, grid)))
    return pairs


def witt_orth_zip_lift_pairs(wframe, mu, zring, lift_scalar):
    """Orthogonal analogue of witt_zip_lift_pairs: the orthogonal zip group
    with exact orthogonal lifts, built factor by factor (Levi times lower
    times upper unipotent, Teichmueller parameters throughout)."""
    zf = ZipFrame(zring)
    s0 = wframe.s0
    n = len(mu)

    def teich(a):
        return s0.teichmuller(lift_scalar(a))

    units = [a for a in zring.elements() if a.is_unit()]
    elems = list(zring.elements())
    pairs = []
    for a in units:
        for H in o2_elements(zring):
            grid_z = [[zring.zero()] * n for _ in range(n)]
            grid_w = [[s0.zero()] * n for _ in range(n)]
            grid_z[0][0] = a
            grid_w[0][0] = teich(a)
            grid_z[n - 1][n - 1] = a.invert()
            grid_w[n - 1][n - 1] = teich(a.invert())
            for bi in range(2):
                for bj in range(2):
                    grid_z[1 + bi][1 + bj] = H[bi][bj]
                    grid_w[1 + bi][1 + bj] = teich(H[bi][bj])
            l_z = GradedMatrix.from_payloads(zf, mu, grid_z)
            l_w = GradedMatrix.from_payloads(wframe, mu, grid_w)
            for xm in itertools.product(elems, repeat=n - 2):
                um_z = exp_minus_orth(zf, mu, list(xm))
                um_w = exp_minus_orth(wframe, mu, [teich(x) for x in xm])
                lum_z = l_z * um_z
                lum_w = l_w * um_w
                for xp in itertools.product(elems, repeat=n - 2):
                    up_z = exp_plus_orth(zf, mu, list(xp))
                    up_w = exp_plus_orth(wframe, mu, [teich(x) for x in xp])
                    pairs.append((lum_z * up_z, lum_w * up_w))
    return pairs


def project_witt_display(zf, resmap, d):
    """Display over W_m(B) -> display over the zip frame of the residue
    field, through resmap on leading Witt coordinates."""
    phi = [[resmap(e) for e in row] for row in d.phi]
    return Display(zf, d.mu, phi, check=False)


def is_isomorphic_witt(coords, lift_pairs, resmap, d1, d2, orth=False):
    """Decide isomorphism of two displays over a Witt frame W_2(B).

    Complete by the tower argument: the reduction of the display group to
    the zip frame of the residue field is surjective (Teichmueller lifts),
    its kernel is the "resfield" coordinate group, kernel products vanish,
    so the kernel part of any isomorphism is found by the linear solver.
    """
    zf = lift_pairs[0][0].frame
    z1 = project_witt_display(zf, resmap, d1)
    z2 = project_witt_display(zf, resmap, d2)
    if orth:
        basis_vectors = [_combine_sparse(coords, c) for c in skew_basis(coords)]
    else:
        basis_vectors = None
    target = Display(d1.frame, d1.mu, d2.phi, check=False)
    for g0, ghat in lift_pairs:
        if z1.act(g0) != z2:
            continue
        D = d1.act(ghat)
        z = solve_identity_iso(coords, D, target,
                               basis_vectors=basis_vectors, verify=False)
        if z is None:
            continue
        g = ghat * z
        if d1.act(g) == target:
            return True
        raise AssertionError("linear solution failed exact verification")
    return False


# ---------------------------------------------------------------------------
# Stabilizers and the complete fiber classification
# ---------------------------------------------------------------------------

def stabilizer_lifts(d, lift_pairs, coords_res, orth=False):
    """One exact display-group stabilizer element of d per zip-level
    component of the stabilizer.

    Kernel components of the stabilizer act trivially on J-supported
    perturbations after base change (their entries multiply J-supported
    Witt vectors to zero), so one representative per component is enough.
    """
    wframe = d.frame
    zf = lift_pairs[0][0].frame
    z0 = project_witt_display(zf, lambda w: w.comps[0], d)
    if orth:
        basis_vectors = [_combine_sparse(coords_res, c)
                         for c in skew_basis(coords_res)]
    else:
        basis_vectors = None
    target = Display(wframe, d.mu, d.phi, check=False)
    out = []
    for g0, ghat in lift_pairs:
        if z0.act(g0) != z0:
            continue
        Z = d.act(ghat)
        z = solve_identity_iso(coords_res, Z, target,
                               basis_vectors=basis_vectors, verify=False)
        if z is None:
            continue
        s = ghat * z
        assert d.act(s) == target, "stabilizer candidate failed verification"
        out.append(s)
    return out


def classify_witt_fiber(th, d, orth=False):
    """Isomorphism classes of displays over W_m(B) reducing to d over
    W_m(A), matched against the Hodge-lift deformations.

    Complete in three exact steps.  (1) Every class has a representative
    whose matrix reduces entrywise to d.phi: an isomorphism of reductions
    pushes up through a Teichmueller lift.  (2) On that matrix fiber the
    isomorphisms reducing to the identity act by translations by
    V = image of the linearized kernel action.  (3) The remaining
    identifications form the stabilizer of d, which acts linearly on the
    coset space; orbits of that finite action are the classes.
    """
    frame_a = th.target
    ext = th.source.ext
    p = frame_a.p
    n = d.n
    mu = d.mu
    frame_b = WittFrame(ext.B, frame_a.m)
    dhat = embed_witt_display(ext, frame_b, d)
    if orth and not verify_orth(dhat):
        raise AssertionError("section lift lost orthogonality")
    coords = WittKernelCoords(frame_b, mu, "jsupp", ext=ext)
    if orth:
        zeta_basis = [_combine_sparse(coords, c) for c in skew_basis(coords)]
    else:
        zeta_basis = []
        for k in range(coords.dim):
            v = [0] * coords.dim
            v[k] = 1
            zeta_basis.append(v)
    # V = image of zeta -> Phi sigma(zeta) - tau(zeta) Phi; the same
    # subspace for every fiber member because kernel products vanish
    cols = _linear_columns(coords, dhat.phi, dhat.phi, zeta_basis)
    units = fiber_direction_basis(frame_b, ext, n)
    dirs = (fiber_direction_basis(frame_b, ext, n, orth_base=dhat.phi)
            if orth else units)
    dir_vecs = [coords.encode_value_matrix(K) for K in dirs]
    dim_f = _rank_modp(p, dir_vecs)
    rank_v = _rank_modp(p, cols)
    assert _rank_modp(p, dir_vecs + cols) == dim_f, \
        "kernel action left the fiber"
    vbasis = _echelon(p, cols)

    def canon(vec):
        return _reduce_by(p, vbasis, vec)

    # complement of V inside the fiber directions
    chosen = []
    chosen_ech = []
    for v in dir_vecs:
        red = list(canon(v))
        for piv, b in chosen_ech:
            if red[piv]:
                f = red[piv]
                red = [(x - f * y) % p for x, y in zip(red, b)]
        piv = next((i for i, x in enumerate(red) if x), None)
        if piv is None:
            continue
        chosen.append(v)
        chosen_ech = _echelon(p, [b for _, b in chosen_ech] + [red])
        if len(chosen) == dim_f - rank_v:
            break
    # coset labels and representatives
    reps = {}
    for combo in itertools.product(range(p), repeat=len(chosen)):
        vec = [0] * len(dir_vecs[0])
        for c, base in zip(combo, chosen):
            if c:
                vec = [(x + c * y) % p for x, y in zip(vec, base)]
        lab = canon(vec)
        assert lab not in reps, "coset representatives collided"
        reps[lab] = vec
    # Hodge deformations and their labels
    deform = enumerate_hodge_deformations(th, d, orth=orth)
    hodge_labels = []
    for dd in deform:
        vec = coords.encode_value_matrix(linalg.mat_sub(dd.phi, dhat.phi))
        lab = canon(vec)
        assert lab in reps, "Hodge deformation left the fiber cosets"
        hodge_labels.append(lab)
    # stabilizer of d over A, one exact lift per zip-level component
    zring = frame_a.ring
    ident = lambda a: a
    if orth:
        pairs_a = witt_orth_zip_lift_pairs(frame_a, mu, zring, ident)
    else:
        pairs_a = witt_zip_lift_pairs(frame_a, mu, zring, ident)
    coords_res = WittKernelCoords(frame_a, mu, "resfield")
    stabs = stabilizer_lifts(d, pairs_a, coords_res, orth=orth)
    # induced linear maps on the J-supported value space
    sb = frame_b.s0
    maps = []
    for s in stabs:
        s_b = embed_graded(ext, frame_b, s)
        tau_inv = linalg.mat_inverse(sb, s_b.tau())
        sig = s_b.sigma()
        mcols = []
        for K in units:
            img = linalg.mat_mul(sb, tau_inv, linalg.mat_mul(sb, K, sig))
            mcols.append(coords.encode_value_matrix(img))
        # sanity: conjugation preserves V
        for c in cols:
            assert not any(canon(_apply_cols(p, mcols, c))), \
                "stabilizer did not preserve the kernel image"
        maps.append(mcols)
    # orbits of the stabilizer action on the cosets
    label_list = list(reps)
    index = {lab: k for k, lab in enumerate(label_list)}
    parent = list(range(len(label_list)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mcols in maps:
        for lab, vec in reps.items():
            img = canon(_apply_cols(p, mcols, vec))
            assert img in index, "stabilizer left the fiber cosets"
            a, b = find(index[lab]), find(index[img])
            if a != b:
                parent[a] = b
    orbit_of = {lab: find(index[lab]) for lab in label_list}
    n_classes = len(set(orbit_of.values()))
    hodge_orbits = [orbit_of[lab] for lab in hodge_labels]
    label_class = {}
    for lab in label_list:
        root = orbit_of[lab]
        hit = [k for k, r in enumerate(hodge_orbits) if r == root]
        label_class[lab] = hit[0] if hit else None
    passed = (n_classes == len(deform)
              and len(set(hodge_orbits)) == len(deform))
    return {
        "passed": passed,
        "classes": n_classes,
        "hodge_lifts": len(deform),
        "fiber_dim": dim_f,
        "action_rank": rank_v,
        "cosets": len(reps),
        "stab_components": len(stabs),
        "deformations": deform,
        "coords": coords,
        "canon": canon,
        "label_class": label_class,
        "dir_vecs": dir_vecs,
        "lifted_base": dhat,
    }


def _apply_cols(p, cols, vec):
    out = [0] * len(cols[0]) if cols else []
    for c, col in zip(vec, cols):
        if c % p:
            out = [(o + c * x) % p for o, x in zip(out, col)]
    return out


def witt_fiber_member_class(report, member):
    """Hodge class index of a member of the matrix fiber (None if its coset
    carries no Hodge deformation)."""
    coords = report["coords"]
    dhat = report["lifted_base"]
    vec = coords.encode_value_matrix(linalg.mat_sub(member.phi, dhat.phi))
    lab = report["canon"](vec)
    if lab not in report["label_class"]:
        raise ValueError("member is not in the fiber coset space")
    return report["label_class"][lab]


# ---------------------------------------------------------------------------
# Projection to the zip frame and full isomorphism testing
# ---------------------------------------------------------------------------

def project_graded(relframe, zipframe, A):
    """Apply the canonical projection entrywise to a graded matrix."""
    mu = A.mu_col
    n = len(mu)
    out = GradedMatrix.identity(zipframe, mu)
    for i in range(n):
        for j in range(n):
            e = A.entries[i][j]
            d = e.degree
            if d >= 1:
                val = relframe.reduce(relframe.sigmadot(e.payload))
            else:
                val = relframe.reduce(e.payload)
            out.entries[i][j] = GradedElem(zipframe, d, val)
    return out


def project_display(relframe, zipframe, d):
    phi = [[relframe.reduce(e) for e in row] for row in d.phi]
    return Display(zipframe, d.mu, phi, check=False)


def orth_zip_lift_pairs(relframe, mu):
    """(g0 over the zip frame, exact orthogonal lift over the relative frame)
    for the whole orthogonal zip group, built factor by factor.

    Diagonal factors lift by Teichmueller representatives (multiplicative, so
    exactly orthogonal); the unipotent factors lift through the same group
    formulas with section-lifted parameters.
    """
    ext = relframe.ext
    A_ring = ext.A
    zf = ZipFrame(A_ring)
    s0 = relframe.s0
    n = len(mu)
    zero_w = s0.zero()

    def teich(a):
        return s0.teichmuller(ext.section(a))

    units = [a for a in A_ring.elements() if a.is_unit()]
    a_elems = list(A_ring.elements())
    pairs = []
    for a in units:
        for H in o2_elements(A_ring):
            # Levi factor at both levels
            grid_z = [[A_ring.zero()] * n for _ in range(n)]
            grid_r = [[s0.zero()] * n for _ in range(n)]
            grid_z[0][0] = a
            grid_r[0][0] = teich(a)
            grid_z[n - 1][n - 1] = a.invert()
            grid_r[n - 1][n - 1] = teich(a.invert())
            for bi in range(2):
                for bj in range(2):
                    grid_z[1 + bi][1 + bj] = H[bi][bj]
                    grid_r[1 + bi][1 + bj] = teich(H[bi][bj])
            l_z = GradedMatrix.from_payloads(zf, mu, grid_z)
            l_r = GradedMatrix.from_payloads(relframe, mu, grid_r)
            for xm in itertools.product(a_elems, repeat=n - 2):
                um_z = exp_minus_orth(zf, mu, list(xm))
                um_r = exp_minus_orth(relframe, mu,
                                      [teich(x) for x in xm])
                lum_z = l_z * um_z
                lum_r = l_r * um_r
                for xp in itertools.product(a_elems, repeat=n - 2):
                    up_z = exp_plus_orth(zf, mu, list(xp))
                    up_r = exp_plus_orth(
                        relframe, mu,
                        [(s0.teichmuller(ext.section(x)), ext.B.zero())
                         for x in xp])
                    pairs.append((lum_z * up_z, lum_r * up_r))
    return pairs


def is_isomorphic_full(coords_zip, lift_pairs, d1, d2, orth=True):
    """Decide isomorphism of displays over the relative frame.

    Complete: every group element factors as (exact lift of its zip image)
    times a kernel element, the zip image runs over the finite zip group,
    and the kernel part is found by the affine-linear solver.
    """
    relframe = coords_zip.relframe
    zf = ZipFrame(relframe.ext.A)
    z1 = project_display(relframe, zf, d1)
    z2 = project_display(relframe, zf, d2)
    if orth:
        combos = skew_basis(coords_zip)
        basis_vectors = [_combine_sparse(coords_zip, c) for c in combos]
    else:
        basis_vectors = None
    for g0, ghat in lift_pairs:
        if z1.act(g0) != z2:
            continue
        D = d1.act(ghat)
        z = solve_identity_iso(coords_zip, D, d2,
                               basis_vectors=basis_vectors, verify=False)
        if z is None:
            continue
        g = ghat * z
        if d1.act(g) == Display(d1.frame, d1.mu, d2.phi, check=False):
            return True
        raise AssertionError("linear solution failed exact verification")
    return False


# ---------------------------------------------------------------------------
# K3-type deformations
# ---------------------------------------------------------------------------

def k3_deform(th, d):
    """The deformations of a K3-type orthogonal display along the thickening,
    one per isotropic Hodge-flag lift, as displays over the Witt frame of B;
    each is orthogonal and reduces back to the input."""
    ext = th.source.ext
    out = enumerate_hodge_deformations(th, d, orth=True)
    for dd in out:
        if not verify_orth(dd):
            raise AssertionError("deformation lost orthogonality")
        if not linalg.mat_eq(reduce_witt_display(ext, th.target, dd).phi, d.phi):
            raise AssertionError("deformation does not reduce to the input")
    return out
