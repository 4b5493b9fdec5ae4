"""Clifford algebras of characteristic-2 quadratic spaces.

Monomials e_S are indexed by subsets S of the space basis (bitmasks), with
the exposed ordering sorted by (size, index tuple).  The defining relations
v w + w v = b(v, w) and v^2 = q(v) drive a left-action recursion per
generator, from which products, the induced involutions J_tau, and the
classification operations are computed.

Over Galois fields a table-driven numpy kernel handles the large cases
(dimension up to 8, so 256-dimensional algebras); over function fields the
dimension budget keeps everything object-sized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from . import csa, forms, isometry as iso, linalg as la
from .csa import (
    ORTHOGONAL,
    SYMPLECTIC,
    AlgebraWithInvolution,
    MatrixInvolutionKind,
    KIND_GAMMA,
    SCAlgebra,
    t_alpha_kind,
)
from .errors import (
    DimensionBudgetExceeded,
    NotInterchange,
    NotInvolution,
    NotSplit,
)
from .fields import FieldValue, GaloisField, SquareClass, is_square, square_class
from .forms import QuadSpace, evaluate
from .isometry import Isometry


def _mask_order(n: int) -> list[int]:
    masks = list(range(1 << n))
    masks.sort(key=lambda m: (bin(m).count("1"), _bits(m)))
    return masks


def _bits(mask: int) -> tuple:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


class CliffordAlgebra:
    """C(V) for a regular quadratic space V of dimension n (2^n monomials)."""

    def __init__(self, space: QuadSpace):
        F = space.field
        limit = 8 if isinstance(F, GaloisField) else 4
        if space.dim > limit:
            raise DimensionBudgetExceeded(
                f"Clifford construction capped at dimension {limit} over {F}"
            )
        self.space = space
        self.field = F
        self.n = space.dim
        self.N = 1 << self.n
        self.order = _mask_order(self.n)
        self.position = {m: p for p, m in enumerate(self.order)}
        self._scalgebra: Optional[SCAlgebra] = None
        self._kernel = None

    # --- sparse dict arithmetic (masks -> FieldValue) -------------------

    def unit_elem(self) -> dict:
        return {0: self.field.one}

    def vector_elem(self, v) -> dict:
        out = {}
        for i, c in enumerate(v):
            if not c.is_zero:
                out[1 << i] = c
        return out

    def gen_mul(self, i: int, x: dict) -> dict:
        """Left multiplication v_i * x on a sparse element."""
        V = self.space
        out: dict = {}

        def add(mask, c):
            if mask in out:
                s = out[mask] + c
                if s.is_zero:
                    del out[mask]
                else:
                    out[mask] = s
            elif not c.is_zero:
                out[mask] = c

        for T, c in x.items():
            for t in _bits(T):
                if t >= i:
                    break
                bit = V.gram[i][t]
                if not bit.is_zero:
                    add(T ^ (1 << t), c * bit)
            if (T >> i) & 1:
                qi = V.qvals[i]
                if not qi.is_zero:
                    add(T ^ (1 << i), c * qi)
            else:
                add(T | (1 << i), c)
        return out

    def mono_mul(self, S: int, x: dict) -> dict:
        """e_S * x by applying the generators of S from the highest down."""
        for i in reversed(_bits(S)):
            x = self.gen_mul(i, x)
        return x

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for S, c in x.items():
            part = self.mono_mul(S, y)
            for m, d in part.items():
                s = out.get(m, None)
                v = c * d
                if s is None:
                    if not v.is_zero:
                        out[m] = v
                else:
                    s = s + v
                    if s.is_zero:
                        del out[m]
                    else:
                        out[m] = s
        return out

    # --- position-vector view (exposed basis order) ---------------------

    def to_vec(self, x: dict) -> la.Vec:
        F = self.field
        out = [F.zero] * self.N
        for m, c in x.items():
            out[self.position[m]] = c
        return tuple(out)

    def from_vec(self, v: la.Vec) -> dict:
        return {
            self.order[p]: c for p, c in enumerate(v) if not c.is_zero
        }

    def monomial_label(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "".join(f"v{i}" for i in _bits(mask))

    def to_scalgebra(self) -> SCAlgebra:
        """Structure-constant view (cached); practical for dimension <= 4."""
        if self._scalgebra is None:
            if self.n > 4:
                raise DimensionBudgetExceeded(
                    "structure-constant table capped at space dimension 4"
                )
            table = []
            for S in self.order:
                row = []
                for T in self.order:
                    row.append(self.to_vec(self.mono_mul(S, {T: self.field.one})))
                table.append(row)
            unit = self.to_vec(self.unit_elem())
            labels = [self.monomial_label(m) for m in self.order]
            self._scalgebra = SCAlgebra(
                self.field, table, unit, labels=labels, validate=self.N <= 16
            )
        return self._scalgebra

    def gf_kernel(self):
        if self._kernel is None:
            if not isinstance(self.field, GaloisField):
                raise DimensionBudgetExceeded("numpy kernel needs a Galois field")
            self._kernel = _GFKernel(self)
        return self._kernel


def clifford(V: QuadSpace) -> CliffordAlgebra:
    return CliffordAlgebra(V)


# ------------------------------------------------------------------
# numpy kernel for Galois fields
# ------------------------------------------------------------------


class _GFKernel:
    """Table-driven mod-2^k arithmetic on mask-indexed coefficient vectors."""

    def __init__(self, C: CliffordAlgebra):
        import numpy as np

        self.np = np
        self.C = C
        F = C.field
        self.mul_t, self.inv_t, _ = F.numpy_tables()
        n, N = C.n, C.N
        V = C.space
        gens = []
        for i in range(n):
            M = np.zeros((N, N), dtype=np.uint8)
            for T in range(N):
                for t in _bits(T):
                    if t >= i:
                        break
                    b = V.gram[i][t].raw
                    if b:
                        M[T ^ (1 << t), T] ^= self.mul_t[b, 1]
                if (T >> i) & 1:
                    q = V.qvals[i].raw
                    if q:
                        M[T ^ (1 << i), T] ^= q
                else:
                    M[T | (1 << i), T] ^= 1
            gens.append(M)
        self.gens = gens

    def scale(self, c: int, M):
        if c == 0:
            return self.np.zeros_like(M)
        if c == 1:
            return M.copy()
        return self.mul_t[c, M]

    def matmul(self, A, B):
        # xor-accumulated table product; sizes stay <= 256 here
        np = self.np
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
        for k in range(A.shape[1]):
            col = A[:, k]
            row = B[k, :]
            nz = col.nonzero()[0]
            if nz.size == 0:
                continue
            out[nz, :] ^= self.mul_t[col[nz][:, None], row[None, :]]
        return out

    def j_matrix(self, tau: Isometry):
        """J_tau in mask coordinates: column S is J(e_S)."""
        np = self.np
        C = self.C
        n, N = C.n, C.N
        J = np.zeros((N, N), dtype=np.uint8)
        J[0, 0] = 1
        for i in range(n):
            Ni = np.zeros((N, N), dtype=np.uint8)
            for j in range(n):
                c = tau.matrix[j][i].raw
                if c:
                    Ni ^= self.scale(c, self.gens[j])
            lo = 1 << i
            J[:, lo : 2 * lo] = self.matmul(Ni, J[:, 0:lo])
        return J

    def unit_in_alt(self, J) -> bool:
        """Solvability of (J + I) x = e_0 over the Galois field."""
        np = self.np
        N = J.shape[0]
        A = J.copy()
        A ^= np.eye(N, dtype=np.uint8)
        b = np.zeros(N, dtype=np.uint8)
        b[0] = 1
        # Gaussian elimination
        row = 0
        for col in range(N):
            piv = None
            for r in range(row, N):
                if A[r, col]:
                    piv = r
                    break
            if piv is None:
                continue
            if piv != row:
                A[[row, piv]] = A[[piv, row]]
                b[[row, piv]] = b[[piv, row]]
            inv = self.inv_t[A[row, col]]
            A[row] = self.mul_t[inv, A[row]]
            b[row] = self.mul_t[inv, b[row]]
            nz = A[:, col].nonzero()[0]
            nz = nz[nz != row]
            if nz.size:
                factors = A[nz, col]
                A[nz, :] ^= self.mul_t[factors[:, None], A[row][None, :]]
                b[nz] ^= self.mul_t[factors, b[row]]
            row += 1
            if row == N:
                break
        # consistency: zero rows of A must have zero rhs
        for r in range(N):
            if b[r] and not A[r].any():
                return False
        return True


# ------------------------------------------------------------------
# induced involutions
# ------------------------------------------------------------------


@dataclass(frozen=True)
class InducedInvolution:
    algebra: CliffordAlgebra
    tau: Isometry
    matrix: la.Mat  # position-ordered coordinates

    def apply(self, x: la.Vec) -> la.Vec:
        return la.mat_vec(self.matrix, x)

    def as_algebra_with_involution(self) -> AlgebraWithInvolution:
        return AlgebraWithInvolution(self.algebra.to_scalgebra(), self.matrix, name="J")


def induced_involution(C: CliffordAlgebra, tau: Isometry) -> InducedInvolution:
    """The anti-automorphism of C(V) extending tau: J(e_S) is the reversed
    product of the images tau(v_i)."""
    if tau.space is not C.space and tau.space != C.space:
        raise NotInvolution("isometry acts on a different space")
    if not tau.is_involution:
        raise NotInvolution("inducing map must be an involution")
    F = C.field
    cols_by_mask: dict[int, dict] = {0: C.unit_elem()}
    tau_gens = [C.vector_elem(col) for col in la.transpose(tau.matrix)]
    for mask in range(1, C.N):
        i = mask.bit_length() - 1
        prev = cols_by_mask[mask ^ (1 << i)]
        # J(e_{S u {i}}) = J(v_i) J(e_S) = tau(v_i) * J(e_S)
        acc: dict = {}
        for m, c in tau_gens[i].items():
            part = C.mono_mul(m, prev)
            for mm, d in part.items():
                v = c * d
                s = acc.get(mm)
                s = v if s is None else s + v
                if s.is_zero:
                    acc.pop(mm, None)
                else:
                    acc[mm] = s
        cols_by_mask[mask] = acc
    cols = [C.to_vec(cols_by_mask[C.order[p]]) for p in range(C.N)]
    return InducedInvolution(C, tau, la.transpose(la.mat(cols)))


# ------------------------------------------------------------------
# classification operations
# ------------------------------------------------------------------


def alt_and_sym(a: AlgebraWithInvolution):
    return csa.alt_and_sym(a)


def involution_type(a) -> str:
    """Symplectic iff 1 lies in alt; accepts AlgebraWithInvolution or
    InducedInvolution (the latter uses the numpy kernel over Galois fields)."""
    if isinstance(a, InducedInvolution):
        C = a.algebra
        if isinstance(C.field, GaloisField) and C.n > 4:
            k = C.gf_kernel()
            return SYMPLECTIC if k.unit_in_alt(_mask_matrix(a)) else ORTHOGONAL
        return csa.involution_type(a.as_algebra_with_involution())
    return csa.involution_type(a)


def _mask_matrix(a: InducedInvolution):
    """Position-ordered matrix reindexed to raw mask coordinates (uint8)."""
    import numpy as np

    C = a.algebra
    N = C.N
    out = np.zeros((N, N), dtype=np.uint8)
    for p in range(N):
        for q in range(N):
            out[C.order[p], C.order[q]] = a.matrix[p][q].raw
    return out


def induced_type_fast(C: CliffordAlgebra, tau: Isometry) -> str:
    """1-in-alt test without materializing the object-level J (Galois only)."""
    k = C.gf_kernel()
    J = k.j_matrix(tau)
    return SYMPLECTIC if k.unit_in_alt(J) else ORTHOGONAL


def discriminant(a) -> SquareClass:
    if isinstance(a, InducedInvolution):
        return csa.discriminant(a.as_algebra_with_involution())
    return csa.discriminant(a)


def type_via_fix(V: QuadSpace, tau: Isometry) -> str:
    """Orthogonal iff dim fix = half of dim V (trivial fixed orthogonal summand)."""
    if not tau.is_involution:
        raise NotInvolution("type_via_fix needs an involution")
    return ORTHOGONAL if 2 * iso.fix_subspace(tau).dim == V.dim else SYMPLECTIC


def is_transpose_isomorphic(V: QuadSpace, tau: Isometry) -> bool:
    """dim fix = half dim, and q maps fix into squares.

    Over a perfect field the square condition is automatic; otherwise it
    holds iff every fix basis value is a square and the polar form vanishes
    on the fix space (the cross terms t*b(w_i, w_j) must stay squares for
    every scalar t).
    """
    if not tau.is_involution:
        raise NotInvolution("criterion needs an involution")
    fx = iso.fix_subspace(tau)
    if 2 * fx.dim != V.dim:
        return False
    if isinstance(V.field, GaloisField):
        return True
    basis = fx.basis
    for i, w in enumerate(basis):
        if not is_square(evaluate(V, w)):
            return False
        for w2 in basis[i + 1 :]:
            if not V.bilinear(w, w2).is_zero:
                return False
    return True


def classify_rank2(
    E: QuadSpace, tau: Isometry, budget: int = 20000, degree_bound: int = 4
) -> MatrixInvolutionKind:
    """Gamma for the identity, T_theta(tau) for a reflection, on a split plane."""
    if E.dim != 2:
        raise NotInvolution("rank-2 classification needs a plane")
    if not tau.is_involution:
        raise NotInvolution("need an involution")
    if forms.represents(E, E.field.one, budget=budget, degree_bound=degree_bound) is None:
        raise NotSplit("no witness that the plane represents 1")
    if tau.is_identity:
        return KIND_GAMMA
    fx = iso.fix_subspace(tau)
    u = fx.basis[0]
    qu = evaluate(E, u)
    if qu.is_zero:
        raise NotInvolution("plane involution with isotropic fix line")
    return t_alpha_kind(square_class(qu))


# ------------------------------------------------------------------
# interchange blocks
# ------------------------------------------------------------------


@dataclass(frozen=True)
class InterchangeSplit:
    """Two planes with reflections, plus their generator images in C(A4)."""

    planes: tuple  # ((QuadSpace, Isometry), (QuadSpace, Isometry))
    images: tuple  # ((x1, y1), (x2, y2)) as sparse dicts in C(A4)
    block_basis: tuple  # normalized block basis vectors in V coordinates


_TEMPLATE_CACHE: dict = {}


def _normal_block_template():
    """Generator pairs for the normalized interchange block, found once over
    GF(2) and reused over every field (the block's structure constants are
    prime-field).

    For each J-fixed x with invertible scalar square c, the partner
    conditions J(y) = y + x/c and xy + yx = 1 are affine-linear in y, so
    candidates come from one linear solve plus its kernel; the leftover
    quadratic condition (y^2 scalar) is tested on that small affine space.
    """
    if "t" in _TEMPLATE_CACHE:
        return _TEMPLATE_CACHE["t"]
    from .fields import galois_field

    F = galois_field(1)
    V, tau = _normal_block(F)
    C = clifford(V)
    J = induced_involution(C, tau)
    A = C.to_scalgebra()
    N = C.N
    M = la.mat_add(J.matrix, la.identity(F, N))
    fixb = la.kernel_basis(M)
    xs = []
    for coeffs in itertools.product((0, 1), repeat=len(fixb)):
        if not any(coeffs):
            continue
        v = la.zero_vec(F, N)
        for c, b in zip(coeffs, fixb):
            if c:
                v = la.vec_add(v, b)
        s = A.is_scalar(A.mul_vec(v, v))
        if s is not None and not s.is_zero:
            xs.append((v, s))
    pairs = []
    for xv, c in xs:
        anti = la.mat_add(A.left_mult_matrix(xv), A.right_mult_matrix(xv))
        rows = la.mat(list(M) + list(anti))
        rhs = tuple(la.vec_scale(c.inverse(), xv)) + tuple(A.unit)
        sol = la.solve(rows, rhs)
        if sol is None:
            continue
        ker = la.kernel_basis(rows)
        for coeffs in itertools.product((0, 1), repeat=len(ker)):
            y = sol
            for cc, b in zip(coeffs, ker):
                if cc:
                    y = la.vec_add(y, b)
            sy = A.is_scalar(A.mul_vec(y, y))
            if sy is not None:
                pairs.append((xv, y, c, sy))
    result = None
    for (x1, y1, c1, d1), (x2, y2, c2, d2) in itertools.combinations(pairs, 2):
        if not _commute_vecs(A, (x1, y1), (x2, y2)):
            continue
        if _span_products_vecs(A, x1, y1, x2, y2):
            result = (
                (C.from_vec(x1), C.from_vec(y1), c1, d1),
                (C.from_vec(x2), C.from_vec(y2), c2, d2),
            )
            break
    if result is None:
        raise NotInterchange("no generator template found (invariant violation)")
    _TEMPLATE_CACHE["t"] = result
    return result


def _commute_vecs(A: SCAlgebra, g1, g2) -> bool:
    for a in g1:
        for b in g2:
            if A.mul_vec(a, b) != A.mul_vec(b, a):
                return False
    return True


def _span_products_vecs(A: SCAlgebra, x1, y1, x2, y2) -> bool:
    gens1 = [A.unit, x1, y1, A.mul_vec(x1, y1)]
    gens2 = [A.unit, x2, y2, A.mul_vec(x2, y2)]
    vecs = [A.mul_vec(g1, g2) for g1 in gens1 for g2 in gens2]
    return la.rank(la.mat(vecs)) == A.dim


def _commute(C, g1, g2) -> bool:
    for a in g1:
        for b in g2:
            if C.mul(a, b) != C.mul(b, a):
                return False
    return True


def _span_products(C, A, x1, y1, x2, y2) -> bool:
    gens = {0: C.unit_elem(), 1: x1, 2: y1, 4: x2, 8: y2}
    vecs = []
    for mask in range(16):
        prod = C.unit_elem()
        for b in (1, 2, 4, 8):
            if mask & b:
                prod = C.mul(prod, gens[b])
        vecs.append(C.to_vec(prod))
    return la.rank(la.mat(vecs)) == C.N


def _normal_block(F):
    V = forms.orthogonal_sum(forms.hyperbolic_plane(F), forms.hyperbolic_plane(F))
    one, zero = F.one, F.zero
    M = [
        [one, zero, zero, one],
        [zero, one, zero, zero],
        [zero, one, one, zero],
        [zero, zero, zero, one],
    ]
    return V, iso.isometry(V, M)


def _normalize_interchange(A4: QuadSpace, tau: Isometry) -> la.Mat:
    """Columns (a1, m1, a2, m2): the block in normal form, so that q = 0 on
    all four, pairings b(a_i, m_i) = 1 (others 0), tau(m1) = m1 + a2 and
    tau(m2) = m2 + a1."""
    F = A4.field
    fx = iso.fix_subspace(tau)
    u1, u2 = fx.basis

    def preimage(u):
        cols = [
            la.vec_add(tau.apply(x), x) for x in la.identity(F, 4)
        ]
        lam = la.solve(la.transpose(la.mat(cols)), u)
        w = la.zero_vec(F, 4)
        for c, x in zip(lam, la.identity(F, 4)):
            w = la.vec_add(w, la.vec_scale(c, tuple(x)))
        return w

    p1 = preimage(u1)
    p2 = preimage(u2)
    c = A4.bilinear(u1, p2)
    if c.is_zero:
        raise NotInterchange("degenerate pairing in an interchange block")
    cinv = c.inverse()
    a1 = la.vec_scale(cinv, u1)
    a2 = u2
    m1 = p2
    m2 = la.vec_scale(cinv, p1)
    m1 = la.vec_add(m1, la.vec_scale(evaluate(A4, m1), a1))
    m2 = la.vec_add(m2, la.vec_scale(evaluate(A4, m2), a2))
    m1 = la.vec_add(m1, la.vec_scale(A4.bilinear(m1, m2), a2))
    cols = [a1, m1, a2, m2]
    # exact normal-form checks
    want_gram = forms.symplectic_gram(F, 4)
    for i, x in enumerate(cols):
        if not evaluate(A4, x).is_zero:
            raise NotInterchange("normalization failed: nonzero q value")
        for j, y in enumerate(cols):
            if A4.bilinear(x, y) != want_gram[i][j]:
                raise NotInterchange("normalization failed: pairing mismatch")
    if tau.apply(m1) != la.vec_add(m1, a2) or tau.apply(m2) != la.vec_add(m2, a1):
        raise NotInterchange("normalization failed: wrong tau action")
    return la.transpose(la.mat(cols))


def split_interchange_block(A4: QuadSpace, tau: Isometry) -> InterchangeSplit:
    """Two planes with trivial-spinor-norm reflections whose Clifford
    algebras embed as commuting J-stable subalgebras spanning C(A4).

    The block is normalized to the hyperbolic double plane with cross
    action; the generator template is found there once over the prime field
    and transported back, then every claim is verified in C(A4).
    """
    if A4.dim != 4:
        raise NotInterchange("interchange blocks have dimension 4")
    if not tau.is_involution or not iso.is_interchange(tau):
        raise NotInterchange("restriction is not an interchange isometry")
    F = A4.field
    P = _normalize_interchange(A4, tau)
    (x1, y1, c1raw, d1raw), (x2, y2, c2raw, d2raw) = _normal_block_template()
    C = clifford(A4)
    J = induced_involution(C, tau)

    def lift(elem: dict) -> dict:
        # rewrite a normal-basis monomial combination through P; template
        # coefficients are prime-field, i.e. always 1 on stored entries
        total: dict = {}
        for mask in elem:
            prod = C.unit_elem()
            for i in _bits(mask):
                col = tuple(P[r][i] for r in range(4))
                prod = C.mul(prod, C.vector_elem(col))
            total = _add_elems(C, total, prod)
        return total

    X1, Y1, X2, Y2 = lift(x1), lift(y1), lift(x2), lift(y2)
    A = C.to_scalgebra()

    def scal(elem: dict) -> FieldValue:
        s = A.is_scalar(C.to_vec(elem))
        if s is None:
            raise NotInterchange("template product failed to be scalar")
        return s

    c1 = scal(C.mul(X1, X1))
    d1 = scal(C.mul(Y1, Y1))
    c2 = scal(C.mul(X2, X2))
    d2 = scal(C.mul(Y2, Y2))
    for c in (c1, c2):
        if c.is_zero or not is_square(c):
            raise NotInterchange("reflection vector has nontrivial spinor norm")
    pair1 = scal(
        _add_elems(C, C.mul(X1, Y1), C.mul(Y1, X1))
    )
    pair2 = scal(_add_elems(C, C.mul(X2, Y2), C.mul(Y2, X2)))
    if pair1 != F.one or pair2 != F.one:
        raise NotInterchange("pairing of lifted generators is not 1")
    if not _commute(C, [X1, Y1], [X2, Y2]):
        raise NotInterchange("lifted subalgebras do not centralize each other")
    if not _span_products(C, A, X1, Y1, X2, Y2):
        raise NotInterchange("lifted subalgebras do not span")
    # J-compatibility: J(x) = x, J(y) = y + x / q(x)
    for X, Y, c in ((X1, Y1, c1), (X2, Y2, c2)):
        vx, vy = C.to_vec(X), C.to_vec(Y)
        if J.apply(vx) != vx:
            raise NotInterchange("J does not fix a reflection generator")
        want = la.vec_add(vy, la.vec_scale(c.inverse(), vx))
        if J.apply(vy) != want:
            raise NotInterchange("J acts wrongly on a plane generator")
    E1 = forms.plane(F, c1, d1)
    E2 = forms.plane(F, c2, d2)
    t1 = iso.reflection(E1, (F.one, F.zero))
    t2 = iso.reflection(E2, (F.one, F.zero))
    return InterchangeSplit(
        planes=((E1, t1), (E2, t2)),
        images=((X1, Y1), (X2, Y2)),
        block_basis=tuple(la.transpose(P)),
    )


def _add_elems(C: CliffordAlgebra, a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        s = c if s is None else s + c
        if s.is_zero:
            out.pop(m, None)
        else:
            out[m] = s
    return out
