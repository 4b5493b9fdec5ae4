"""Involutory isometries of quadratic spaces and their Wiitala decompositions.

The decomposition splits (V, tau) into a fixed summand W, reflection planes,
and 4-dimensional interchange blocks, pairwise orthogonal, with tau acting
componentwise.  For tau != id the output is pure: reflection planes and
interchange blocks never co-occur.

The construction works on S = image(tau + id), which is contained in
fix(V, tau) and equals the radical of the polar form restricted to the fix
space.  Extracting a reflection plane along an anisotropic u in S removes
the hyperplane S cap w^perp (w a preimage of u), so the reflectional loop
chooses u by a one-step lookahead to keep anisotropic vectors available;
a pure decomposition exists by the underlying decomposition theorem, so a
dead end is an invariant violation and raises.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from . import forms, linalg as la
from .errors import (
    DegenerateForm,
    IsotropicVector,
    MixedDecomposition,
    NotInvolution,
    WrongDimension,
)
from .fields import FieldValue, GaloisField, SquareClass, square_class
from .forms import QuadSpace, Subspace, evaluate, subspace

KIND_IDENTITY = "identity"
KIND_REFLECTIONAL = "reflectional"
KIND_INTERCHANGING = "interchanging"


@dataclass(frozen=True)
class Isometry:
    space: QuadSpace
    matrix: la.Mat

    def apply(self, v: la.Vec) -> la.Vec:
        return la.mat_vec(self.matrix, v)

    def compose(self, other: "Isometry") -> "Isometry":
        return Isometry(self.space, la.mat_mul(self.matrix, other.matrix))

    def inverse(self) -> "Isometry":
        inv = la.mat_inv(self.matrix)
        if inv is None:
            raise DegenerateForm("isometry matrix not invertible")
        return Isometry(self.space, inv)

    @property
    def is_involution(self) -> bool:
        sq = la.mat_mul(self.matrix, self.matrix)
        return la.mat_eq(sq, la.identity(self.space.field, self.space.dim))

    @property
    def is_identity(self) -> bool:
        return la.mat_eq(self.matrix, la.identity(self.space.field, self.space.dim))


def isometry(space: QuadSpace, matrix, validate: bool = True) -> Isometry:
    M = la.mat([[space.field.val(x) for x in row] for row in matrix])
    if validate:
        _check_isometry(space, M)
    return Isometry(space, M)


def _check_isometry(V: QuadSpace, M: la.Mat):
    cols = la.transpose(M)
    if len(cols) != V.dim:
        raise WrongDimension(f"matrix size {la.dims(M)} on dim {V.dim}")
    for j, c in enumerate(cols):
        if evaluate(V, c) != V.qvals[j]:
            raise DegenerateForm("matrix does not preserve q on the basis")
    G2 = la.mat_mul(la.transpose(M), la.mat_mul(V.gram, M))
    if not la.mat_eq(G2, V.gram):
        raise DegenerateForm("matrix does not preserve the polar form")


def identity_isometry(V: QuadSpace) -> Isometry:
    return Isometry(V, la.identity(V.field, V.dim))


def reflection(V: QuadSpace, u) -> Isometry:
    """tau_u(v) = v + (b(v,u)/q(u)) u along an anisotropic u."""
    u = tuple(V.field.val(x) for x in u)
    qu = evaluate(V, u)
    if qu.is_zero:
        raise IsotropicVector("reflections need q(u) != 0")
    inv = qu.inverse()
    n = V.dim
    cols = []
    for j in range(n):
        e = tuple(
            V.field.one if i == j else V.field.zero for i in range(n)
        )
        f = V.bilinear(e, u) * inv
        cols.append(la.vec_add(e, la.vec_scale(f, u)))
    return Isometry(V, la.transpose(la.mat(cols)))


def _require_involution(tau: Isometry):
    if not tau.is_involution:
        raise NotInvolution("isometry must square to the identity")


def fix_subspace(tau: Isometry) -> Subspace:
    """Kernel of tau + id."""
    V = tau.space
    M = la.mat_add(tau.matrix, la.identity(V.field, V.dim))
    return subspace(V, la.kernel_basis(M))


def image_subspace(tau: Isometry) -> Subspace:
    V = tau.space
    M = la.mat_add(tau.matrix, la.identity(V.field, V.dim))
    return subspace(V, la.column_space_basis(M))


def is_interchange(tau: Isometry) -> bool:
    V = tau.space
    if V.dim != 4:
        raise WrongDimension("interchange isometries live on dimension 4")
    _require_involution(tau)
    fx = fix_subspace(tau)
    if fx.dim != 2:
        return False
    return _totally_isotropic(V, fx.basis)


def _totally_isotropic(V: QuadSpace, basis) -> bool:
    for i, x in enumerate(basis):
        if not evaluate(V, x).is_zero:
            return False
        for y in basis[i + 1 :]:
            if not V.bilinear(x, y).is_zero:
                return False
    return True


# ------------------------------------------------------------------
# Wiitala decomposition
# ------------------------------------------------------------------


@dataclass(frozen=True)
class WiitalaDecomposition:
    space: QuadSpace
    W: Subspace
    planes: tuple  # of (Subspace, reflection vector u)
    blocks: tuple  # of Subspace, dim 4 each
    kind: str

    def components(self) -> Iterator[tuple]:
        if self.W.dim:
            yield ("fixed", self.W.basis)
        for pl, _u in self.planes:
            yield ("plane", pl.basis)
        for bl in self.blocks:
            yield ("block", bl.basis)


class _Chain:
    """Working state: a tau-invariant regular subspace given by a basis."""

    def __init__(self, tau: Isometry):
        self.tau = tau
        self.V = tau.space
        self.F = tau.space.field
        self.basis = [tuple(r) for r in la.identity(self.F, self.V.dim)]

    def tau_plus_id(self, x: la.Vec) -> la.Vec:
        return la.vec_add(self.tau.apply(x), x)

    def image_basis(self) -> list:
        vs = [self.tau_plus_id(x) for x in self.basis]
        return la.row_space_basis(vs)

    def preimage(self, u: la.Vec) -> la.Vec:
        """Some w in the current subspace with (tau+id) w = u."""
        cols = [self.tau_plus_id(x) for x in self.basis]
        A = la.transpose(la.mat(cols))
        lam = la.solve(A, u)
        if lam is None:
            raise AssertionError("no preimage inside the invariant subspace")
        w = la.zero_vec(self.F, self.V.dim)
        for c, x in zip(lam, self.basis):
            w = la.vec_add(w, la.vec_scale(c, x))
        return w

    def shrink_orthogonal(self, removed: list):
        rows = [la.mat_vec(self.V.gram, r) for r in removed]
        ker = la.kernel_basis(la.mat(rows))
        # intersect the complement with the current subspace
        cur = la.row_space_basis(self.basis)
        self.basis = la.intersect_spans(ker, cur)


def _anisotropic_candidates(F, S: list, V: QuadSpace) -> Iterator[la.Vec]:
    """Deterministic stream of anisotropic vectors in span(S)."""
    if isinstance(F, GaloisField) and F.order ** len(S) <= 4096:
        for coeffs in itertools.product(range(F.order), repeat=len(S)):
            if all(c == 0 for c in coeffs):
                continue
            v = la.zero_vec(F, V.dim)
            for c, s in zip(coeffs, S):
                if c:
                    v = la.vec_add(v, la.vec_scale(F.val(c), s))
            if not evaluate(V, v).is_zero:
                yield v
        return
    lams = _scalar_samples(F)
    for s in S:
        if not evaluate(V, s).is_zero:
            yield s
    for i, j in itertools.combinations(range(len(S)), 2):
        for lam in lams:
            v = la.vec_add(S[i], la.vec_scale(lam, S[j]))
            if not evaluate(V, v).is_zero:
                yield v
    for combo in itertools.combinations(range(len(S)), 3):
        for lam in lams:
            v = S[combo[0]]
            v = la.vec_add(v, la.vec_scale(lam, S[combo[1]]))
            v = la.vec_add(v, S[combo[2]])
            if not evaluate(V, v).is_zero:
                yield v


def _scalar_samples(F) -> list:
    if isinstance(F, GaloisField):
        return [F.val(r) for r in range(1, F.order)]
    t = F.t
    one = F.one
    out = [one, t, t + one, t * t, t * t + one, t * t + t, t * t + t + one]
    return out


def wiitala_decompose(tau: Isometry) -> WiitalaDecomposition:
    """Pure orthogonal decomposition of (V, tau) for an involution tau."""
    _require_involution(tau)
    V = tau.space
    if not V.is_regular:
        raise DegenerateForm("space must be regular")
    F = V.field
    chain = _Chain(tau)
    S = chain.image_basis()
    if not S:
        return WiitalaDecomposition(
            V, subspace(V, chain.basis), (), (), KIND_IDENTITY
        )
    reflectional = any(not evaluate(V, s).is_zero for s in S)
    planes: list = []
    blocks: list = []
    while S:
        if reflectional:
            u, w = _pick_reflection(chain, S)
            planes.append((subspace(V, [u, w]), u))
            chain.shrink_orthogonal([u, w])
        else:
            quad = _pick_block(chain, S)
            blocks.append(subspace(V, quad))
            chain.shrink_orthogonal(quad)
        S = chain.image_basis()
        if not reflectional and any(not evaluate(V, s).is_zero for s in S):
            raise MixedDecomposition("anisotropic residue in an interchanging run")
    W = subspace(V, chain.basis)
    kind = KIND_REFLECTIONAL if reflectional else KIND_INTERCHANGING
    return WiitalaDecomposition(V, W, tuple(planes), tuple(blocks), kind)


def _pick_reflection(chain: _Chain, S: list) -> tuple[la.Vec, la.Vec]:
    V = chain.V
    for u in _anisotropic_candidates(chain.F, S, V):
        w = chain.preimage(u)
        # residual image space after removing the plane along u
        functional = [V.bilinear(s, w) for s in S]
        incl = [s for s, f in zip(S, functional) if f.is_zero]
        rest = la.row_space_basis(
            incl
            + [
                la.vec_add(
                    la.vec_scale(functional[j], S[i]),
                    la.vec_scale(functional[i], S[j]),
                )
                for i in range(len(S))
                for j in range(i + 1, len(S))
            ]
        )
        if not rest or any(not evaluate(V, s).is_zero for s in rest):
            return u, w
    raise MixedDecomposition("no viable reflection vector; decomposition impure")


def _pick_block(chain: _Chain, S: list) -> list:
    V = chain.V
    u1 = S[0]
    w1 = chain.preimage(u1)
    u2 = next((s for s in S if not V.bilinear(s, w1).is_zero), None)
    if u2 is None:
        raise MixedDecomposition("no partner for an interchange block")
    w2 = chain.preimage(u2)
    return [u1, w1, u2, w2]


def kind_of(tau: Isometry) -> str:
    """Kind via the radical R of the polar form restricted to fix(V, tau)."""
    _require_involution(tau)
    if tau.is_identity:
        return KIND_IDENTITY
    V = tau.space
    fx = fix_subspace(tau)
    G = la.mat([[V.bilinear(x, y) for y in fx.basis] for x in fx.basis])
    ker = la.kernel_basis(G)
    R = []
    for k in ker:
        v = la.zero_vec(V.field, V.dim)
        for c, x in zip(k, fx.basis):
            v = la.vec_add(v, la.vec_scale(c, x))
        R.append(v)
    if not R:
        raise DegenerateForm("involution != id with zero radical on fix")
    # q restricted to R is additive (R is b-orthogonal to fix), so a basis test decides
    if any(not evaluate(V, r).is_zero for r in R):
        return KIND_REFLECTIONAL
    return KIND_INTERCHANGING


def spinor_norm(tau: Isometry) -> SquareClass:
    """Product of square classes q(u_i) over the reflection components.

    Identity and interchange components contribute the trivial class, so the
    value is computed from any Wiitala decomposition; independence from the
    decomposition is enforced by tests.
    """
    dec = wiitala_decompose(tau)
    F = tau.space.field
    acc = F.one
    for _pl, u in dec.planes:
        acc = acc * evaluate(tau.space, u)
    return square_class(acc)


# ------------------------------------------------------------------
# validation and helpers
# ------------------------------------------------------------------


def restrict(tau: Isometry, basis) -> tuple[QuadSpace, Isometry]:
    """(space, matrix) of tau restricted to an invariant subspace."""
    basis = [tuple(v) for v in basis]
    sub = forms.restrict_space(tau.space, basis)
    A = la.transpose(la.mat(basis))
    cols = []
    for x in basis:
        lam = la.solve(A, tau.apply(x))
        if lam is None:
            raise DegenerateForm("subspace is not tau-invariant")
        cols.append(lam)
    return sub, Isometry(sub, la.transpose(la.mat(cols)))


def check_decomposition(tau: Isometry, dec: WiitalaDecomposition) -> list[str]:
    """All violated post-conditions of a Wiitala decomposition (empty = valid)."""
    V = tau.space
    F = V.field
    problems: list[str] = []
    comps = list(dec.components())
    all_vecs = [v for _, basis in comps for v in basis]
    if len(all_vecs) != V.dim or la.rank(la.mat(all_vecs)) != V.dim:
        problems.append("components do not span V")
        return problems
    for (k1, b1), (k2, b2) in itertools.combinations(comps, 2):
        for x in b1:
            for y in b2:
                if not V.bilinear(x, y).is_zero:
                    problems.append(f"components {k1}/{k2} not orthogonal")
    for x in dec.W.basis:
        if tau.apply(x) != x:
            problems.append("tau not identity on W")
    for pl, u in dec.planes:
        if pl.dim != 2:
            problems.append("plane of wrong dimension")
            continue
        sub, taup = restrict(tau, pl.basis)
        if not sub.is_regular:
            problems.append("plane not regular")
        qu = evaluate(V, u)
        if qu.is_zero or not pl.contains(u):
            problems.append("reflection vector invalid")
            continue
        coords = la.in_span(list(pl.basis), u)
        refl = reflection(sub, tuple(coords))
        if not la.mat_eq(refl.matrix, taup.matrix):
            problems.append("plane restriction is not the stated reflection")
    for bl in dec.blocks:
        if bl.dim != 4:
            problems.append("block of wrong dimension")
            continue
        sub, taub = restrict(tau, bl.basis)
        if not sub.is_regular:
            problems.append("block not regular")
        if not is_interchange(taub):
            problems.append("block restriction is not an interchange")
    if dec.planes and dec.blocks:
        problems.append("impure decomposition")
    if dec.kind == KIND_IDENTITY and (dec.planes or dec.blocks):
        problems.append("identity kind with moving parts")
    if dec.kind == KIND_REFLECTIONAL and not dec.planes:
        problems.append("reflectional kind without planes")
    if dec.kind == KIND_INTERCHANGING and not dec.blocks:
        problems.append("interchanging kind without blocks")
    # exact reconstruction: tau P = P blockdiag(restrictions)
    P = la.transpose(la.mat(all_vecs))
    n = V.dim
    R = [[F.zero] * n for _ in range(n)]
    off = 0
    for _, basis in comps:
        _sub, taur = restrict(tau, basis)
        k = len(basis)
        for i in range(k):
            for j in range(k):
                R[off + i][off + j] = taur.matrix[i][j]
        off += k
    lhs = la.mat_mul(tau.matrix, P)
    rhs = la.mat_mul(P, la.mat(R))
    if not la.mat_eq(lhs, rhs):
        problems.append("reconstruction mismatch")
    return problems


def orthogonal_sum_isometry(parts: list[tuple[QuadSpace, Isometry]]) -> Isometry:
    """Block-diagonal isometry on the orthogonal sum of the given spaces."""
    V = forms.orthogonal_sum(*[sp for sp, _ in parts])
    F = V.field
    n = V.dim
    M = [[F.zero] * n for _ in range(n)]
    off = 0
    for sp, taup in parts:
        k = sp.dim
        for i in range(k):
            for j in range(k):
                M[off + i][off + j] = taup.matrix[i][j]
        off += k
    return Isometry(V, la.mat(M))


def conjugate(tau: Isometry, g: Isometry) -> Isometry:
    """g tau g^{-1} as an isometry of the same space."""
    gi = g.inverse()
    return Isometry(tau.space, la.mat_mul(g.matrix, la.mat_mul(tau.matrix, gi.matrix)))
