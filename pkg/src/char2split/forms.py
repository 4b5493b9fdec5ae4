"""Symmetric bilinear forms and quadratic spaces in characteristic 2.

A quadratic space stores its polar Gram matrix (which is alternating in
characteristic 2) together with the q-values of the chosen basis; the two
determine q on every vector.  All maps are matrices in that basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import linalg as la
from .errors import (
    AlternatingForm,
    DegenerateForm,
    DimensionMismatch,
)
from .fields import FieldValue, GaloisField, RationalFunctionField


@dataclass(frozen=True)
class SymBilForm:
    field: object
    gram: la.Mat

    def __post_init__(self):
        n, m = la.dims(self.gram)
        if n != m:
            raise DimensionMismatch("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise DimensionMismatch("Gram matrix must be symmetric")

    @property
    def n(self) -> int:
        return len(self.gram)

    def apply(self, x: la.Vec, y: la.Vec) -> FieldValue:
        acc = None
        g = self.gram
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            row = g[i]
            for j, yj in enumerate(y):
                if yj.is_zero or row[j].is_zero:
                    continue
                term = xi * row[j] * yj
                acc = term if acc is None else acc + term
        return self.field.zero if acc is None else acc


def is_alternating(b: SymBilForm) -> bool:
    """True iff b(v, v) = 0 for all v; in char 2 this is a zero diagonal."""
    return all(b.gram[i][i].is_zero for i in range(b.n))


@dataclass(frozen=True)
class QuadSpace:
    field: object
    polar: SymBilForm
    qvals: la.Vec

    def __post_init__(self):
        if len(self.qvals) != self.polar.n:
            raise DimensionMismatch("qvals length must match the polar form")
        if not is_alternating(self.polar):
            raise AlternatingForm("the polar form of a quadratic form is alternating")

    @property
    def dim(self) -> int:
        return self.polar.n

    @property
    def gram(self) -> la.Mat:
        return self.polar.gram

    @property
    def is_regular(self) -> bool:
        return la.is_invertible(self.polar.gram)

    def bilinear(self, x: la.Vec, y: la.Vec) -> FieldValue:
        return self.polar.apply(x, y)

    def __str__(self):
        qs = ",".join(str(q) for q in self.qvals)
        return f"QuadSpace(dim={self.dim}, q=[{qs}])"


def quad_space(field, polar_gram, qvals) -> QuadSpace:
    g = la.mat([[field.val(x) for x in row] for row in polar_gram])
    q = tuple(field.val(x) for x in qvals)
    return QuadSpace(field, SymBilForm(field, g), q)


def plane(field, c, d) -> QuadSpace:
    """The quadratic plane with symplectic basis values q(u)=c, q(v)=d."""
    one, zero = field.one, field.zero
    return QuadSpace(
        field,
        SymBilForm(field, ((zero, one), (one, zero))),
        (field.val(c), field.val(d)),
    )


def hyperbolic_plane(field) -> QuadSpace:
    return plane(field, 0, 0)


def orthogonal_sum(*spaces: QuadSpace) -> QuadSpace:
    F = spaces[0].field
    n = sum(V.dim for V in spaces)
    rows = []
    qvals = []
    off = 0
    gram = [[F.zero] * n for _ in range(n)]
    for V in spaces:
        for i in range(V.dim):
            for j in range(V.dim):
                gram[off + i][off + j] = V.gram[i][j]
        qvals.extend(V.qvals)
        off += V.dim
    return QuadSpace(F, SymBilForm(F, la.mat(gram)), tuple(qvals))


def evaluate(V: QuadSpace, x: la.Vec) -> FieldValue:
    """q(x) from the stored basis data."""
    if len(x) != V.dim:
        raise DimensionMismatch(f"vector of length {len(x)} in dim {V.dim}")
    F = V.field
    acc = F.zero
    for i, xi in enumerate(x):
        if not xi.is_zero:
            acc = acc + xi * xi * V.qvals[i]
    for i in range(V.dim):
        if x[i].is_zero:
            continue
        for j in range(i + 1, V.dim):
            if not x[j].is_zero:
                acc = acc + x[i] * x[j] * V.gram[i][j]
    return acc


def transport(V: QuadSpace, P: la.Mat) -> QuadSpace:
    """The same space in the basis given by the columns of P.

    The polar Gram alone does not determine q in characteristic 2, so the
    new q-values are recomputed as q(P e_i).
    """
    cols = la.transpose(P)
    new_gram = la.mat_mul(la.transpose(P), la.mat_mul(V.gram, P))
    new_q = tuple(evaluate(V, c) for c in cols)
    return QuadSpace(V.field, SymBilForm(V.field, new_gram), new_q)


@dataclass(frozen=True)
class Subspace:
    space: QuadSpace
    basis: tuple

    def __post_init__(self):
        if self.basis and la.rank(la.mat(self.basis)) != len(self.basis):
            raise DimensionMismatch("subspace basis must be independent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduced(self) -> tuple:
        return tuple(la.row_space_basis(self.basis))

    def contains(self, v: la.Vec) -> bool:
        return la.in_span(list(self.basis), v) is not None

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.space is other.space and self.reduced() == other.reduced()


def subspace(V: QuadSpace, vectors) -> Subspace:
    return Subspace(V, tuple(la.row_space_basis([tuple(v) for v in vectors])))


# ------------------------------------------------------------------
# diagonalization and symplectic bases
# ------------------------------------------------------------------


def diagonalize(b: SymBilForm) -> tuple[la.Mat, la.Vec]:
    """Orthogonal basis change P with P^t G P diagonal and nonzero.

    Characteristic-2 Gram-Schmidt.  When the residual goes alternating while
    vectors remain, the last placed anisotropic vector is pulled back in and
    mixed with a hyperbolic pair, which re-creates anisotropic diagonal
    entries (the standard diagonalizability argument, done constructively).
    """
    F = b.field
    n = b.n
    if not la.is_invertible(b.gram):
        raise DegenerateForm("form must be nondegenerate")
    if is_alternating(b):
        raise AlternatingForm("alternating forms are not diagonalizable")

    def bil(x, y):
        return b.apply(x, y)

    placed: list[la.Vec] = []
    current = [tuple(r) for r in la.identity(F, n)]
    while current:
        an = next((v for v in current if not bil(v, v).is_zero), None)
        if an is not None:
            current.remove(an)
            c = bil(an, an)
            current = [
                la.vec_add(w, la.vec_scale(bil(w, an) / c, an)) for w in current
            ]
            current = [w for w in current if not la.vec_is_zero(w)]
            placed.append(an)
            continue
        # residual alternating: mix the last anisotropic vector back in
        if not placed:
            raise AlternatingForm("alternating forms are not diagonalizable")
        v = placed.pop()
        pair = None
        for x, y in itertools.combinations(current, 2):
            if not bil(x, y).is_zero:
                pair = (x, y)
                break
        if pair is None:
            raise DegenerateForm("degenerate residual block")
        u, w = pair
        current.remove(u)
        current.remove(w)
        current = [la.vec_add(v, u), la.vec_add(v, w), w] + current
        # re-enter the loop; v+u is anisotropic since b(v+u, v+u) = b(v,v)
    P = la.transpose(la.mat(placed))
    D = la.mat_mul(la.transpose(P), la.mat_mul(b.gram, P))
    for i in range(n):
        for j in range(n):
            if i != j and not D[i][j].is_zero:
                raise AssertionError("diagonalization left off-diagonal residue")
    diag = tuple(D[i][i] for i in range(n))
    if any(d.is_zero for d in diag):
        raise DegenerateForm("zero diagonal entry after reduction")
    return P, diag


def symplectic_basis(V: QuadSpace) -> la.Mat:
    """Basis change P with polar Gram in standard [[0,1],[1,0]] blocks."""
    if not V.is_regular:
        raise DegenerateForm("space must be regular")
    F = V.field
    n = V.dim

    def bil(x, y):
        return V.bilinear(x, y)

    pairs: list[la.Vec] = []
    current = [tuple(r) for r in la.identity(F, n)]
    while current:
        u = current[0]
        v = next((w for w in current[1:] if not bil(u, w).is_zero), None)
        if v is None:
            raise DegenerateForm("radical vector found in a regular space")
        v = la.vec_scale(bil(u, v).inverse(), v)
        rest = []
        for w in current:
            if w is u or w is v:
                continue
            w2 = la.vec_add(
                w, la.vec_add(la.vec_scale(bil(w, v), u), la.vec_scale(bil(w, u), v))
            )
            if not la.vec_is_zero(w2):
                rest.append(w2)
        pairs.extend([u, v])
        current = rest
    return la.transpose(la.mat(pairs))


def symplectic_gram(F, n: int) -> la.Mat:
    blocks = [[F.zero] * n for _ in range(n)]
    for i in range(0, n, 2):
        blocks[i][i + 1] = F.one
        blocks[i + 1][i] = F.one
    return la.mat(blocks)


# ------------------------------------------------------------------
# representation search
# ------------------------------------------------------------------


def represents(
    V: QuadSpace, c, budget: int = 200000, degree_bound: int = 8
) -> Optional[la.Vec]:
    """A vector x with q(x) = c, or None if not found within the budget.

    Exhaustive over Galois fields (lexicographic), graded by coefficient
    degree over function fields: poly vectors x and scalars s are searched
    with q(x) = c * s^2, and x/s is returned.
    """
    F = V.field
    c = F.val(c)
    n = V.dim
    if isinstance(F, GaloisField):
        count = 0
        for raws in itertools.product(range(F.order), repeat=n):
            count += 1
            if count > budget:
                return None
            x = tuple(F.val(r) for r in raws)
            if la.vec_is_zero(x):
                continue
            if evaluate(V, x) == c:
                return x
        return None
    # function field: graded search over polynomial coordinates
    gf = F.base
    count = 0
    for deg in range(degree_bound + 1):
        polys = _polys_up_to(gf, deg)
        for sraw in polys:
            if not sraw:
                continue
            s = F.val((sraw, (1,)))
            target = c * s * s
            for coords in itertools.product(polys, repeat=n):
                count += 1
                if count > budget:
                    return None
                x = tuple(F.val((p, (1,))) for p in coords)
                if la.vec_is_zero(x):
                    continue
                if evaluate(V, x) == target:
                    sinv = s.inverse()
                    return tuple(xi * sinv for xi in x)
    return None


def _polys_up_to(gf, deg: int) -> list:
    out = []
    for coeffs in itertools.product(range(gf.order), repeat=deg + 1):
        p = tuple(coeffs)
        while p and p[-1] == 0:
            p = p[:-1]
        out.append(p)
    seen = set()
    uniq = []
    for p in out:
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    return uniq


def orthogonal_complement(V: QuadSpace, S: Subspace) -> Subspace:
    """{x : b(x, s) = 0 for all s in S}."""
    if S.dim == 0:
        return subspace(V, la.identity(V.field, V.dim))
    rows = [la.mat_vec(V.gram, s) for s in S.basis]
    return subspace(V, la.kernel_basis(la.mat(rows)))


def radical(V: QuadSpace) -> Subspace:
    return subspace(V, la.kernel_basis(V.gram))


def restrict_space(V: QuadSpace, basis) -> QuadSpace:
    """The quadratic space structure induced on the span of the given basis."""
    basis = [tuple(v) for v in basis]
    F = V.field
    g = la.mat(
        [[V.bilinear(x, y) for y in basis] for x in basis]
    )
    q = tuple(evaluate(V, x) for x in basis)
    return QuadSpace(F, SymBilForm(F, g), q)
