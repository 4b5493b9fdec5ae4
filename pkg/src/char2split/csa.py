"""Structure-constant central simple algebras with involution.

Elements are coefficient vectors over the field; an algebra stores its full
multiplication table (entry [i][j] is the vector e_i * e_j) plus a sparse
view used by the product kernels.  Involutions are matrices acting on
coefficient vectors.  Quaternions use the characteristic-2 symbol
presentation [a, b): i^2 + i = a, j^2 = b, ji = ij + j, k = ij.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import forms, linalg as la
from .errors import (
    DegenerateForm,
    FieldMismatch,
    NoInvertibleAlternating,
    NotSimpleError,
    SymplecticInvolution,
    ZeroAlpha,
    ZeroParameter,
)
from .fields import FieldValue, GaloisField, SquareClass, square_class
from .forms import QuadSpace, SymBilForm, evaluate


class SCAlgebra:
    """Associative unital algebra given by structure constants."""

    def __init__(self, field, table, unit, labels=None, validate=True, rng_seed=0):
        self.field = field
        self.table = tuple(tuple(tuple(v) for v in row) for row in table)
        self.dim = len(self.table)
        self.unit = tuple(unit)
        self.labels = tuple(labels) if labels else tuple(
            f"e{i}" for i in range(self.dim)
        )
        self.sparse = tuple(
            tuple(
                tuple((k, c) for k, c in enumerate(vec) if not c.is_zero)
                for vec in row
            )
            for row in self.table
        )
        if validate:
            self._validate(rng_seed)

    def _validate(self, rng_seed: int):
        d = self.dim
        for i in range(d):
            ei = self.basis_vector(i)
            if self.mul_vec(self.unit, ei) != ei or self.mul_vec(ei, self.unit) != ei:
                raise NotSimpleError("unit law fails on the basis")
        triples: Sequence
        if d <= 16:
            triples = itertools.product(range(d), repeat=3)
        else:
            rng = random.Random(rng_seed)
            triples = [
                (rng.randrange(d), rng.randrange(d), rng.randrange(d))
                for _ in range(300)
            ]
        for i, j, k in triples:
            left = self.mul_vec(self.table[i][j], self.basis_vector(k))
            right = self.mul_vec(self.basis_vector(i), self.table[j][k])
            if left != right:
                raise NotSimpleError(f"associativity fails at ({i},{j},{k})")

    def basis_vector(self, i: int) -> la.Vec:
        F = self.field
        return tuple(F.one if j == i else F.zero for j in range(self.dim))

    def zero(self) -> la.Vec:
        return la.zero_vec(self.field, self.dim)

    def scalar(self, c) -> la.Vec:
        c = self.field.val(c)
        return tuple(c * u for u in self.unit)

    def mul_vec(self, x: la.Vec, y: la.Vec) -> la.Vec:
        acc = [self.field.zero] * self.dim
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            srow = self.sparse[i]
            for j, yj in enumerate(y):
                if yj.is_zero:
                    continue
                c = xi * yj
                for k, tv in srow[j]:
                    acc[k] = acc[k] + c * tv
        return tuple(acc)

    def power(self, x: la.Vec, n: int) -> la.Vec:
        out = self.unit
        for _ in range(n):
            out = self.mul_vec(out, x)
        return out

    def left_mult_matrix(self, x: la.Vec) -> la.Mat:
        cols = [self.mul_vec(x, self.basis_vector(j)) for j in range(self.dim)]
        return la.transpose(la.mat(cols))

    def right_mult_matrix(self, x: la.Vec) -> la.Mat:
        cols = [self.mul_vec(self.basis_vector(j), x) for j in range(self.dim)]
        return la.transpose(la.mat(cols))

    def is_invertible_element(self, x: la.Vec) -> bool:
        return la.is_invertible(self.left_mult_matrix(x))

    def is_scalar(self, x: la.Vec) -> Optional[FieldValue]:
        coords = la.in_span([self.unit], x)
        if coords is None:
            return None
        return coords[0] if coords else self.field.zero

    def show(self, x: la.Vec) -> str:
        parts = [
            f"{c}*{self.labels[i]}" if str(c) != "1" else self.labels[i]
            for i, c in enumerate(x)
            if not c.is_zero
        ]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AlgebraWithInvolution:
    algebra: SCAlgebra
    inv: la.Mat
    name: str = ""

    def __post_init__(self):
        A = self.algebra
        d = A.dim
        sq = la.mat_mul(self.inv, self.inv)
        if not la.mat_eq(sq, la.identity(A.field, d)):
            raise NotSimpleError("involution must square to the identity")
        if self.apply(A.unit) != A.unit:
            raise NotSimpleError("involution must fix the unit")
        pairs: Sequence
        if d <= 16:
            pairs = itertools.product(range(d), repeat=2)
        else:
            rng = random.Random(1)
            pairs = [(rng.randrange(d), rng.randrange(d)) for _ in range(200)]
        for i, j in pairs:
            lhs = self.apply(A.table[i][j])
            rhs = A.mul_vec(self.apply(A.basis_vector(j)), self.apply(A.basis_vector(i)))
            if lhs != rhs:
                raise NotSimpleError("involution is not an anti-homomorphism")

    def apply(self, x: la.Vec) -> la.Vec:
        return la.mat_vec(self.inv, x)


# ------------------------------------------------------------------
# symmetric/alternating elements, type, discriminant
# ------------------------------------------------------------------


def alt_and_sym(a: AlgebraWithInvolution) -> tuple[list, list]:
    """(basis of alt, basis of sym) via image/kernel of inv + id."""
    A = a.algebra
    M = la.mat_add(a.inv, la.identity(A.field, A.dim))
    alt = la.column_space_basis(M)
    sym = la.kernel_basis(M)
    return alt, sym


ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"


def involution_type(a: AlgebraWithInvolution) -> str:
    """Symplectic iff the unit is in alt = image(inv + id)."""
    A = a.algebra
    M = la.mat_add(a.inv, la.identity(A.field, A.dim))
    return SYMPLECTIC if la.solve(M, A.unit) is not None else ORTHOGONAL


def degree_of(A: SCAlgebra) -> int:
    d = A.dim
    r = int(round(d ** 0.5))
    if r * r != d:
        raise NotSimpleError(f"dimension {d} is not a square")
    return r


def discriminant(a: AlgebraWithInvolution) -> SquareClass:
    """Square class of Nrd of an invertible alternating element.

    The (-1)^m sign is 1 in characteristic 2.  Choice independence is a
    tested invariant, not assumed.
    """
    if involution_type(a) == SYMPLECTIC:
        raise SymplecticInvolution("discriminants need an orthogonal involution")
    A = a.algebra
    alt, _ = alt_and_sym(a)
    for x in _element_stream(A.field, alt, limit=600):
        if not A.is_invertible_element(x):
            continue
        nrd = _reduced_norm(A, x)
        if nrd is not None:
            return square_class(nrd)
    raise NoInvertibleAlternating("no usable alternating element found")


def _element_stream(F, basis: list, limit: int):
    """Deterministic stream of nonzero span elements, basis first."""
    if not basis:
        return
    yield from basis
    n = len(basis)
    count = 0
    if isinstance(F, GaloisField) and F.order**n <= 4096:
        for coeffs in itertools.product(range(F.order), repeat=n):
            if sum(coeffs) == 0:
                continue
            v = None
            for c, b in zip(coeffs, basis):
                if c:
                    w = la.vec_scale(F.val(c), b)
                    v = w if v is None else la.vec_add(v, w)
            yield v
            count += 1
            if count >= limit:
                return
        return
    samples = _ff_scalars(F)
    for i, j in itertools.combinations(range(n), 2):
        for s in samples:
            yield la.vec_add(basis[i], la.vec_scale(s, basis[j]))
            count += 1
            if count >= limit:
                return


def _ff_scalars(F):
    if isinstance(F, GaloisField):
        return [F.val(r) for r in range(1, F.order)]
    t, one = F.t, F.one
    return [one, t, t + one, t * t, t * t + t, t * t + one]


def _reduced_norm(A: SCAlgebra, x: la.Vec) -> Optional[FieldValue]:
    deg = degree_of(A)
    s = A.is_scalar(x)
    if s is not None:
        return s**deg
    if deg == 2:
        # minimal polynomial x^2 + Trd x + Nrd read from {1, x, x^2}
        x2 = A.mul_vec(x, x)
        coords = la.in_span([A.unit, x], x2)
        if coords is None:
            return None
        return coords[0]
    # regular characteristic polynomial is the reduced one to the deg-th power
    cp = charpoly(A.left_mult_matrix(x), A.field)
    red = _poly_root_power2(cp, A.field, deg)
    if red is None:
        return None
    return red[0]


def charpoly(M: la.Mat, F) -> list:
    """Characteristic polynomial coefficients (low to high), Berkowitz.

    Division-free, so it works over any of the supported fields exactly.
    Signs are immaterial in characteristic 2.
    """
    n, _ = la.dims(M)
    C = [F.one]
    for k in range(1, n + 1):
        a = M[k - 1][k - 1]
        R = M[k - 1][: k - 1]
        col = tuple(M[i][k - 1] for i in range(k - 1))
        sub = la.mat([row[: k - 1] for row in M[: k - 1]]) if k > 1 else None
        q = [F.one, a]
        v = col
        for _ in range(k - 1):
            q.append(la._dot(R, v) if R else F.zero)
            v = la.mat_vec(sub, v)
        # multiply the series: new C[i] = sum_j q[i-j] * C[j]
        newC = [F.zero] * (k + 1)
        for i in range(k + 1):
            acc = F.zero
            for j in range(max(0, i - k), min(i, k - 1) + 1):
                if i - j < len(q):
                    acc = acc + q[i - j] * C[j]
            newC[i] = acc
        C = newC
    # C[i] is the coefficient of lambda^(n-i); return low-to-high
    return list(reversed(C))


def _poly_root_power2(coeffs: list, F, deg: int) -> Optional[list]:
    """r with r(x)^deg = p(x) for deg a power of two, coefficientwise roots."""
    from .fields import is_square, sqrt as fsqrt

    n = len(coeffs) - 1
    if n % deg:
        return None
    m = n // deg
    out = []
    for i in range(m + 1):
        c = coeffs[deg * i]
        e = c
        k = deg
        while k > 1:
            if not is_square(e):
                return None
            e = fsqrt(e)
            k //= 2
        out.append(e)
    for i, c in enumerate(coeffs):
        if i % deg and not c.is_zero:
            return None
    return out


# ------------------------------------------------------------------
# quaternions
# ------------------------------------------------------------------


def quaternion(F, a, b) -> SCAlgebra:
    """The symbol algebra [a, b): i^2 + i = a, j^2 = b, ji = ij + j."""
    a = F.val(a)
    b = F.val(b)
    if b.is_zero:
        raise ZeroParameter("the j-parameter of a quaternion must be nonzero")
    one, zero = F.one, F.zero
    ab = a * b

    def v(c0, c1, c2, c3):
        return (c0, c1, c2, c3)

    rows = [
        # 1 * x
        [v(one, zero, zero, zero), v(zero, one, zero, zero), v(zero, zero, one, zero), v(zero, zero, zero, one)],
        # i * x
        [v(zero, one, zero, zero), v(a, one, zero, zero), v(zero, zero, zero, one), v(zero, zero, a, one)],
        # j * x
        [v(zero, zero, one, zero), v(zero, zero, one, one), v(b, zero, zero, zero), v(b, b, zero, zero)],
        # k * x
        [v(zero, zero, zero, one), v(zero, zero, a, zero), v(zero, b, zero, zero), v(ab, zero, zero, zero)],
    ]
    return SCAlgebra(F, rows, (one, zero, zero, zero), labels=("1", "i", "j", "k"))


def reduced_trace_quaternion(Q: SCAlgebra, x: la.Vec) -> FieldValue:
    return x[1]


def canonical_involution(Q: SCAlgebra) -> AlgebraWithInvolution:
    """gamma(x) = Trd(x) + x; gamma(x) x is scalar for every x."""
    F = Q.field
    cols = []
    for idx in range(4):
        e = Q.basis_vector(idx)
        tr = reduced_trace_quaternion(Q, e)
        img = la.vec_add(tuple(tr * u for u in Q.unit), e)
        cols.append(img)
    return AlgebraWithInvolution(Q, la.transpose(la.mat(cols)), name="gamma")


def pure_elements_stream(F, rng_free=True):
    """Deterministic (x0, x2, x3) coefficient triples for pure quaternions."""
    if isinstance(F, GaloisField):
        space = [F.val(r) for r in range(F.order)]
        for x0, x2, x3 in itertools.product(space, repeat=3):
            yield x0, x2, x3
        return
    gf = F.base
    polys = forms._polys_up_to(gf, 2)
    for p0, p2, p3 in itertools.product(polys, repeat=3):
        yield F.val((p0, (1,))), F.val((p2, (1,))), F.val((p3, (1,)))


def orthogonal_involution(Q: SCAlgebra, disc) -> AlgebraWithInvolution:
    """An orthogonal involution Int(u) o gamma on Q with the given disc.

    u ranges over invertible trace-zero non-scalars x0 + x2 j + x3 k, whose
    squares are scalars; disc sigma = u^2 modulo squares.
    """
    F = Q.field
    want = disc if isinstance(disc, SquareClass) else square_class(F.val(disc))
    for x0, x2, x3 in pure_elements_stream(F):
        if x2.is_zero and x3.is_zero:
            continue
        u = (x0, F.zero, x2, x3)
        usq = Q.mul_vec(u, u)
        s = Q.is_scalar(usq)
        if s is None or s.is_zero:
            continue
        if square_class(s) == want:
            return involution_from_pure(Q, u)
    raise NoInvertibleAlternating(
        f"no pure element of square class {want} on this quaternion"
    )


def involution_from_pure(Q: SCAlgebra, u: la.Vec) -> AlgebraWithInvolution:
    """Int(u) o gamma for an invertible trace-zero u."""
    F = Q.field
    gamma = canonical_involution(Q)
    Lu = Q.left_mult_matrix(u)
    uinv = la.solve(Lu, Q.unit)
    if uinv is None:
        raise ZeroParameter("pure element is not invertible")
    cols = []
    for idx in range(4):
        g = gamma.apply(Q.basis_vector(idx))
        img = Q.mul_vec(Q.mul_vec(u, g), uinv)
        cols.append(img)
    return AlgebraWithInvolution(Q, la.transpose(la.mat(cols)), name="Int(u)gamma")


def alt_generator(a: AlgebraWithInvolution) -> la.Vec:
    """The generator of the 1-dimensional alt space of an orthogonal
    quaternion involution."""
    alt, _ = alt_and_sym(a)
    if len(alt) != 1:
        raise NoInvertibleAlternating(f"alt has dimension {len(alt)}, expected 1")
    return alt[0]


def quaternion_disc(a: AlgebraWithInvolution) -> SquareClass:
    """disc via the alternating generator: alt = F r with r^2 a unit scalar."""
    A = a.algebra
    r = alt_generator(a)
    s = A.is_scalar(A.mul_vec(r, r))
    if s is None or s.is_zero:
        raise NoInvertibleAlternating("alternating generator does not square to a unit")
    return square_class(s)


def quaternion_from_plane(E: QuadSpace) -> tuple[SCAlgebra, la.Mat]:
    """(Q, iso) with Q = [cd, c) and iso from C(E) monomials into Q.

    A symplectic basis (u, v) with q(u) = c != 0, q(v) = d maps to j and
    (j + k)/c; the iso columns are the images of the Clifford monomials
    {1, e1, e2, e1 e2} of the plane's original basis.  The defining plane
    relations are verified on the images inside Q, so the universal property
    makes the map an isomorphism.
    """
    if E.dim != 2 or not E.is_regular:
        raise DegenerateForm("need a regular quadratic plane")
    F = E.field
    P = forms.symplectic_basis(E)
    Eb = forms.transport(E, P)
    c, d = Eb.qvals
    if c.is_zero:
        if not d.is_zero:
            adj = la.mat([[F.zero, F.one], [F.one, F.zero]])
        else:
            adj = la.mat([[F.one, F.zero], [F.one, F.one]])  # u' = u+v
        P = la.mat_mul(P, adj)
        Eb = forms.transport(E, P)
        c, d = Eb.qvals
    Q = quaternion(F, c * d, c)
    cinv = c.inverse()
    jv = Q.basis_vector(2)
    kv = Q.basis_vector(3)
    yv = la.vec_scale(cinv, la.vec_add(jv, kv))
    # original basis vectors in the symplectic coordinates
    Pinv = la.mat_inv(P)
    imgs = []
    for col in la.transpose(Pinv):
        imgs.append(la.vec_add(la.vec_scale(col[0], jv), la.vec_scale(col[1], yv)))
    g1, g2 = imgs
    if Q.is_scalar(Q.mul_vec(g1, g1)) != E.qvals[0]:
        raise DegenerateForm("generator relation q(e1) failed")
    if Q.is_scalar(Q.mul_vec(g2, g2)) != E.qvals[1]:
        raise DegenerateForm("generator relation q(e2) failed")
    anti = la.vec_add(Q.mul_vec(g1, g2), Q.mul_vec(g2, g1))
    if Q.is_scalar(anti) != E.gram[0][1]:
        raise DegenerateForm("generator pairing failed")
    cols = [Q.unit, g1, g2, Q.mul_vec(g1, g2)]
    iso = la.transpose(la.mat(cols))
    if not la.is_invertible(iso):
        raise DegenerateForm("plane generators do not span the quaternion")
    return Q, iso


# ------------------------------------------------------------------
# matrix algebras and their involutions
# ------------------------------------------------------------------


def matrix_algebra(F, n: int) -> SCAlgebra:
    d = n * n
    zero = F.zero
    one = F.one
    table = []
    for r, s in itertools.product(range(n), repeat=2):
        row = []
        for t, u in itertools.product(range(n), repeat=2):
            vecv = [zero] * d
            if s == t:
                vecv[r * n + u] = one
            row.append(tuple(vecv))
        table.append(row)
    unit = [zero] * d
    for r in range(n):
        unit[r * n + r] = one
    labels = [f"e{r+1}{s+1}" for r, s in itertools.product(range(n), repeat=2)]
    return SCAlgebra(F, table, tuple(unit), labels=labels)


@dataclass(frozen=True)
class MatrixInvolutionKind:
    """One of transpose, gamma, or T_alpha; T_alpha with trivial alpha is t."""

    kind: str
    alpha: Optional[SquareClass] = None

    def __str__(self):
        if self.kind == "t_alpha":
            return f"T_alpha({self.alpha})"
        return {"transpose": "t", "gamma": "gamma"}[self.kind]

    def to_json(self):
        if self.kind == "t_alpha":
            return {"kind": "t_alpha", "alpha": str(self.alpha.rep)}
        return {"kind": self.kind}


KIND_TRANSPOSE = MatrixInvolutionKind("transpose")
KIND_GAMMA = MatrixInvolutionKind("gamma")


def t_alpha_kind(alpha: SquareClass) -> MatrixInvolutionKind:
    if alpha.is_trivial:
        return KIND_TRANSPOSE
    return MatrixInvolutionKind("t_alpha", alpha)


def matrix_involution(F, kind: MatrixInvolutionKind) -> AlgebraWithInvolution:
    """The stated involution on M_2(F)."""
    A = matrix_algebra(F, 2)
    zero, one = F.zero, F.one

    def col(entries):
        v = [zero] * 4
        for idx, c in entries:
            v[idx] = c
        return tuple(v)

    E11, E12, E21, E22 = 0, 1, 2, 3
    if kind.kind == "transpose":
        cols = [col([(E11, one)]), col([(E21, one)]), col([(E12, one)]), col([(E22, one)])]
        return AlgebraWithInvolution(A, la.transpose(la.mat(cols)), name="t")
    if kind.kind == "gamma":
        cols = [col([(E22, one)]), col([(E12, one)]), col([(E21, one)]), col([(E11, one)])]
        return AlgebraWithInvolution(A, la.transpose(la.mat(cols)), name="gamma")
    if kind.kind == "t_alpha":
        alpha = kind.alpha.rep
        if alpha.is_zero:
            raise ZeroAlpha("alpha must be a unit")
        ainv = alpha.inverse()
        cols = [
            col([(E11, one)]),
            col([(E21, alpha)]),
            col([(E12, ainv)]),
            col([(E22, one)]),
        ]
        return AlgebraWithInvolution(A, la.transpose(la.mat(cols)), name=str(kind))
    raise ValueError(f"unknown kind {kind!r}")


def adjoint_involution(B: SymBilForm) -> AlgebraWithInvolution:
    """ad_b(f) = B^{-1} f^t B on M_n, the adjoint of a nondegenerate form."""
    G = B.gram
    n = B.n
    Ginv = la.mat_inv(G)
    if Ginv is None:
        raise DegenerateForm("adjoint involutions need an invertible Gram matrix")
    A = matrix_algebra(B.field, n)
    cols = []
    for r, s in itertools.product(range(n), repeat=2):
        E = [[B.field.zero] * n for _ in range(n)]
        E[r][s] = B.field.one
        M = la.mat_mul(Ginv, la.mat_mul(la.transpose(la.mat(E)), G))
        cols.append(tuple(M[i][j] for i, j in itertools.product(range(n), repeat=2)))
    return AlgebraWithInvolution(A, la.transpose(la.mat(cols)), name="ad_b")


# ------------------------------------------------------------------
# tensor products, centralizers, opposites
# ------------------------------------------------------------------


def tensor_algebras(A: SCAlgebra, B: SCAlgebra) -> SCAlgebra:
    if A.field != B.field:
        raise FieldMismatch("tensor factors over different fields")
    F = A.field
    dA, dB = A.dim, B.dim
    d = dA * dB
    table = []
    for i1, i2 in itertools.product(range(dA), range(dB)):
        row = []
        for j1, j2 in itertools.product(range(dA), range(dB)):
            va = A.table[i1][j1]
            vb = B.table[i2][j2]
            vecv = [F.zero] * d
            for k1, c1 in enumerate(va):
                if c1.is_zero:
                    continue
                for k2, c2 in enumerate(vb):
                    if not c2.is_zero:
                        vecv[k1 * dB + k2] = c1 * c2
            row.append(tuple(vecv))
        table.append(row)
    unit = [F.zero] * d
    for k1, c1 in enumerate(A.unit):
        for k2, c2 in enumerate(B.unit):
            unit[k1 * dB + k2] = c1 * c2
    labels = [
        f"{a}|{b}" for a, b in itertools.product(A.labels, B.labels)
    ]
    return SCAlgebra(F, table, tuple(unit), labels=labels, validate=d <= 16)


def tensor(a: AlgebraWithInvolution, b: AlgebraWithInvolution) -> AlgebraWithInvolution:
    T = tensor_algebras(a.algebra, b.algebra)
    inv = la.kron(a.inv, b.inv)
    name = f"{a.name}(x){b.name}"
    return AlgebraWithInvolution(T, inv, name=name)


def tensor_many(parts: Sequence[AlgebraWithInvolution]) -> AlgebraWithInvolution:
    out = parts[0]
    for p in parts[1:]:
        out = tensor(out, p)
    return out


def embed_left(A: SCAlgebra, dB: int, x: la.Vec, unitB: la.Vec) -> la.Vec:
    """x (x) 1 inside the tensor built by tensor_algebras."""
    F = A.field
    out = [F.zero] * (A.dim * dB)
    for k1, c1 in enumerate(x):
        if c1.is_zero:
            continue
        for k2, c2 in enumerate(unitB):
            if not c2.is_zero:
                out[k1 * dB + k2] = c1 * c2
    return tuple(out)


def embed_right(dA: int, B: SCAlgebra, y: la.Vec, unitA: la.Vec) -> la.Vec:
    F = B.field
    out = [F.zero] * (dA * B.dim)
    for k1, c1 in enumerate(unitA):
        if c1.is_zero:
            continue
        for k2, c2 in enumerate(y):
            if not c2.is_zero:
                out[k1 * B.dim + k2] = c1 * c2
    return tuple(out)


def centralizer(A: SCAlgebra, elems: Sequence[la.Vec]) -> tuple[SCAlgebra, la.Mat]:
    """(subalgebra with induced structure constants, embedding columns)."""
    F = A.field
    if not elems:
        basis = [A.basis_vector(i) for i in range(A.dim)]
    else:
        rows = []
        for s in elems:
            D = la.mat_add(A.left_mult_matrix(s), A.right_mult_matrix(s))
            rows.extend(D)
        basis = la.kernel_basis(la.mat(rows))
    emb = la.transpose(la.mat(basis)) if basis else la.zeros(F, A.dim, 0)
    table = []
    for x in basis:
        row = []
        for y in basis:
            prod = A.mul_vec(x, y)
            coords = la.solve(emb, prod)
            if coords is None:
                raise NotSimpleError("centralizer is not multiplicatively closed")
            row.append(coords)
        table.append(row)
    unit = la.solve(emb, A.unit)
    if unit is None:
        raise NotSimpleError("centralizer does not contain the unit")
    sub = SCAlgebra(F, table, unit, validate=len(basis) <= 16)
    return sub, emb


def center(A: SCAlgebra) -> list:
    basis = [A.basis_vector(i) for i in range(A.dim)]
    rows = []
    for s in basis:
        D = la.mat_add(A.left_mult_matrix(s), A.right_mult_matrix(s))
        rows.extend(D)
    return la.kernel_basis(la.mat(rows))


def opposite(A: SCAlgebra) -> SCAlgebra:
    table = [
        [A.table[j][i] for j in range(A.dim)] for i in range(A.dim)
    ]
    return SCAlgebra(
        A.field, table, A.unit, labels=tuple(l + "'" for l in A.labels),
        validate=A.dim <= 16,
    )


# ------------------------------------------------------------------
# splitting machinery
# ------------------------------------------------------------------


@dataclass
class SplitResult:
    status: str  # "split" | "unknown"
    idempotent: Optional[la.Vec] = None
    model: Optional[la.Mat] = None  # algebra iso A -> M_deg as a coordinate matrix
    note: str = ""


def explicit_split_qop(Q: SCAlgebra) -> tuple[SCAlgebra, la.Mat]:
    """(Q (x) Q^op, sandwich iso onto End(Q) = M_4 in matrix coordinates).

    The map sends x (x) y to z -> x z y, using that an element of Q^op is an
    element of Q multiplied on the other side; it is an algebra isomorphism
    and its matrix is returned in the e_rs coordinates of M_4.
    """
    Qop = opposite(Q)
    A = tensor_algebras(Q, Qop)
    n = Q.dim
    cols = []
    for i, j in itertools.product(range(n), repeat=2):
        ei, ej = Q.basis_vector(i), Q.basis_vector(j)
        entries = [Q.field.zero] * (n * n)
        for k in range(n):
            img = Q.mul_vec(Q.mul_vec(ei, Q.basis_vector(k)), ej)
            for r, c in enumerate(img):
                entries[r * n + k] = c
        cols.append(tuple(entries))
    phi = la.transpose(la.mat(cols))
    if not la.is_invertible(phi):
        raise NotSimpleError("sandwich map failed to be bijective")
    return A, phi


def is_split(
    A: SCAlgebra, budget: int = 2000, seed: int = 0
) -> SplitResult:
    """Split(idempotent, model) / Unknown, by minimal left ideal search.

    Exact over Galois fields within the budget; over function fields the
    bounded search may honestly return Unknown.
    """
    F = A.field
    zc = center(A)
    if len(zc) != 1:
        raise NotSimpleError(f"center has dimension {len(zc)}")
    deg = degree_of(A)
    rng = random.Random(seed)
    tried = 0
    for x in _split_candidates(A, rng):
        tried += 1
        if tried > budget:
            break
        ideal = _left_ideal(A, x)
        k = len(ideal)
        while k not in (0, A.dim) and k > deg:
            y = _combine(F, ideal, rng)
            sub = _left_ideal(A, y)
            if 0 < len(sub) < k:
                ideal, k = sub, len(sub)
            else:
                break
        if k != deg:
            continue
        model = _regular_model(A, ideal)
        if model is None:
            continue
        e = _idempotent_in_ideal(A, ideal, rng)
        return SplitResult("split", idempotent=e, model=model)
    return SplitResult("unknown", note=f"no minimal ideal after {tried} candidates")


def _split_candidates(A: SCAlgebra, rng):
    d = A.dim
    for i in range(d):
        yield A.basis_vector(i)
    for i, j in itertools.combinations(range(d), 2):
        yield la.vec_add(A.basis_vector(i), A.basis_vector(j))
    F = A.field
    while True:
        if isinstance(F, GaloisField):
            yield tuple(F.sample(rng) for _ in range(d))
        else:
            yield tuple(
                F.poly(*[rng.randrange(F.base.order) for _ in range(2)])
                for _ in range(d)
            )


def _left_ideal(A: SCAlgebra, x: la.Vec) -> list:
    return la.column_space_basis(A.right_mult_matrix(x))


def _combine(F, basis: list, rng) -> la.Vec:
    v = None
    for b in basis:
        if rng.random() < 0.6:
            continue
        c = F.sample(rng) if isinstance(F, GaloisField) else F.poly(rng.randrange(2), rng.randrange(2))
        w = la.vec_scale(c, b)
        v = w if v is None else la.vec_add(v, w)
    return v if v is not None else basis[0]


def _regular_model(A: SCAlgebra, ideal: list) -> Optional[la.Mat]:
    """Coordinate matrix of a -> (left action of a on the ideal) in e_rs basis."""
    deg = len(ideal)
    emb = la.transpose(la.mat(ideal))
    cols = []
    for i in range(A.dim):
        a = A.basis_vector(i)
        entries = [A.field.zero] * (deg * deg)
        for k, v in enumerate(ideal):
            img = A.mul_vec(a, v)
            coords = la.solve(emb, img)
            if coords is None:
                return None
            for r, c in enumerate(coords):
                entries[r * deg + k] = c
        cols.append(tuple(entries))
    phi = la.transpose(la.mat(cols))
    if not la.is_invertible(phi):
        return None
    return phi


def _idempotent_in_ideal(A: SCAlgebra, ideal: list, rng) -> Optional[la.Vec]:
    F = A.field
    for x in _element_stream(F, ideal, limit=5000):
        xx = A.mul_vec(x, x)
        if xx == x and any(not c.is_zero for c in x):
            if len(_left_ideal(A, x)) == len(ideal):
                return x
        # x^2 = lam x with lam a unit also yields e = x / lam
        coords = la.in_span([x], xx)
        if coords and not coords[0].is_zero:
            e = la.vec_scale(coords[0].inverse(), x)
            if A.mul_vec(e, e) == e and len(_left_ideal(A, e)) == len(ideal):
                return e
    return None


# ------------------------------------------------------------------
# isotropy, metabolic idempotents, isomorphism checking
# ------------------------------------------------------------------


def isotropy_witness(
    a: AlgebraWithInvolution, budget: int = 3000, seed: int = 0
) -> Optional[la.Vec]:
    """Nonzero x with inv(x) x = 0, or None within the budget."""
    A = a.algebra
    rng = random.Random(seed)
    tried = 0
    for x in _split_candidates(A, rng):
        tried += 1
        if tried > budget:
            return None
        if all(c.is_zero for c in x):
            continue
        if all(c.is_zero for c in A.mul_vec(a.apply(x), x)):
            return x
    return None


def metabolic_check(a: AlgebraWithInvolution, e: la.Vec) -> bool:
    A = a.algebra
    if A.mul_vec(e, e) != e:
        return False
    if any(not c.is_zero for c in A.mul_vec(a.apply(e), e)):
        return False
    right_ideal_dim = la.rank(A.left_mult_matrix(e))
    return right_ideal_dim * 2 == A.dim


def metabolic_idempotent(
    a: AlgebraWithInvolution, budget: int = 100000, seed: int = 0
) -> Optional[la.Vec]:
    """Bounded search for an idempotent passing metabolic_check."""
    A = a.algebra
    rng = random.Random(seed)
    tried = 0
    for x in _split_candidates(A, rng):
        tried += 1
        if tried > budget:
            return None
        if A.mul_vec(x, x) == x and metabolic_check(a, x):
            return x
    return None


def iso_with_involution_check(
    a: AlgebraWithInvolution, b: AlgebraWithInvolution, f: la.Mat
) -> bool:
    """f is an isomorphism of algebras-with-involution: invertible, unital,
    multiplicative on all basis products, and f o sigma = rho o f."""
    A, B = a.algebra, b.algebra
    if A.dim != B.dim:
        return False
    if not la.is_invertible(f):
        return False
    if la.mat_vec(f, A.unit) != B.unit:
        return False
    fcols = [la.mat_vec(f, A.basis_vector(i)) for i in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = la.mat_vec(f, A.table[i][j])
            if lhs != B.mul_vec(fcols[i], fcols[j]):
                return False
    lhs = la.mat_mul(f, a.inv)
    rhs = la.mat_mul(b.inv, f)
    return la.mat_eq(lhs, rhs)
