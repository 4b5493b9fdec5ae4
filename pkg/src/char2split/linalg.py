"""Exact dense linear algebra over the supported fields.

Matrices are tuples of row tuples of FieldValue; vectors are tuples.
Everything is pure and returns fresh values.  Sizes here are desk scale
(at most a few hundred rows), so the implementations are straightforward
Gaussian elimination with exact pivoting.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .fields import FieldValue

Vec = tuple
Mat = tuple


def mat(rows) -> Mat:
    return tuple(tuple(r) for r in rows)


def vec(entries) -> Vec:
    return tuple(entries)


def zeros(F, n: int, m: int) -> Mat:
    return tuple(tuple(F.zero for _ in range(m)) for _ in range(n))


def zero_vec(F, n: int) -> Vec:
    return tuple(F.zero for _ in range(n))


def identity(F, n: int) -> Mat:
    return tuple(
        tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)
    )


def dims(A: Mat) -> tuple[int, int]:
    return len(A), len(A[0]) if A else 0


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A)) if A else ()


def mat_add(A: Mat, B: Mat) -> Mat:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_mul(A: Mat, B: Mat) -> Mat:
    Bt = transpose(B)
    return tuple(
        tuple(_dot(row, col) for col in Bt) for row in A
    )


def _dot(u: Sequence[FieldValue], v: Sequence[FieldValue]):
    acc = None
    first = u[0]
    for a, b in zip(u, v):
        if a.raw == 0 or b.raw == 0:
            continue
        acc = a * b if acc is None else acc + a * b
    if acc is None:
        return first.field.zero
    return acc


def mat_vec(A: Mat, x: Vec) -> Vec:
    return tuple(_dot(row, x) for row in A)


def vec_mat(x: Vec, A: Mat) -> Vec:
    return mat_vec(transpose(A), x)


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c: FieldValue, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def vec_is_zero(u: Vec) -> bool:
    return all(a.is_zero for a in u)


def scalar_mul(c: FieldValue, A: Mat) -> Mat:
    return tuple(tuple(c * a for a in row) for row in A)


def mat_eq(A: Mat, B: Mat) -> bool:
    return dims(A) == dims(B) and all(
        a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb)
    )


def kron(A: Mat, B: Mat) -> Mat:
    na, ma = dims(A)
    nb, mb = dims(B)
    return tuple(
        tuple(A[i // nb][j // mb] * B[i % nb][j % mb] for j in range(ma * mb))
        for i in range(na * nb)
    )


# ------------------------------------------------------------------
# elimination
# ------------------------------------------------------------------


def rref(A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    n, m = dims(A)
    rows = [list(r) for r in A]
    pivots: list[int] = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if not rows[i][c].is_zero), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][c].is_zero:
                f = rows[i][c]
                rows[i] = [x + f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return mat(rows), pivots


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def solve(A: Mat, b: Vec) -> Optional[Vec]:
    """One solution of A x = b, or None."""
    n, m = dims(A)
    aug = mat([list(A[i]) + [b[i]] for i in range(n)])
    R, pivots = rref(aug)
    if m in pivots:
        return None
    F = b[0].field if b else A[0][0].field
    x = [F.zero] * m
    for r, c in enumerate(pivots):
        x[c] = R[r][m]
    return tuple(x)


def mat_inv(A: Mat) -> Optional[Mat]:
    n, m = dims(A)
    if n != m:
        return None
    F = A[0][0].field
    aug = mat([list(A[i]) + list(identity(F, n)[i]) for i in range(n)])
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return mat(row[n:] for row in R)


def kernel_basis(A: Mat) -> list[Vec]:
    """Basis of the right kernel {x : A x = 0}."""
    n, m = dims(A)
    if m == 0:
        return []
    F = A[0][0].field
    R, pivots = rref(A)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        x = [F.zero] * m
        x[fc] = F.one
        for r, pc in enumerate(pivots):
            x[pc] = R[r][fc]
        basis.append(tuple(x))
    return basis


def column_space_basis(A: Mat) -> list[Vec]:
    """Basis of the column space, as vectors of length nrows."""
    _, pivots = rref(A)
    At = transpose(A)
    return [At[c] for c in pivots]


def row_space_basis(vectors: Sequence[Vec]) -> list[Vec]:
    """Canonical (rref) basis of the span of the given vectors."""
    vs = [v for v in vectors if not vec_is_zero(v)]
    if not vs:
        return []
    R, pivots = rref(mat(vs))
    return [R[i] for i in range(len(pivots))]


def in_span(basis: Sequence[Vec], v: Vec) -> Optional[Vec]:
    """Coordinates of v in the given basis, or None if outside the span."""
    if not basis:
        return () if vec_is_zero(v) else None
    A = transpose(mat(basis))
    return solve(A, v)


def intersect_spans(b1: Sequence[Vec], b2: Sequence[Vec]) -> list[Vec]:
    """Basis of the intersection of two spans (Zassenhaus-free direct way)."""
    if not b1 or not b2:
        return []
    F = b1[0][0].field
    m = len(b1[0])
    # solve sum a_i b1_i + sum c_j b2_j = 0; intersection vectors are sum a_i b1_i
    A = mat(
        [
            [b1[i][k] for i in range(len(b1))] + [b2[j][k] for j in range(len(b2))]
            for k in range(m)
        ]
    )
    out = []
    for ker in kernel_basis(A):
        coords = ker[: len(b1)]
        v = zero_vec(F, m)
        for a, bv in zip(coords, b1):
            v = vec_add(v, vec_scale(a, bv))
        if not vec_is_zero(v):
            out.append(v)
    return row_space_basis(out)


def is_invertible(A: Mat) -> bool:
    n, m = dims(A)
    return n == m and rank(A) == n
