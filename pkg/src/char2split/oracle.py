"""Independent brute-force verifiers and instance generators.

Everything here is deliberately separate from the main computation paths:
enumeration is bit-packed over GF(2), isomorphism claims are re-derived by
constructive splitting, and each named check reports a universe size and
the counterexamples found.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dfield
from typing import Iterator, Optional

from . import forms, isometry as iso, linalg as la
from .errors import BudgetExceeded
from .fields import GaloisField, galois_field, rational_function_field
from .forms import QuadSpace, evaluate, hyperbolic_plane, orthogonal_sum, plane
from .isometry import Isometry


@dataclass
class OracleReport:
    statement: str
    universe: str
    checked: int = 0
    counterexamples: list = dfield(default_factory=list)
    seed: Optional[int] = None
    notes: list = dfield(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "statement": self.statement,
            "universe": self.universe,
            "checked": self.checked,
            "counterexamples": list(self.counterexamples),
            "seed": self.seed,
            "notes": list(self.notes),
            "ok": self.ok,
        }


# ------------------------------------------------------------------
# involution enumeration
# ------------------------------------------------------------------


def _gf2_space_tables(V: QuadSpace):
    n = V.dim
    grows = []
    for i in range(n):
        r = 0
        for j in range(n):
            if not V.gram[i][j].is_zero:
                r |= 1 << j
        grows.append(r)
    qbits = [0 if V.qvals[i].is_zero else 1 for i in range(n)]
    qtab = []
    for mask in range(1 << n):
        acc = 0
        m = mask
        idxs = [i for i in range(n) if (mask >> i) & 1]
        for i in idxs:
            acc ^= qbits[i]
        for a in range(len(idxs)):
            for b in range(a + 1, len(idxs)):
                if (grows[idxs[a]] >> idxs[b]) & 1:
                    acc ^= 1
        qtab.append(acc)
    return grows, qtab


def _gf2_bil(grows, x: int, y: int) -> int:
    acc = 0
    i = 0
    while x:
        if x & 1:
            acc ^= bin(grows[i] & y).count("1") & 1
        x >>= 1
        i += 1
    return acc & 1


def _gf2_isometry_columns(V: QuadSpace) -> Iterator[tuple]:
    """All isometries of a GF(2) space, as column-mask tuples, by pruned search."""
    n = V.dim
    grows, qtab = _gf2_space_tables(V)
    gbits = [[0 if V.gram[i][j].is_zero else 1 for j in range(n)] for i in range(n)]
    qbits = [qtab[1 << i] for i in range(n)]

    def rec(cols: list) -> Iterator[tuple]:
        j = len(cols)
        if j == n:
            # invertibility follows from preserving a nondegenerate form
            yield tuple(cols)
            return
        for cand in range(1, 1 << n):
            if qtab[cand] != qbits[j]:
                continue
            ok = True
            for i, ci in enumerate(cols):
                if _gf2_bil(grows, ci, cand) != gbits[i][j]:
                    ok = False
                    break
            if ok:
                cols.append(cand)
                yield from rec(cols)
                cols.pop()

    yield from rec([])


def _cols_to_isometry(V: QuadSpace, cols: tuple) -> Isometry:
    F = V.field
    n = V.dim
    M = la.mat(
        [[F.one if (cols[j] >> i) & 1 else F.zero for j in range(n)] for i in range(n)]
    )
    return Isometry(V, M)


def _gf2_apply(cols: tuple, v: int) -> int:
    out = 0
    j = 0
    while v:
        if v & 1:
            out ^= cols[j]
        v >>= 1
        j += 1
    return out


def enumerate_involutions(
    V: QuadSpace, budget: int = 10**7, seed: int = 0, count: int = 100
) -> Iterator[Isometry]:
    """All involutions in O(V, q) when the space is small, seeded random otherwise.

    Exhaustive for GF(2) in any supported dimension (pruned bit-packed
    search) and for GF(4) in dimension 2; otherwise yields `count` validated
    involutions from the structured random generator.
    """
    F = V.field
    if isinstance(F, GaloisField) and F.k == 1:
        if (1 << (V.dim * V.dim)) > budget:
            raise BudgetExceeded("involution enumeration too large")
        n = V.dim
        for cols in _gf2_isometry_columns(V):
            if all(_gf2_apply(cols, cols[j]) == (1 << j) for j in range(n)):
                yield _cols_to_isometry(V, cols)
        return
    if isinstance(F, GaloisField) and F.order ** (V.dim * V.dim) <= budget:
        n = V.dim
        for raws in itertools.product(range(F.order), repeat=n * n):
            M = [[F.val(raws[i * n + j]) for j in range(n)] for i in range(n)]
            try:
                tau = iso.isometry(V, M)
            except Exception:
                continue
            if tau.is_involution:
                yield tau
        return
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        tau = random_involution_on(V, rng)
        if tau is None:
            continue
        yield tau
        produced += 1


# ------------------------------------------------------------------
# structured random involutions with known ground truth
# ------------------------------------------------------------------


def random_involution_instance(field, dim: int, rng: random.Random):
    """(space, involution, expected kind) with the space built to order.

    Structured components (identity planes, reflection planes, interchange
    blocks in normal form) are summed and then conjugated by a random
    product of reflections, which scrambles the matrix but not the kind.
    """
    if dim % 2:
        raise ValueError("quadratic spaces here are even-dimensional")
    pairs = dim // 2
    n_blocks = rng.randrange(0, pairs // 2 + 1)
    rest = pairs - 2 * n_blocks
    n_refl = rng.randrange(0, rest + 1)
    n_id = rest - n_refl
    if n_blocks == 0 and n_refl == 0 and n_id == 0:
        n_id = pairs
    parts = []
    kinds = []
    for _ in range(n_refl):
        P = _random_plane(field, rng)
        u = _random_anisotropic(P, rng)
        parts.append((P, iso.reflection(P, u)))
        kinds.append("refl")
    for _ in range(n_blocks):
        V4, tau4 = _interchange_block(field)
        parts.append((V4, tau4))
        kinds.append("block")
    for _ in range(n_id):
        P = _random_plane(field, rng)
        parts.append((P, iso.identity_isometry(P)))
        kinds.append("id")
    order = list(range(len(parts)))
    rng.shuffle(order)
    parts = [parts[i] for i in order]
    tau = iso.orthogonal_sum_isometry(parts)
    V = tau.space
    # rational-function entries grow under conjugation; keep that bounded
    steps = dim if isinstance(field, GaloisField) else 2
    g = _random_reflection_product(V, rng, steps=steps)
    tau = iso.conjugate(tau, g)
    if "refl" in kinds:
        expected = iso.KIND_REFLECTIONAL
    elif "block" in kinds:
        expected = iso.KIND_INTERCHANGING
    else:
        expected = iso.KIND_IDENTITY
    return V, tau, expected


def random_involution_on(V: QuadSpace, rng: random.Random) -> Optional[Isometry]:
    """A random involution on the given space: conjugated product of
    reflections along pairwise orthogonal anisotropic vectors."""
    n = V.dim
    vecs = []
    attempts = 0
    want = rng.randrange(0, n // 2 + 1)
    while len(vecs) < want and attempts < 100:
        attempts += 1
        u = _random_vector(V, rng)
        if evaluate(V, u).is_zero:
            continue
        if any(not V.bilinear(u, w).is_zero for w in vecs):
            continue
        if vecs and la.rank(la.mat(vecs + [u])) != len(vecs) + 1:
            continue
        vecs.append(u)
    tau = iso.identity_isometry(V)
    for u in vecs:
        tau = tau.compose(iso.reflection(V, u))
    if not tau.is_involution:
        return None
    g = _random_reflection_product(V, rng, steps=3)
    return iso.conjugate(tau, g)


def _random_plane(field, rng) -> QuadSpace:
    c = _random_scalar(field, rng)
    d = _random_scalar(field, rng)
    return plane(field, c, d)


def _random_scalar(field, rng):
    if isinstance(field, GaloisField):
        return field.sample(rng)
    return field.poly(*[rng.randrange(field.base.order) for _ in range(2)])


def _random_vector(V, rng):
    F = V.field
    if isinstance(F, GaloisField):
        return tuple(F.sample(rng) for _ in range(V.dim))
    return tuple(
        F.poly(*[rng.randrange(F.base.order) for _ in range(2)]) for _ in range(V.dim)
    )


def _random_anisotropic(V, rng):
    while True:
        u = _random_vector(V, rng)
        if not evaluate(V, u).is_zero:
            return u


def _interchange_block(field):
    V = orthogonal_sum(hyperbolic_plane(field), hyperbolic_plane(field))
    one, zero = field.one, field.zero
    M = [
        [one, zero, zero, one],
        [zero, one, zero, zero],
        [zero, one, one, zero],
        [zero, zero, zero, one],
    ]
    return V, iso.isometry(V, M)


def _random_reflection_product(V, rng, steps: int) -> Isometry:
    g = iso.identity_isometry(V)
    made, attempts = 0, 0
    while made < steps and attempts < 50 * steps:
        attempts += 1
        u = _random_vector(V, rng)
        if evaluate(V, u).is_zero:
            continue
        g = g.compose(iso.reflection(V, u))
        made += 1
    return g
