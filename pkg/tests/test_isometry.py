import itertools
import random

import pytest

from char2split import forms, isometry as iso, linalg as la
from char2split.errors import IsotropicVector, NotInvolution, WrongDimension
from char2split.fields import galois_field, rational_function_field, square_class
from char2split.forms import evaluate, hyperbolic_plane, orthogonal_sum, plane

GF2 = galois_field(1)
GF4 = galois_field(2)
F2T = rational_function_field(1)


def interchange_HH(F):
    """The cross interchange on H perp H: v_i -> v_i + u_{3-i}."""
    V = orthogonal_sum(hyperbolic_plane(F), hyperbolic_plane(F))
    one, zero = F.one, F.zero
    # basis u1, v1, u2, v2; tau(v1) = v1 + u2, tau(v2) = v2 + u1
    M = [
        [one, zero, zero, one],
        [zero, one, zero, zero],
        [zero, one, one, zero],
        [zero, zero, zero, one],
    ]
    return V, iso.isometry(V, M)


# ------------------------------------------------------------------
# reflections
# ------------------------------------------------------------------


def test_reflection_examples():
    P = plane(F2T, 1, "t")
    tau_u = iso.reflection(P, (F2T.one, F2T.zero))
    e2 = (F2T.zero, F2T.one)
    assert tau_u.apply(e2) == (F2T.one, F2T.one)  # e2 + e1
    tau_v = iso.reflection(P, e2)
    e1 = (F2T.one, F2T.zero)
    tinv = F2T.t.inverse()
    assert tau_v.apply(e1) == (F2T.one, tinv)
    H = hyperbolic_plane(GF2)
    with pytest.raises(IsotropicVector):
        iso.reflection(H, (GF2.one, GF2.zero))


def test_reflection_is_involution_fixing_u_perp():
    rng = random.Random(41)
    for _ in range(20):
        V = orthogonal_sum(plane(GF4, 1, 2), plane(GF4, 3, 0))
        u = tuple(GF4.sample(rng) for _ in range(4))
        if evaluate(V, u).is_zero:
            continue
        tau = iso.reflection(V, u)
        assert tau.is_involution
        fx = iso.fix_subspace(tau)
        perp = forms.orthogonal_complement(V, forms.subspace(V, [u]))
        assert fx.dim == 3
        assert fx == perp
        assert tau.apply(u) == u


# ------------------------------------------------------------------
# fix subspaces
# ------------------------------------------------------------------


def test_fix_subspace_identity():
    V = plane(GF2, 1, 1)
    assert iso.fix_subspace(iso.identity_isometry(V)).dim == 2


def test_fix_subspace_reflection_plane():
    P = plane(F2T, 1, "t")
    tau = iso.reflection(P, (F2T.one, F2T.zero))
    fx = iso.fix_subspace(tau)
    assert fx.dim == 1 and fx.contains((F2T.one, F2T.zero))


def test_fix_subspace_interchange():
    V, tau = interchange_HH(GF2)
    fx = iso.fix_subspace(tau)
    assert fx.dim == 2
    assert fx.contains((GF2.one, GF2.zero, GF2.zero, GF2.zero))
    assert fx.contains((GF2.zero, GF2.zero, GF2.one, GF2.zero))


# ------------------------------------------------------------------
# interchange detection
# ------------------------------------------------------------------


def test_is_interchange_positive():
    for F in (GF2, GF4, F2T):
        _V, tau = interchange_HH(F)
        assert iso.is_interchange(tau)


def test_is_interchange_negative():
    V = orthogonal_sum(plane(GF2, 1, 1), plane(GF2, 1, 1))
    tau = iso.orthogonal_sum_isometry(
        [
            (plane(GF2, 1, 1), iso.reflection(plane(GF2, 1, 1), (GF2.one, GF2.zero))),
            (plane(GF2, 1, 1), iso.reflection(plane(GF2, 1, 1), (GF2.one, GF2.zero))),
        ]
    )
    assert not iso.is_interchange(tau)
    assert not iso.is_interchange(iso.identity_isometry(V))
    with pytest.raises(WrongDimension):
        iso.is_interchange(iso.identity_isometry(plane(GF2, 1, 1)))


# ------------------------------------------------------------------
# spinor norm
# ------------------------------------------------------------------


def test_spinor_norm_examples():
    P = plane(F2T, 1, "t")
    tau_u = iso.reflection(P, (F2T.one, F2T.zero))
    assert iso.spinor_norm(tau_u).is_trivial
    tau_v = iso.reflection(P, (F2T.zero, F2T.one))
    assert iso.spinor_norm(tau_v) == square_class(F2T.t)
    _V, tau = interchange_HH(F2T)
    assert iso.spinor_norm(tau).is_trivial


def test_spinor_norm_not_involution():
    # a symplectic transvection of infinite order-ish: u -> u, v -> v + u on H
    # is an isometry only if it preserves q; build a genuine non-involution:
    V = orthogonal_sum(plane(GF4, 1, 1), plane(GF4, 1, 1))
    r1 = iso.reflection(V, (GF4.one, GF4.zero, GF4.zero, GF4.zero))
    r2 = iso.reflection(V, (GF4.zero, GF4.one, GF4.zero, GF4.zero))
    g = r1.compose(r2)
    if not g.is_involution:
        with pytest.raises(NotInvolution):
            iso.spinor_norm(g)


def test_spinor_norm_basis_independent():
    # decompose tau in a randomly changed basis; the class must not move
    rng = random.Random(43)
    P1 = plane(F2T, 1, "t")
    P2 = plane(F2T, "t", "t")
    V = orthogonal_sum(P1, P2)
    tau = iso.orthogonal_sum_isometry(
        [
            (P1, iso.reflection(P1, (F2T.one, F2T.zero))),
            (P2, iso.reflection(P2, (F2T.one, F2T.one))),
        ]
    )
    cls = iso.spinor_norm(tau)
    assert cls == square_class(F2T.one * F2T.one)  # q(u1)=1, q(u2)=t+1+t=1
    for _ in range(5):
        g = _random_isometry(V, rng)
        tau2 = iso.conjugate(tau, g)
        assert iso.spinor_norm(tau2) == cls


def _random_isometry(V, rng, steps=4):
    g = iso.identity_isometry(V)
    n = V.dim
    tries = 0
    while steps > 0 and tries < 200:
        tries += 1
        if isinstance(V.field, type(GF2)):
            u = tuple(V.field.sample(rng) for _ in range(n))
        else:
            u = tuple(V.field.sample(rng, 1) for _ in range(n))
        if evaluate(V, u).is_zero:
            continue
        g = g.compose(iso.reflection(V, u))
        steps -= 1
    return g


# ------------------------------------------------------------------
# Wiitala decomposition
# ------------------------------------------------------------------


def test_wiitala_identity():
    V = orthogonal_sum(plane(GF2, 1, 1), plane(GF2, 0, 1))
    dec = iso.wiitala_decompose(iso.identity_isometry(V))
    assert dec.kind == iso.KIND_IDENTITY
    assert dec.W.dim == 4 and not dec.planes and not dec.blocks
    assert iso.check_decomposition(iso.identity_isometry(V), dec) == []


def test_wiitala_two_reflections():
    P1 = plane(F2T, 1, "t")
    P2 = plane(F2T, 1, "t")
    tau = iso.orthogonal_sum_isometry(
        [
            (P1, iso.reflection(P1, (F2T.one, F2T.zero))),
            (P2, iso.reflection(P2, (F2T.zero, F2T.one))),
        ]
    )
    dec = iso.wiitala_decompose(tau)
    assert dec.kind == iso.KIND_REFLECTIONAL
    assert len(dec.planes) == 2 and dec.W.dim == 0 and not dec.blocks
    assert iso.check_decomposition(tau, dec) == []


def test_wiitala_interchange():
    for F in (GF2, GF4, F2T):
        _V, tau = interchange_HH(F)
        dec = iso.wiitala_decompose(tau)
        assert dec.kind == iso.KIND_INTERCHANGING
        assert len(dec.blocks) == 1 and dec.W.dim == 0 and not dec.planes
        assert iso.check_decomposition(tau, dec) == []


def test_wiitala_mixed_structure_purifies():
    # reflection plane + interchange block: kind is reflectional and the
    # output must be three planes, exercising the lookahead
    P = plane(GF2, 1, 1)
    HH, tchi = interchange_HH(GF2)
    taup = iso.reflection(P, (GF2.one, GF2.zero))
    tau = iso.orthogonal_sum_isometry([(P, taup), (HH, tchi)])
    assert iso.kind_of(tau) == iso.KIND_REFLECTIONAL
    dec = iso.wiitala_decompose(tau)
    assert dec.kind == iso.KIND_REFLECTIONAL
    assert len(dec.planes) == 3 and not dec.blocks and dec.W.dim == 0
    assert iso.check_decomposition(tau, dec) == []


def test_wiitala_with_fixed_summand():
    P1 = plane(GF4, 1, 2)
    P2 = plane(GF4, 1, 0)
    tau = iso.orthogonal_sum_isometry(
        [(P1, iso.reflection(P1, (GF4.one, GF4.zero))), (P2, iso.identity_isometry(P2))]
    )
    dec = iso.wiitala_decompose(tau)
    assert dec.kind == iso.KIND_REFLECTIONAL
    assert dec.W.dim == 2 and len(dec.planes) == 1
    assert iso.check_decomposition(tau, dec) == []


def test_kind_of_examples():
    _V, tchi = interchange_HH(GF2)
    assert iso.kind_of(tchi) == iso.KIND_INTERCHANGING
    P = plane(GF2, 1, 1)
    assert iso.kind_of(iso.reflection(P, (GF2.one, GF2.zero))) == iso.KIND_REFLECTIONAL
    assert iso.kind_of(iso.identity_isometry(P)) == iso.KIND_IDENTITY


def test_wiitala_agrees_with_kind_exhaustive_gf2():
    from char2split.oracle import enumerate_involutions

    for qv in itertools.product((0, 1), repeat=4):
        V = forms.QuadSpace(
            GF2,
            forms.SymBilForm(GF2, forms.symplectic_gram(GF2, 4)),
            tuple(GF2.val(c) for c in qv),
        )
        for tau in enumerate_involutions(V):
            if tau.is_identity:
                continue
            dec = iso.wiitala_decompose(tau)
            assert iso.check_decomposition(tau, dec) == []
            assert dec.kind == iso.kind_of(tau)


def test_wiitala_random_instances_all_fields():
    from char2split.oracle import random_involution_instance

    rng = random.Random(53)
    cases = [(GF2, (2, 4, 6)), (GF4, (2, 4, 6)), (F2T, (2, 4))]
    for field, dims in cases:
        for dim in dims:
            reps = 6 if isinstance(field, type(GF2)) else 3
            for _ in range(reps):
                V, tau, expected = random_involution_instance(field, dim, rng)
                dec = iso.wiitala_decompose(tau)
                assert iso.check_decomposition(tau, dec) == []
                assert dec.kind == expected
                assert iso.kind_of(tau) == expected
