import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from autcode import oracles
from autcode.errors import AutcodeError, CertificateError
from autcode.fields import GF4, PrimeField, Rationals, get_field
from autcode.permcore import Fin, FinPerm, Prod, Window, blk, swapadj
from autcode.vspace import (GslElement, PermInduced, Scaled, Vector, compose, delta_embed,
                            equivalent_mod_scalar, finite_modification, format_subspace,
                            format_vector, gsl_equal_on, guichard_membership, identity_map,
                            induced, intersect, invert, leq, member, normalize, nsim_identity,
                            parse_subspace, parse_vector, property_D_check, random_subspace,
                            random_vector, refute_property_D, span, subspace_sum, vec)

Q, G4, F5 = Rationals(), GF4(), PrimeField(5)


def e(F, i):
    return Vector.basis(F, i)


def fin(*c):
    return Fin(FinPerm.from_cycles(*c))


@pytest.mark.parametrize("F", [G4, F5, PrimeField(2), PrimeField(97)])
def test_finite_field_axioms(F):
    els = F.elements()
    for a in els:
        assert F.add(a, F.neg(a)) == F.zero
        if a != F.zero:
            assert F.mul(a, F.inv(a)) == F.one
        for b in els:
            assert F.add(a, b) == F.add(b, a) and F.mul(a, b) == F.mul(b, a)
    for name, s in F.automorphisms().items():
        assert sorted(map(s, els)) == sorted(els)
        for a in els:
            for b in els:
                assert s(F.add(a, b)) == F.add(s(a), s(b))
                assert s(F.mul(a, b)) == F.mul(s(a), s(b))


def test_field_lookup_and_limits():
    assert get_field("GF(5)") == F5 and get_field("GF4") == G4 and get_field("Q") == Q
    with pytest.raises(AutcodeError):
        get_field("GF(101)")
    assert [Q.enumerate(j) for j in range(7)] == [0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2)]


def test_apply_examples():
    m = PermInduced(fin((0, 1)), Q, Q.aut("id"))
    assert m.apply(e(Q, 0)) == e(Q, 1)
    frob = PermInduced(fin((0, 1)), G4, G4.aut("frob"))
    # brute force over GF4: x * e_0 goes to x^2 * e_1
    for x in G4.elements():
        assert frob.apply(e(G4, 0).scale(x)) == e(G4, 1).scale(G4.mul(x, x))
    v = vec(Q, {0: 3, 5: Fraction(1, 2)})
    assert identity_map(Q).apply(v) == v


def test_compose_and_invert_examples():
    p, q = fin((0, 1, 2)), fin((1, 5))
    a, b = PermInduced(p, Q, Q.aut("id")), PermInduced(q, Q, Q.aut("id"))
    pq = PermInduced(Prod([p, q]), Q, Q.aut("id"))
    for i in range(8):
        assert compose(a, b).apply(e(Q, i)) == pq.apply(e(Q, i)) == b.apply(a.apply(e(Q, i)))
    s = invert(Scaled(Fraction(3), identity_map(Q)))
    assert s.apply(e(Q, 4)) == e(Q, 4).scale(Fraction(1, 3))
    f = PermInduced(Prod(()), G4, G4.aut("frob"))
    assert f.sigma.then(f.sigma).is_identity()
    assert invert(f).sigma.name == "frob"


def test_singular_table_rejected():
    m = finite_modification(Q, {0: vec(Q, {1: 1})})
    with pytest.raises(AutcodeError):
        invert(m)


def test_delta_examples():
    d = delta_embed(fin((0, 1)))
    assert d.rep.image(0) == e(Q, 1) and d.rep.image(1) == e(Q, 0)
    assert gsl_equal_on(delta_embed(Prod(())), GslElement.of(identity_map(Q)), Window(8))
    p, q = fin((0, 3), (1, 2)), fin((2, 7, 9))
    assert gsl_equal_on(delta_embed(Prod([p, q])), delta_embed(p).then(delta_embed(q)), Window(16))


def test_equivalence_examples():
    m = PermInduced(fin((0, 2)), F5, F5.aut("id"))
    assert equivalent_mod_scalar(m, Scaled(3, m), Window(8))
    a = PermInduced(fin((0, 1)), G4, G4.aut("id"))
    b = PermInduced(fin((0, 1)), G4, G4.aut("frob"))
    assert not equivalent_mod_scalar(a, b, Window(8))
    assert not equivalent_mod_scalar(delta_embed(fin((0, 1))).rep,
                                     delta_embed(fin((0, 1, 2))).rep, Window(8))


def test_nsim_examples():
    assert not nsim_identity(identity_map(Q), Window(8))
    assert not nsim_identity(Scaled(Fraction(2), identity_map(Q)), Window(8))
    assert nsim_identity(delta_embed(fin((0, 1))).rep, Window(8))
    # e_0 fixed, a later basis vector moved
    assert nsim_identity(delta_embed(fin((3, 4))).rep, Window(8))


def test_subspace_examples():
    assert span(Q, [e(Q, 0), e(Q, 0) + e(Q, 1)]) == span(Q, [e(Q, 0), e(Q, 1)])
    F2 = PrimeField(2)
    meet = intersect(span(F2, [e(F2, 0), e(F2, 1)]), span(F2, [e(F2, 1), e(F2, 2)]))
    # brute force over GF(2)^3: the common vectors are 0 and e_1
    common = oracles.span_elements(np.array([[1, 0, 0], [0, 1, 0]]), 2) & \
        oracles.span_elements(np.array([[0, 1, 0], [0, 0, 1]]), 2)
    assert common == {(0, 0, 0), (0, 1, 0)}
    assert meet == span(F2, [e(F2, 1)])
    S = span(Q, [vec(Q, {0: 1, 3: 2})])
    assert subspace_sum(S, S) == S


def test_induced_examples():
    assert induced(delta_embed(fin((0, 1))), span(Q, [e(Q, 0)])) == span(Q, [e(Q, 1)])
    S = span(Q, [vec(Q, {0: 1, 2: 5}), e(Q, 4)])
    assert induced(GslElement.of(identity_map(Q)), S) == S


def test_guichard_examples():
    assert guichard_membership(1, e(Q, 0))
    assert guichard_membership(3, e(Q, 0) + e(Q, 1))
    assert not guichard_membership(1, e(Q, 1))
    assert guichard_membership(2, e(Q, 3)) and not guichard_membership(2, e(Q, 2))
    assert guichard_membership(4, e(Q, 1) + e(Q, 2)) and not guichard_membership(4, e(Q, 0))
    # V_5 generators are e_{2j} + alpha_j e_{2j+1}
    v = e(Q, 0) + e(Q, 2) + e(Q, 3) + e(Q, 4).scale(2) + e(Q, 5).scale(-2)
    assert guichard_membership(5, v)
    assert not guichard_membership(5, e(Q, 1))


def test_property_D_examples():
    m = PermInduced(fin((0, 1)), Q, Q.aut("id"))
    v = vec(Q, {0: 3, 2: 1})
    assert v - m.apply(v) == vec(Q, {0: 3, 1: -3})
    assert property_D_check(m, [v])
    assert property_D_check(PermInduced(Prod(()), Q, Q.aut("id")), [v])
    rng = random.Random(1)
    m5 = PermInduced(fin((0, 4), (2, 7)), F5, F5.aut("id"))
    assert property_D_check(m5, [random_vector(F5, rng, 10) for _ in range(100)])


def test_refutation_examples():
    W = span(Q, [vec(Q, {0: 1, 1: -1})])
    assert refute_property_D(swapadj(), W) == e(Q, 2)
    assert refute_property_D(swapadj(), span(Q, [])) == e(Q, 0)
    with pytest.raises(CertificateError):
        refute_property_D(fin((0, 1)), W)


def test_text_round_trip():
    v = parse_vector("Q[0:1/2, 3:-1/1]")
    assert format_vector(v) == "Q[0:1/2, 3:-1/1]"
    S = span(F5, [vec(F5, {0: 1, 2: 3}), vec(F5, {1: 4})])
    assert parse_subspace(format_subspace(S)) == S


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------


def _rand_map(F, rng, sigma):
    while True:
        table = {i: random_vector(F, rng, 6, 0.5) for i in range(6) if rng.random() < 0.5}
        m = finite_modification(F, table, sigma)
        try:
            invert(m)
        except AutcodeError:
            continue
        return compose(m, PermInduced(fin(tuple(rng.sample(range(8), 3))), F, F.aut("id")))


@given(st.integers(0, 10**6), st.sampled_from(["id", "frob"]))
def test_semilinearity_and_inverse(seed, twist):
    rng = random.Random(seed)
    F = G4
    s = F.aut(twist)
    m = _rand_map(F, rng, s)
    a, b = F.random(rng), F.random(rng)
    u, v = random_vector(F, rng, 8), random_vector(F, rng, 8)
    assert m.apply(u.scale(a) + v.scale(b)) == m.apply(u).scale(s(a)) + m.apply(v).scale(s(b))
    mi = invert(m)
    assert mi.apply(m.apply(u)) == u and m.apply(mi.apply(u)) == u


@pytest.mark.parametrize("F", [G4, F5])
def test_normal_form_ignores_scalars_exhaustively(F):
    rng = random.Random(7)
    for _ in range(10):
        m = _rand_map(F, rng, F.aut("id"))
        n0 = normalize(m)
        img = n0.image(0)
        assert img[img.leading()] == F.one
        for alpha in F.elements()[1:]:
            assert gsl_equal_on(GslElement.of(Scaled(alpha, m)), GslElement(n0), Window(10))


@given(st.permutations(range(7)), st.permutations(range(7)))
def test_delta_injective_mod_scalars(a, b):
    p = Fin(FinPerm.from_mapping(dict(enumerate(a))))
    q = Fin(FinPerm.from_mapping(dict(enumerate(b))))
    same = equivalent_mod_scalar(delta_embed(p).rep, delta_embed(q).rep, Window(7))
    assert same == (list(a) == list(b))


def _np(S, dim):
    return np.array([[x[i] for i in range(dim)] for x in S.basis], dtype=np.int64).reshape(-1, dim)


@given(st.integers(0, 10**6))
def test_lattice_laws_and_oracle(seed):
    rng = random.Random(seed)
    S, T, U = (random_subspace(F5, rng, 4, 7) for _ in range(3))
    assert subspace_sum(subspace_sum(S, T), U) == subspace_sum(S, subspace_sum(T, U))
    assert intersect(intersect(S, T), U) == intersect(S, intersect(T, U))
    assert intersect(S, T) == intersect(T, S)
    assert intersect(S, subspace_sum(S, T)) == S == subspace_sum(S, intersect(S, T))
    M = intersect(S, T)
    assert leq(M, S) and leq(M, T)
    r = oracles.rank_mod_p(np.vstack([_np(S, 7), _np(T, 7)]), 5)
    assert M.dim == S.dim + T.dim - r
    for b in S.basis:
        assert member(b, S)


@given(st.integers(0, 10**6))
def test_induced_is_lattice_map(seed):
    rng = random.Random(seed)
    g = GslElement.of(_rand_map(F5, rng, F5.aut("id")))
    S, T = random_subspace(F5, rng, 4, 7), random_subspace(F5, rng, 4, 7)
    assert induced(g, subspace_sum(S, T)) == subspace_sum(induced(g, S), induced(g, T))
    assert induced(g, intersect(S, T)) == intersect(induced(g, S), induced(g, T))
    assert induced(g, S).dim == S.dim


@given(st.integers(0, 10**6))
def test_refutation_always_verified(seed):
    rng = random.Random(seed)
    F = rng.choice([Q, F5])
    W = random_subspace(F, rng, 8, 20)
    x = refute_property_D(blk(), W, F)
    m = PermInduced(blk(), F, F.aut("id"))
    assert not member(x - m.apply(x), W)
