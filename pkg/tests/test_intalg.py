import random
from fractions import Fraction as Fr
from itertools import product

import pytest
from hypothesis import given, strategies as st

from autcode import oracles
from autcode.errors import AutcodeError, BudgetError, WindowError
from autcode.intalg import (INF, NO_SUP, ONE, SUP_EXISTS, ZERO, BElem, PhiClass, apply_H,
                            complement, format_belem, join, kernel_witness, leq, meet,
                            moved_region, parse_belem, phi_holds, psi_check,
                            psi_conjugation_invariance)
from autcode.permcore import Fin, FinPerm, Prod, blk, identity
from autcode.permlang import parse

B = parse_belem


def fin(*c):
    return Fin(FinPerm.from_cycles(*c))


def test_boolean_examples():
    assert join(B("[0,1)"), B("[1,2)")) == B("[0,2)")
    assert complement(B("[0,1)")) == B("[-inf,0);[1,+inf)")
    m = meet(B("[0,2)"), B("[1,3)"))
    assert m == B("[1,2)")
    # membership sampling at 20 rationals
    for k in range(20):
        q = Fr(k, 5) - 1
        assert m.contains_point(q) == (0 <= q < 2 and 1 <= q < 3)


def test_text_format():
    assert format_belem(ZERO) == "0"
    assert format_belem(ONE) == "[-inf,+inf)"
    x = B("[1/2,3);[-inf,-1)")
    assert format_belem(x) == "[-inf,-1);[1/2,3)"
    assert B(format_belem(x)) == x
    with pytest.raises(AutcodeError):
        B("(0,1]")


def test_apply_examples():
    p = fin((0, 1))
    assert apply_H(p, B("[0,1)")) == B("[1,2)")
    assert apply_H(p, B("[-1,1/2)")) == B("[-1,0);[1,3/2)")
    x = B("[-2,7/3);[5,9)")
    assert apply_H(identity(), x) == x
    # a tail beyond the support is left alone
    assert apply_H(p, B("[1/2,+inf)")) == B("[0,1);[3/2,+inf)")


def test_apply_budget():
    with pytest.raises(BudgetError):
        apply_H(blk(), B("[0,+inf)"))
    with pytest.raises(BudgetError):
        apply_H(blk(), B("[0,1000)"), budget=100)
    assert apply_H(blk(), B("[0,1/2);[5,6)")) == B("[1,3/2);[4,5)")


def test_moved_region_examples():
    assert moved_region(PhiClass.finitary(FinPerm.from_cycles((0, 1)))) == (B("[0,2)"), False)
    assert moved_region(PhiClass.finitary(FinPerm.from_mapping({})))[0] == ZERO
    assert moved_region(PhiClass.certified(blk()), 8) == (B("[0,2);[4,6)"), True)


def test_phi_examples():
    c = PhiClass.finitary(FinPerm.from_cycles((0, 1)))
    assert phi_holds(B("[0,1)"), c)
    assert not phi_holds(B("[0,3)"), c)
    assert phi_holds(ZERO, c)
    k = PhiClass.certified(blk())
    assert phi_holds(B("[100,101)"), k) and not phi_holds(B("[102,103)"), k)
    assert not phi_holds(B("[0,+inf)"), k)


def test_psi_examples():
    assert psi_check(PhiClass.finitary(FinPerm.from_cycles((0, 1))), 64).sup == B("[0,2)")
    v = psi_check(PhiClass.finitary(FinPerm.from_mapping({})), 64)
    assert v.kind == SUP_EXISTS and v.sup == ZERO
    v = psi_check(PhiClass.certified(blk()), 64, candidates=[ONE])
    (r,) = v.refutations
    assert v.kind == NO_SUP and r.how == "smaller" and r.verified
    assert r.witness == ONE - B("[2,3)")
    with pytest.raises(WindowError):
        psi_check(PhiClass.certified(blk()), 1)


def test_psi_all_default_candidates_verified():
    for text in ("blk", "swapadj*blk", "blk^{(0 6)}"):
        v = psi_check(PhiClass.of(parse(text)), 64)
        assert v.kind == NO_SUP and v.verified


def test_conjugation_invariance_examples():
    assert psi_conjugation_invariance(PhiClass.finitary(FinPerm.from_cycles((0, 1))),
                                      FinPerm.from_cycles((1, 2)), 64)
    assert psi_conjugation_invariance(PhiClass.certified(blk()), FinPerm.from_cycles((0, 4)), 64)
    assert psi_conjugation_invariance(PhiClass.finitary(FinPerm.from_mapping({})),
                                      FinPerm.from_cycles((3, 9, 4)), 64)


def test_kernel_witness_examples():
    k = kernel_witness(FinPerm.from_cycles((0, 1)))
    assert k.a == B("[0,1)") and B("[1,2)") in k.image and B("[1,2)") not in k.subalgebra
    assert kernel_witness(FinPerm.from_cycles((2, 5))).a == B("[2,3)")
    with pytest.raises(AutcodeError):
        kernel_witness(FinPerm.from_mapping({}))


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

ends = st.fractions(min_value=-4, max_value=14, max_denominator=4)


@st.composite
def belems(draw):
    pieces = draw(st.lists(st.tuples(ends, ends), max_size=4))
    if draw(st.booleans()):
        pieces.append((draw(ends), INF))
    return BElem.of(pieces)


perms = st.permutations(range(8)).map(lambda a: FinPerm.from_mapping(dict(enumerate(a))))


@given(belems(), belems(), belems())
def test_boolean_laws(x, y, z):
    assert join(x, meet(y, z)) == meet(join(x, y), join(x, z))
    assert meet(x, join(y, z)) == join(meet(x, y), meet(x, z))
    assert complement(join(x, y)) == meet(complement(x), complement(y))
    assert complement(complement(x)) == x
    assert join(join(x, y), z) == join(x, join(y, z))
    assert BElem.of(x.intervals) == x
    assert leq(meet(x, y), x)


@given(perms, perms, belems(), belems())
def test_lift_is_homomorphism(p, q, x, y):
    P, Q = Fin(p), Fin(q)
    assert apply_H(Prod([P, Q]), x) == apply_H(Q, apply_H(P, x))
    assert apply_H(P, join(x, y)) == join(apply_H(P, x), apply_H(P, y))
    assert apply_H(P, meet(x, y)) == meet(apply_H(P, x), apply_H(P, y))
    assert apply_H(P, complement(x)) == complement(apply_H(P, x))
    hx = apply_H(P, x)
    pinv = p.inverse()
    for r in oracles.sample_points(-2, 12):
        assert hx.contains_point(r) == oracles.in_union(x.intervals,
                                                        oracles.lifted_preimage(pinv, r))


@given(perms, perms)
def test_lift_is_injective(p, q):
    if p != q:
        assert any(apply_H(Fin(p), BElem.unit(n)) != apply_H(Fin(q), BElem.unit(n))
                   for n in range(8))


@given(perms, belems(), belems())
def test_phi_downward_closed(p, u, v):
    c = PhiClass.finitary(p)
    if phi_holds(u, c):
        assert phi_holds(meet(u, v), c)


def test_sup_is_max_of_phi_set_exhaustively():
    rng = random.Random(3)
    for _ in range(10):
        p = FinPerm.from_cycles(tuple(rng.sample(range(8), 3)))
        c = PhiClass.finitary(p)
        sup = psi_check(c, 64).sup
        for bits in product((0, 1), repeat=8):
            u = BElem.of([(n, n + 1) for n in range(8) if bits[n]])
            assert phi_holds(u, c) == leq(u, sup)
