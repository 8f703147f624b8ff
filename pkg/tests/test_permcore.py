from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from autcode import oracles
from autcode.coding_ce import Enumerator, build
from autcode.coding_pi2 import gen_z
from autcode.errors import CycleTypeError
from autcode.permcore import (FIN_TWO_CYCLES, INF_EVIDENCE, UNKNOWN, Comm, Conj, Fin, FinPerm,
                              Inv, Pow, Prod, Window, certificate_of, classify,
                              conjugator_finitary, cycle_profile, equal_on, eval_at,
                              eval_inverse, identity, swapadj, window_image)


def fin(*cycles):
    return Fin(FinPerm.from_cycles(*cycles))


def test_eval_transposition_and_inverse_cycle():
    assert eval_at(fin((0, 1)), 0) == 1
    assert eval_at(Inv(fin((0, 1, 2))), 0) == 2


def test_commutator_of_disjoint_swaps_fixes_5():
    # oracle: numpy composition of the four factors on window 8
    assert eval_at(Comm(fin((0, 1)), fin((2, 3))), 5) == 5


def test_eval_inverse_examples():
    assert eval_inverse(fin((0, 1)), 1) == 0
    assert eval_inverse(Pow(fin((0, 1, 2)), 2), 0) == 1  # frozen from the array oracle
    assert eval_inverse(identity(), 7) == 7


def test_window_image_examples():
    assert window_image(identity(), Window(4)) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert window_image(fin((0, 1)), Window(3)) == {0: 1, 1: 0, 2: 2}
    assert window_image(Pow(fin((0, 1, 2)), 3), Window(3)) == {0: 0, 1: 1, 2: 2}


def test_cycle_profile_examples():
    p = cycle_profile(fin((0, 1)), Window(4))
    assert p.counts == {1: 2, 2: 1} and p.escapes == 0
    p = cycle_profile(swapadj(), Window(6))
    assert p.counts == {2: 3} and p.escapes == 0
    p = cycle_profile(gen_z(), Window(8))
    assert p.counts == {1: 1} and p.escapes == 7


def test_cycle_profile_budget_must_cover_window():
    with pytest.raises(ValueError):
        cycle_profile(swapadj(), Window(8), step_budget=4)


def test_equal_on_examples():
    e = fin((0, 1))
    assert equal_on(e, e, Window(5))
    assert not equal_on(e, identity(), Window(1))
    c = build(Enumerator.from_rule("evens", 8))
    comm = Comm(c.g0, c.shifted_b(1))
    assert equal_on(comm, identity(), Window(c.scheme.encode(0, 10) + 1))


def test_conjugator_examples():
    p, q = FinPerm.from_cycles((0, 1)), FinPerm.from_cycles((2, 3))
    h = conjugator_finitary(p, q)
    assert h(0) == 2 and h(1) == 3
    assert equal_on(Conj(Fin(p), Fin(h)), Fin(q), Window(4))
    assert equal_on(Conj(Fin(p), Fin(conjugator_finitary(p, p))), Fin(p), Window(2))
    with pytest.raises(CycleTypeError):
        conjugator_finitary(p, FinPerm.from_cycles((0, 1, 2)))


def test_classify_examples():
    v = classify(fin((0, 1)), Window(8), 10)
    assert (v.kind, v.count) == (FIN_TWO_CYCLES, 1)
    v = classify(swapadj(), Window(64), 10)
    assert (v.kind, v.count, v.bound) == (INF_EVIDENCE, 32, 64)
    assert classify(gen_z(), Window(64), 10).kind == UNKNOWN


def test_certificates_of_block_products():
    from autcode.permlang import parse
    c = certificate_of(parse("swapadj*blk"))
    assert c.infinite_two_cycles and c.involution
    assert c.moved.period == 4 and c.moved.residues == {2, 3}
    c = certificate_of(parse("blk^{(0 2)}"))
    assert c.moved.moved(2) and not c.moved.moved(0) and c.moved.moved(5 * 4 + 1)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

N = 10


@st.composite
def finperms(draw, n=N):
    img = draw(st.permutations(range(n)))
    return FinPerm.from_mapping(dict(enumerate(img)))


@st.composite
def exprs(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return Fin(draw(finperms()))
    kind = draw(st.sampled_from(["inv", "pow", "prod", "conj", "comm"]))
    sub = lambda: draw(exprs(depth - 1))  # noqa: E731
    if kind == "inv":
        return Inv(sub())
    if kind == "pow":
        return Pow(sub(), draw(st.integers(-3, 3)))
    if kind == "prod":
        return Prod([sub() for _ in range(draw(st.integers(0, 3)))])
    if kind == "conj":
        return Conj(sub(), sub())
    return Comm(sub(), sub())


def _arr(e):
    return np.array([eval_at(e, x) for x in range(N)])


@given(exprs())
def test_inverse_cancels(e):
    assert all(v == k for k, v in window_image(Prod([e, Inv(e)]), Window(N)).items())
    assert all(eval_at(e, eval_inverse(e, y)) == y for y in range(N))


@given(exprs(), exprs(), exprs())
def test_product_associative(a, b, c):
    w = Window(N)
    assert window_image(Prod([Prod([a, b]), c]), w) == window_image(Prod([a, Prod([b, c])]), w)


@given(exprs(), exprs())
def test_conj_and_comm_expand(x, y):
    w = Window(N)
    assert window_image(Conj(x, y), w) == window_image(Prod([Inv(y), x, y]), w)
    assert window_image(Comm(x, y), w) == window_image(Prod([Inv(x), Inv(y), x, y]), w)


@given(exprs(), exprs())
def test_product_matches_array_oracle(x, y):
    assert (_arr(Prod([x, y])) == oracles.then(_arr(x), _arr(y))).all()


@given(finperms())
def test_profile_matches_brute_force(p):
    prof = cycle_profile(Fin(p), Window(N))
    assert prof.escapes == 0
    assert prof.counts == oracles.cycle_counts(_arr(Fin(p)))


@given(finperms(), finperms())
def test_conjugator_output(p, h):
    q = p.conj(h)
    g = conjugator_finitary(p, q)
    assert equal_on(Conj(Fin(p), Fin(g)), Fin(q), Window(N))
    assert Counter(map(len, p.cycles())) == Counter(map(len, q.cycles()))
