import pytest
from hypothesis import given, strategies as st

from autcode import oracles
from autcode.coding_pi2 import (ColumnScheme2, StageBuilder, build_b, builder_of,
                                builtin_predicate, column_window, decidable_window,
                                decode_at_horizon, default_scheme_2, finword_for, gen_p0,
                                gen_pn, gen_tau, gen_w3, gen_z, product_on_column,
                                resolve_predicate, stages_for_column, transposition_word,
                                two_cycle_count)
from autcode.errors import BudgetError
from autcode.pairing import cantor
from autcode.permcore import (FIN_TWO_CYCLES, INF_EVIDENCE, Fin, FinPerm, Window, equal_on,
                              eval_at, identity, window_image)
from autcode.permlang import to_text

S = default_scheme_2()


def test_scheme_examples():
    assert S.encode(0, 1, 0) == 0
    assert S.encode(0, 2, 0) == 1
    assert S.decode(S.encode(-1, 2, 5)) == (-1, 2, 5)


@given(st.integers(-30, 30), st.sampled_from([1, 2]), st.integers(0, 100))
def test_scheme_bijective_and_monotone(i, j, k):
    assert S.decode(S.encode(i, j, k)) == (i, j, k)
    assert S.encode(i, j, k) < S.encode(i, j, k + 1)


def test_w3_p0_pn():
    w = gen_w3(S)
    assert eval_at(w, S.encode(1, 1, 4)) == S.encode(0, 1, 4)
    assert eval_at(w, S.encode(0, 2, 0)) == S.encode(-1, 2, 0)
    assert len(set(window_image(w, Window(64)).values())) == 64
    assert eval_at(gen_p0(S), S.encode(0, 1, 7)) == S.encode(0, 2, 7)
    p2 = gen_pn(S, 2)
    assert eval_at(p2, S.encode(2, 1, 3)) == S.encode(2, 2, 3)
    assert eval_at(p2, S.encode(0, 1, 3)) == S.encode(0, 1, 3)


def test_z_rule():
    z = gen_z()
    assert [eval_at(z, k) for k in (0, 2, 3, 4, 6)] == [0, 1, 5, 2, 4]


def test_word_examples():
    # left-to-right products: (0 2) is tau^{z^-1} and (0 3) is tau^{z^1}
    assert to_text(transposition_word(0, 2)) == "tau^{z^{-1}}"
    assert to_text(transposition_word(0, 3)) == "tau^{z^1}"
    assert to_text(transposition_word(0, 1)) == "tau"
    w23 = transposition_word(2, 3)
    assert to_text(w23) == "(tau^{z^{-1}})^{tau^{z^1}}"
    assert equal_on(w23, Fin(FinPerm.from_cycles((2, 3))), Window(8))
    with pytest.raises(ValueError):
        transposition_word(4, 4)


def test_words_complete():
    for n in range(32):
        for m in range(n + 1, 32):
            img = window_image(transposition_word(n, m), Window(128))
            assert [img[x] for x in range(128)] == oracles.transposition(n, m, 128).tolist()


def test_finword_examples():
    assert finword_for(FinPerm.from_cycles((0, 1))) == gen_tau()
    f = FinPerm.from_cycles((2, 3), (4, 6))
    assert equal_on(finword_for(f), Fin(f), Window(16))
    assert equal_on(finword_for(FinPerm.from_mapping({})), identity(), Window(8))
    with pytest.raises(ValueError):
        finword_for(FinPerm.from_cycles((0, 1, 2)))


def test_first_column0_stage_pairs_two_least_points():
    b = build_b(S, builtin_predicate("always"), 10)
    p, q, r = (S.encode(0, 2, k) for k in range(3))
    assert eval_at(b, p) == q and eval_at(b, q) == p and eval_at(b, r) == r
    assert eval_at(b, S.encode(0, 1, 0)) == S.encode(0, 1, 0)


def test_never_is_identity():
    b = build_b(S, builtin_predicate("never"), 1600)
    assert equal_on(b, identity(), decidable_window(1600))


def test_budget_error_names_stage():
    b = build_b(S, builtin_predicate("always"), 5)
    x = S.encode(0, 2, 30)
    with pytest.raises(BudgetError) as ei:
        eval_at(b, x)
    assert ei.value.needed == cantor(0, 10) + 1


def test_two_cycle_count_examples():
    always, never, lt = (builtin_predicate(n) for n in ("always", "never", "lt"))
    # oracle counts: 10 stages of column 0 up to t = 9, 3 true instances of t < 3
    assert two_cycle_count(0, always, cantor(0, 9) + 1) == 10
    assert two_cycle_count(0, always, cantor(0, 6) + 1) == 7
    assert all(two_cycle_count(n, never, 400) == 0 for n in range(5))
    assert two_cycle_count(3, lt, cantor(3, 2) + 1) == 3
    assert two_cycle_count(3, lt, 1600) == 3


@pytest.mark.parametrize("name", ["always", "never", "lt", "even"])
def test_bookkeeping_and_prefix_stability(name):
    R = builtin_predicate(name)
    bl = StageBuilder(S, R, 400)
    prev = {}
    for stage in (50, 150, 400):
        bl.advance_to(stage)
        for n in range(12):
            touched = oracles.stages_touching(n, stage)
            assert bl.consumed.get(n, 0) == 3 * touched
            assert bl.case1.get(n, 0) == oracles.stage_count(n, stage, R)
        snap = bl.snapshot()
        assert all(snap.get(x, x) == y for x, y in prev.items())
        assert all(not bl.in_E(x) or S.decode(x)[0] < 0 or x in bl.used() for x in range(500))
        prev = snap


@pytest.mark.parametrize("name", ["always", "lt", "even"])
def test_doubling_law(name):
    R = builtin_predicate(name)
    for n in range(6):
        prof = product_on_column(n, R, 400, off_window=decidable_window(400))
        assert prof.two_cycles() == 2 * two_cycle_count(n, R, 400)
        assert set(prof.counts) <= {1, 2} and prof.escapes == 0


def test_product_never_is_identity_profile():
    prof = product_on_column(0, builtin_predicate("never"), 100)
    assert set(prof.counts) == {1}


def test_decode_examples():
    always, lt, even = (builtin_predicate(n) for n in ("always", "lt", "even"))
    assert decode_at_horizon(5, always, 1600, 10).kind == INF_EVIDENCE
    v = decode_at_horizon(4, lt, 1600, 10)
    assert (v.kind, v.count) == (FIN_TWO_CYCLES, 4)
    v = decode_at_horizon(3, even, 1600, 10)
    assert (v.kind, v.count) == (FIN_TWO_CYCLES, 0)


def test_table_predicate(tmp_path):
    f = tmp_path / "r.txt"
    f.write_text("0 0 1\n0 1 1\n1 0 0\n")
    R = resolve_predicate("@" + str(f))
    assert R(0, 1) and not R(1, 0) and not R(5, 5)
    assert two_cycle_count(0, R, 400) == 2
    assert decode_at_horizon(0, R, 400, 10).kind == FIN_TWO_CYCLES
    assert stages_for_column(0, 3) == [0, 1]
