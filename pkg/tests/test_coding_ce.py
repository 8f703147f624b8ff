import pytest
from hypothesis import given, strategies as st

from autcode import oracles
from autcode.coding_ce import (IN, NOT_BY_HORIZON, Enumerator, build, column_points,
                               decode_membership, default_scheme_z, gen_b, gen_g0, gen_g1,
                               gen_w, in_ground_truth, required_window)
from autcode.errors import ConstructionError, WindowError
from autcode.permcore import Prod, Window, equal_on, eval_at, identity, window_image

S = default_scheme_z()
E8 = Enumerator.from_rule("evens", 8)


def test_scheme_examples():
    assert S.encode(0, 0) == 0
    assert S.encode(0, 1) == 2
    assert S.encode(-1, 0) == 1


@given(st.integers(-50, 50), st.integers(0, 200))
def test_scheme_bijective_and_monotone(i, j):
    assert S.decode(S.encode(i, j)) == (i, j)
    assert S.encode(i, j) < S.encode(i, j + 1)


def test_w_g0_g1():
    w, g0, g1 = gen_w(S), gen_g0(S), gen_g1(S)
    assert eval_at(w, S.encode(0, 5)) == S.encode(1, 5)
    assert eval_at(w, S.encode(-1, 0)) == S.encode(0, 0)
    img = window_image(w, Window(64))
    assert len(set(img.values())) == 64
    assert eval_at(g0, S.encode(0, 0)) == S.encode(0, 1)
    assert eval_at(g1, S.encode(0, 0)) == S.encode(0, 0)
    assert eval_at(g0, S.encode(3, 7)) == S.encode(3, 7)


def _b_by_product(e, points):
    # apply the defining transpositions one after another
    img = {x: x for x in points}
    for t in range(e.horizon):
        n = e.h(t)
        if n is None:
            continue
        a, b = S.encode(n, t), S.encode(n, t + 1)
        for x, y in img.items():
            img[x] = b if y == a else a if y == b else y
    return img


def test_b_examples():
    b = gen_b(S, E8)
    assert eval_at(b, S.encode(4, 2)) == S.encode(4, 3)
    assert eval_at(b, S.encode(1, 0)) == S.encode(1, 0)
    assert equal_on(Prod([b, b]), identity(), Window(128))
    ref = _b_by_product(E8, range(400))
    assert all(eval_at(b, x) == y for x, y in ref.items())


def test_non_injective_enumerator_rejected():
    with pytest.raises(ConstructionError):
        Enumerator({0: 3, 1: 3}, 2)


def test_decode_examples():
    assert str(decode_membership(0, S, E8)) == "In(0)"
    assert str(decode_membership(1, S, E8)) == "NotByHorizon(8)"
    assert str(decode_membership(2, S, E8)) == "In(1)"


def test_decode_window_too_small():
    with pytest.raises(WindowError):
        decode_membership(0, S, E8, Window(10))


def test_column_locality_and_involutions():
    c = build(E8)
    w = Window(S.encode(2, 12) + 1)
    for n in range(6):
        for comm in c.commutators(n):
            assert all(eval_at(comm, x) == x for x in w if S.decode(x)[0] != 0)
    for g in (c.b, c.g0, c.g1):
        assert equal_on(Prod([g, g]), identity(), Window(256))


@pytest.mark.parametrize("name", ["evens", "empty", "primes25"])
def test_exact_decoding(name):
    e = Enumerator.from_rule(name, 40)
    c = build(e)
    for n in range(32):
        v = decode_membership(n, S, e, construction=c)
        assert v.member == in_ground_truth(name, n)
        if v.kind == IN:
            t = v.stage
            assert e.h(t) == n and t < e.horizon
            assert v.nontrivial == (t % 2 == 1, t % 2 == 0)
            # moved rows agree with the table simulation of column 0
            pts = column_points(S, 0, required_window(S, e.horizon))
            rows0, rows1 = oracles.ce_commutators_on_column0(t, len(pts))
            g0c, g1c = c.commutators(n)
            assert [S.decode(x)[1] for x in pts if eval_at(g0c, x) != x] == rows0
            assert [S.decode(x)[1] for x in pts if eval_at(g1c, x) != x] == rows1
        else:
            assert v.kind == NOT_BY_HORIZON


@given(st.dictionaries(st.integers(0, 20), st.integers(0, 15), max_size=12))
def test_random_injective_enumerators(table):
    seen = {}
    vals = {}
    for t, n in sorted(table.items()):
        if n not in seen:
            seen[n] = t
            vals[t] = n
    e = Enumerator(vals, 21)
    c = build(e)
    for n in range(16):
        v = decode_membership(n, S, e, construction=c)
        assert v.member == (n in seen)
        if v.member:
            assert v.stage == seen[n]


def test_enumerator_file(tmp_path):
    f = tmp_path / "h.txt"
    f.write_text("# stage value\n0 5\n1 2\n")
    e = Enumerator.from_file(f)
    assert e.horizon == 2 and e.enumerated() == {5, 2}
