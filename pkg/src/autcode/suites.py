"""The acceptance criteria and a randomized property suite.

Each acceptance criterion is a function returning ``(ok, detail)``;
:func:`run_acceptance` times them and produces one :class:`Outcome` per
criterion.  All randomness comes from ``random.Random(seed)``.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import coding_ce, coding_pi2, intalg, oracles, permlang, pipeline, vspace
from .fields import GF4, PrimeField, Rationals
from .errors import AutcodeError
from .permcore import (FIN_TWO_CYCLES, INF_EVIDENCE, Fin, FinPerm, Inv, Prod, Window, blk,
                       equal_on, swapadj, window_image)
from .report import Report

SETS = ("evens", "empty", "primes25")
PREDICATES = coding_pi2.BUILTIN_PREDICATES
MILESTONES = (100, 400, 1600)


@dataclass(frozen=True)
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return (f"[{'PASS' if self.ok else 'FAIL'}] criterion {self.number:2d} "
                f"{self.title}: {self.detail} ({self.seconds:.2f}s)")


def random_finperm(rng: random.Random, max_point: int = 12, min_moves: int = 0) -> FinPerm:
    while True:
        k = rng.randint(0, max_point)
        pts = rng.sample(range(max_point), k)
        img = pts[:]
        rng.shuffle(img)
        p = FinPerm.from_mapping(dict(zip(pts, img)))
        if len(p.support) >= min_moves:
            return p


def random_involution(rng: random.Random, max_point: int = 16, min_swaps: int = 1) -> FinPerm:
    k = rng.randint(min_swaps, max_point // 2)
    pts = rng.sample(range(max_point), 2 * k)
    return FinPerm.from_cycles(*[(pts[2 * i], pts[2 * i + 1]) for i in range(k)])


def random_belem(rng: random.Random, lo: int = -3, hi: int = 14, pieces: int = 4) -> intalg.BElem:
    out = []
    for _ in range(rng.randint(0, pieces)):
        a = Fraction(rng.randint(lo * 4, hi * 4), rng.choice((1, 2, 4)))
        b = a + Fraction(rng.randint(1, 12), rng.choice((1, 2, 3)))
        out.append((a, b))
    if rng.random() < 0.1:
        out.append((Fraction(rng.randint(lo, hi)), intalg.INF))
    if rng.random() < 0.1:
        out.append((-intalg.INF, Fraction(rng.randint(lo, 0))))
    return intalg.BElem.of(out)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def _decode_table(horizon: int = 200, nmax: int = 32):
    table = {}
    for name in SETS:
        e = coding_ce.Enumerator.from_rule(name, horizon)
        c = coding_ce.build(e)
        for n in range(nmax):
            table[name, n] = (coding_ce.decode_membership(n, c.scheme, e, construction=c), c)
    return table


def crit_decode_exactness(seed: int):
    t0 = time.perf_counter()
    table = _decode_table()
    bad = [(name, n) for (name, n), (v, _) in table.items()
           if v.member != coding_ce.in_ground_truth(name, n)]
    secs = time.perf_counter() - t0
    ok = not bad and secs < 10.0
    return ok, f"{len(table) - len(bad)}/{len(table)} verdicts exact, {secs:.2f}s of 10s budget"


def crit_parity(seed: int):
    table = _decode_table()
    checked = bad = 0
    for (name, n), (v, _) in table.items():
        if not v.member:
            continue
        checked += 1
        t = v.stage
        want = (t % 2 == 1, t % 2 == 0)
        # independent column-0 simulation of the moved rows
        r0, r1 = oracles.ce_commutators_on_column0(t, t + 8)
        if v.nontrivial != want or (bool(r0), bool(r1)) != want:
            bad += 1
    return bad == 0 and checked > 0, f"{checked - bad}/{checked} In cases match stage parity"


def crit_words(seed: int):
    t0 = time.perf_counter()
    bad = 0
    total = 0
    for n in range(32):
        for m in range(n + 1, 32):
            total += 1
            img = window_image(coding_pi2.transposition_word(n, m), Window(128))
            ref = oracles.transposition(n, m, 128)
            if [img[x] for x in range(128)] != ref.tolist():
                bad += 1
    secs = time.perf_counter() - t0
    ok = bad == 0 and secs < 5.0
    return ok, f"{total - bad}/{total} words exact on window 128, {secs:.2f}s of 5s budget"


def crit_stage_bookkeeping(seed: int):
    s = coding_pi2.default_scheme_2()
    bad = []
    for name in PREDICATES:
        R = coding_pi2.builtin_predicate(name)
        prev = {n: -1 for n in range(16)}
        for S in MILESTONES:
            off = coding_pi2.decidable_window(S, s)
            for n in range(16):
                got = coding_pi2.two_cycle_count(n, R, S, s)
                want = oracles.stage_count(n, S, R)
                if got != want or got < prev[n]:
                    bad.append((name, S, n, "count"))
                prev[n] = got
                w = coding_pi2.column_window(s, n, S)
                prof = coding_pi2.product_on_column(n, R, S, w, s,
                                                    off_window=Window(min(off.bound, w.bound)))
                if prof.two_cycles() != 2 * got or prof.escapes:
                    bad.append((name, S, n, "doubling"))
    total = len(PREDICATES) * len(MILESTONES) * 16
    return not bad, f"{total} (predicate, S, n) cases, {len(bad)} failures {bad[:3]}"


def crit_classification(seed: int):
    bad = []
    for name in PREDICATES:
        R = coding_pi2.builtin_predicate(name)
        for n in range(16):
            v = coding_pi2.decode_at_horizon(n, R, 1600, 10)
            want = INF_EVIDENCE if R.truth_class(n) else FIN_TWO_CYCLES
            if v.kind != want:
                bad.append((name, n, str(v)))
    return not bad, f"{64 - len(bad)}/64 verdicts match truth {bad[:3]}"


def crit_h_laws(seed: int):
    rng = random.Random(seed)
    bad = 0
    pts = oracles.sample_points(-3, 30)
    for _ in range(200):
        p, q = random_finperm(rng), random_finperm(rng)
        x, y = random_belem(rng), random_belem(rng)
        P, Q = Fin(p), Fin(q)
        hx = intalg.apply_H(P, x)
        ok = intalg.apply_H(Prod((P, Q)), x) == intalg.apply_H(Q, hx)
        ok &= intalg.apply_H(P, intalg.join(x, y)) == intalg.join(hx, intalg.apply_H(P, y))
        ok &= intalg.apply_H(P, intalg.meet(x, y)) == intalg.meet(hx, intalg.apply_H(P, y))
        ok &= intalg.apply_H(P, intalg.complement(x)) == intalg.complement(hx)
        # pointwise: r in H(p)(x) iff p~^-1(r) in x
        pinv = p.inverse()
        ok &= all(hx.contains_point(r) == oracles.in_union(
            x.intervals, oracles.lifted_preimage(pinv, r)) for r in pts)
        bad += not ok
    return bad == 0, f"{200 - bad}/200 random pairs satisfy the lift laws"


def _sub_unions_phi(c: intalg.PhiClass, region: intalg.BElem, span: int) -> bool:
    """Every union of unit blocks below ``span`` is Phi iff it sits inside the region."""
    units = list(range(span))
    for mask in range(1 << span):
        u = intalg.BElem.of([(n, n + 1) for i, n in enumerate(units) if mask >> i & 1])
        if intalg.phi_holds(u, c) != intalg.leq(u, region):
            return False
    return True


def crit_psi(seed: int):
    rng = random.Random(seed)
    bad = []
    for i in range(20):
        p = random_finperm(rng, max_point=10, min_moves=2)
        c = intalg.PhiClass.finitary(p)
        v = intalg.psi_check(c, 64)
        region, _ = intalg.moved_region(c)
        ok = v.kind == intalg.SUP_EXISTS and v.sup == region
        ok &= _sub_unions_phi(c, region, 10)
        if not ok:
            bad.append(f"finitary#{i}")
    for text in ("blk", "swapadj*blk"):
        c = intalg.PhiClass.certified(permlang.parse(text))
        v = intalg.psi_check(c, 64)
        smaller = [r for r in v.refutations if r.how == "smaller"]
        if v.kind != intalg.NO_SUP or not v.verified or not smaller:
            bad.append(text)
    return not bad, f"20 finitary sups exact, 2 infinite classes refuted; failures {bad}"


def _random_invertible_table(field, rng, size: int, sigma):
    while True:
        table = {i: vspace.random_vector(field, rng, size, 0.5) for i in range(size)
                 if rng.random() < 0.6}
        m = vspace.finite_modification(field, table, sigma)
        try:
            vspace.invert(m)
            return m
        except AutcodeError:
            continue


def crit_property_D(seed: int):
    rng = random.Random(seed)
    bad = []
    for field in (Rationals(), PrimeField(5)):
        for _ in range(5):
            p = random_involution(rng, 12, 1) if rng.random() < 0.5 else random_finperm(rng, 12, 2)
            m = vspace.PermInduced(Fin(p), field, field.aut("id"))
            samples = [vspace.random_vector(field, rng, 16) for _ in range(100)]
            if not vspace.property_D_check(m, samples):
                bad.append(("D", field.name))
        for _ in range(25):
            W = vspace.random_subspace(field, rng, 8, 24)
            x = vspace.refute_property_D(blk(), W, field)
            (u, _), = x.items()
            partner = blk()._fwd(u)
            diff = x - vspace.PermInduced(blk(), field, field.aut("id")).apply(x)
            # independent reason: every vector of W vanishes at u, the difference does not
            indep = all(b[u] == field.zero for b in W.basis) and diff[u] != field.zero
            if vspace.member(diff, W) or not indep or partner == u:
                bad.append(("refute", field.name))
    return not bad, f"10 finitary images x 100 samples, 50 refutations; failures {bad[:3]}"


def crit_gsl_laws(seed: int):
    rng = random.Random(seed)
    Q = Rationals()
    bad = []
    w = Window(16)
    for _ in range(100):
        p, q = random_finperm(rng, 14), random_finperm(rng, 14)
        dp, dq = vspace.delta_embed(Fin(p), Q), vspace.delta_embed(Fin(q), Q)
        if not vspace.gsl_equal_on(vspace.delta_embed(Prod((Fin(p), Fin(q))), Q), dp.then(dq), w):
            bad.append("hom")
        same = vspace.equivalent_mod_scalar(dp.rep, dq.rep, w)
        if same != equal_on(Fin(p), Fin(q), w):
            bad.append("inj")
    for field in (GF4(), PrimeField(5)):
        sig = field.aut("id")
        for _ in range(5):
            m = _random_invertible_table(field, rng, 6, sig)
            base = vspace.GslElement.of(m)
            for alpha in field.elements()[1:]:
                sm = vspace.Scaled(alpha, m)
                if not vspace.equivalent_mod_scalar(m, sm, w):
                    bad.append(("scalar", field.name))
                if not vspace.gsl_equal_on(vspace.GslElement.of(sm), base, w):
                    bad.append(("normal", field.name))
    F = GF4()
    frob = F.aut("frob")
    m = vspace.compose(_random_invertible_table(F, rng, 6, frob),
                       vspace.PermInduced(Fin(random_finperm(rng, 8)), F, F.aut("id")))
    for _ in range(500):
        a, b = F.random(rng), F.random(rng)
        u, v = vspace.random_vector(F, rng, 8), vspace.random_vector(F, rng, 8)
        lhs = m.apply(u.scale(a) + v.scale(b))
        rhs = m.apply(u).scale(frob(a)) + m.apply(v).scale(frob(b))
        if lhs != rhs:
            bad.append("semilinear")
            break
    return not bad, f"100 delta pairs, scalars over GF4/GF5, 500 semilinear samples; failures {bad[:3]}"


def _as_matrix(S: vspace.Subspace, dim: int) -> np.ndarray:
    return np.array([[b[i] for i in range(dim)] for b in S.basis], dtype=np.int64).reshape(-1, dim)


def crit_lattice(seed: int):
    rng = random.Random(seed)
    F = PrimeField(5)
    dim = 8
    bad = []
    spaces = [vspace.random_subspace(F, rng, 6, dim) for _ in range(100)]
    for k in range(0, 100, 2):
        S, T = spaces[k], spaces[k + 1]
        g = vspace.GslElement.of(vspace.compose(
            _random_invertible_table(F, rng, dim, F.aut("id")),
            vspace.PermInduced(Fin(random_finperm(rng, dim)), F, F.aut("id"))))
        ST_sum, ST_meet = vspace.subspace_sum(S, T), vspace.intersect(S, T)
        gS, gT = vspace.induced(g, S), vspace.induced(g, T)
        if vspace.induced(g, ST_sum) != vspace.subspace_sum(gS, gT):
            bad.append("sum")
        if vspace.induced(g, ST_meet) != vspace.intersect(gS, gT):
            bad.append("meet")
        if vspace.leq(ST_meet, S) != vspace.leq(vspace.induced(g, ST_meet), gS):
            bad.append("leq")
        # numpy cross-check of the echelon results
        MS, MT, MM = _as_matrix(S, dim), _as_matrix(T, dim), _as_matrix(ST_meet, dim)
        r_sum = oracles.rank_mod_p(np.vstack([MS, MT]), 5)
        if ST_sum.dim != r_sum or ST_meet.dim != S.dim + T.dim - r_sum:
            bad.append("rank")
        if not all(oracles.in_rowspace(v, MS, 5) and oracles.in_rowspace(v, MT, 5) for v in MM):
            bad.append("meet-oracle")
        if len(MS) and (oracles.rref_mod_p(MS, 5) != MS).any():
            bad.append("echelon")
    return not bad, f"50 pairs of random GF5 subspaces; failures {bad[:3]}"


def crit_pipeline(seed: int):
    table = _decode_table()
    bad = []
    for (name, n), (v, c) in table.items():
        g = pipeline.decode_via_gsl(n, c)
        b = pipeline.decode_via_ba(n, c)
        if g.member != v.member or b.member != v.member:
            bad.append((name, n))
    return not bad, f"{len(table) - len(bad)}/{len(table)} verdicts agree via both lifts"


def crit_roundtrip(seed: int):
    rng = random.Random(seed)
    bad = 0
    for _ in range(500):
        e = permlang.random_expr(rng)
        text = permlang.to_text(e)
        back = permlang.parse(text)
        bad += back != e or permlang.to_text(back) != text
    return bad == 0, f"{500 - bad}/500 expressions round-trip"


ACCEPTANCE: tuple[tuple[int, str, Callable], ...] = (
    (1, "decode exactness", crit_decode_exactness),
    (2, "parity law", crit_parity),
    (3, "transposition words", crit_words),
    (4, "stage bookkeeping", crit_stage_bookkeeping),
    (5, "horizon classification", crit_classification),
    (6, "lift homomorphism", crit_h_laws),
    (7, "sup discrimination", crit_psi),
    (8, "finite-difference property", crit_property_D),
    (9, "semilinear group laws", crit_gsl_laws),
    (10, "lattice preservation", crit_lattice),
    (11, "pipeline coherence", crit_pipeline),
    (12, "text round-trip", crit_roundtrip),
)


def run_criterion(number: int, seed: int = 0) -> Outcome:
    for k, title, fn in ACCEPTANCE:
        if k == number:
            t0 = time.perf_counter()
            try:
                ok, detail = fn(seed)
            except Exception as exc:  # a crash is a failed criterion, not a crashed suite
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            return Outcome(k, title, ok, detail, time.perf_counter() - t0)
    raise KeyError(f"no criterion {number}")


def run_acceptance(seed: int = 0, only=None) -> list[Outcome]:
    return [run_criterion(k, seed) for k, _, _ in ACCEPTANCE if only is None or k in only]


def acceptance_report(seed: int = 0, command: str = "suite acceptance") -> Report:
    rep = Report(command)
    for o in run_acceptance(seed):
        rep.add(f"criterion/{o.number:02d}", f"seed={seed}", "pass",
                f"{o.detail} [{o.seconds:.2f}s]", o.ok)
    return rep


# ---------------------------------------------------------------------------
# randomized properties
# ---------------------------------------------------------------------------


def properties_report(seed: int = 0, command: str = "suite properties", trials: int = 50
                      ) -> Report:
    rng = random.Random(seed)
    rep = Report(command)
    w = Window(24)
    Q = Rationals()
    for i in range(trials):
        e = permlang.random_expr(rng, depth=2, atoms=("swapadj", "blk", "tau", "g0", "g1"))
        ident = window_image(Prod((e, permlang.parse("id"))), w)
        inv_ok = all(v == k for k, v in window_image(Prod((e, Inv(e))), w).items())
        rep.add(f"group/{i:03d}", permlang.to_text(e), "e*e'=id", "ok" if inv_ok else "differs",
                inv_ok and ident == window_image(e, w))
    for i in range(trials):
        x, y, z = random_belem(rng), random_belem(rng), random_belem(rng)
        J, M, C = intalg.join, intalg.meet, intalg.complement
        ok = (J(x, M(y, z)) == M(J(x, y), J(x, z)) and C(J(x, y)) == M(C(x), C(y))
              and C(C(x)) == x and intalg.BElem.of(x.intervals) == x)
        rep.add(f"boolean/{i:03d}", f"{x} | {y} | {z}", "laws hold", "ok" if ok else "broken", ok)
    F = PrimeField(5)
    for i in range(trials):
        S, T, U = (vspace.random_subspace(F, rng, 4, 8) for _ in range(3))
        P, Mt = vspace.subspace_sum, vspace.intersect
        ok = (P(P(S, T), U) == P(S, P(T, U)) and Mt(S, T) == Mt(T, S)
              and Mt(S, P(S, T)) == S and P(S, Mt(S, T)) == S)
        rep.add(f"lattice/{i:03d}", f"{S} | {T} | {U}", "laws hold", "ok" if ok else "broken", ok)
    for i in range(trials):
        p = random_finperm(rng, 10)
        m = vspace.PermInduced(Fin(p), Q, Q.aut("id"))
        a, b = Q.random(rng), Q.random(rng)
        u, v = vspace.random_vector(Q, rng, 12), vspace.random_vector(Q, rng, 12)
        ok = m.apply(u.scale(a) + v.scale(b)) == m.apply(u).scale(a) + m.apply(v).scale(b)
        rep.add(f"linear/{i:03d}", str(p.cycles()), "linear", "ok" if ok else "broken", ok)
    return rep


SUITES = {"acceptance": acceptance_report, "properties": properties_report}
