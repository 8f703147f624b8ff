"""Coding a Pi^0_2 predicate into the cycle type of ``b * b^{p_n}``.

Columns ``S_i = S_{i,1} + S_{i,2}`` (left and right parts) partition the
naturals.  A permutation ``b`` is built in stages: stage ``<n, t>`` takes
the three least unused points ``p < q < r`` of ``S_{n,2}``, swaps ``p`` and
``q`` when ``R(n, t)`` holds and otherwise fixes all three.  Negative
columns and every left part stay fixed.  The column product ``b * b^{p_n}``
then has infinitely many 2-cycles exactly when ``R(n, t)`` holds for
infinitely many ``t``.

Finite permutations are expressed as words in ``tau = (0 1)`` and the
single-infinite-cycle map ``z``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .errors import BudgetError, ConstructionError
from .pairing import cantor, fold, uncantor, unfold
from .permcore import (FIN_TWO_CYCLES, INF_EVIDENCE, UNKNOWN, Atom, AtomSpec, Certificate,
                       ClassVerdict, Conj, CycleProfile, Fin, FinPerm, PermExpr, Pow, Prod,
                       Window, finite_support, make_atom)


@dataclass(frozen=True)
class ColumnScheme2:
    """``(i, j, k) <-> cantor(2 * fold(i) + j - 1, k)``."""

    def encode(self, i: int, j: int, k: int) -> int:
        if j not in (1, 2):
            raise ValueError(f"part must be 1 or 2, got {j}")
        if k < 0:
            raise ValueError(f"row index must be natural, got {k}")
        return cantor(2 * fold(i) + j - 1, k)

    def decode(self, x: int) -> tuple[int, int, int]:
        a, k = uncantor(x)
        return unfold(a // 2), a % 2 + 1, k


def default_scheme_2() -> ColumnScheme2:
    return ColumnScheme2()


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pi2Predicate:
    """A total relation ``R(n, t)`` with known answers for ``A = {n : R(n, t) infinitely often}``.

    ``stable_after(n)`` returns ``T`` such that ``R(n, t)`` is false for
    every ``t >= T``, or ``None`` when no such bound is certified.
    """

    name: str
    relation: Callable[[int, int], bool]
    truth: Callable[[int], Optional[bool]]
    stable_after: Callable[[int], Optional[int]]

    def __call__(self, n: int, t: int) -> bool:
        return bool(self.relation(n, t))

    def truth_class(self, n: int) -> Optional[bool]:
        return self.truth(n)


def builtin_predicate(name: str) -> Pi2Predicate:
    if name == "always":
        return Pi2Predicate(name, lambda n, t: True, lambda n: True, lambda n: None)
    if name == "never":
        return Pi2Predicate(name, lambda n, t: False, lambda n: False, lambda n: 0)
    if name == "lt":
        return Pi2Predicate(name, lambda n, t: t < n, lambda n: False, lambda n: n)
    if name == "even":
        return Pi2Predicate(name, lambda n, t: n % 2 == 0, lambda n: n % 2 == 0,
                            lambda n: None if n % 2 == 0 else 0)
    raise KeyError(f"unknown predicate {name!r}")


BUILTIN_PREDICATES = ("always", "never", "lt", "even")


def table_predicate(path) -> Pi2Predicate:
    """Lines ``n t 0|1``; pairs not listed are false, so every ``n`` is outside ``A``."""
    table: dict[tuple[int, int], bool] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[2] not in ("0", "1"):
            raise ValueError(f"{path}:{lineno}: expected 'n t 0|1', got {line!r}")
        table[int(parts[0]), int(parts[1])] = parts[2] == "1"
    last: dict[int, int] = {}
    for (n, t), v in table.items():
        if v:
            last[n] = max(last.get(n, -1), t)

    return Pi2Predicate(str(path), lambda n, t: table.get((n, t), False),
                        lambda n: False, lambda n: last.get(n, -1) + 1)


def resolve_predicate(spec: str) -> Pi2Predicate:
    if spec.startswith("@"):
        return table_predicate(spec[1:])
    if spec.startswith("table:"):
        return table_predicate(spec[len("table:"):])
    return builtin_predicate(spec)


# ---------------------------------------------------------------------------
# fixed generators
# ---------------------------------------------------------------------------


def gen_w3(s: ColumnScheme2) -> Atom:
    """Shift column ``i + 1`` onto column ``i``, both parts."""

    def power(x, k):
        i, j, r = s.decode(x)
        return s.encode(i - k, j, r)

    return make_atom("w", AtomSpec(lambda x: power(x, 1), lambda y: power(y, -1), power))


def gen_p0(s: ColumnScheme2) -> Atom:
    def f(x):
        i, j, k = s.decode(x)
        return s.encode(0, 3 - j, k) if i == 0 else x

    return make_atom("p0", AtomSpec(f, f, certificate=Certificate(involution=True,
                                                                 infinite_two_cycles=True)))


def gen_pn(s: ColumnScheme2, n: int) -> PermExpr:
    """``p_0`` conjugated onto column ``n``.

    Written ``p_0^{w^n}`` with right-to-left composition; under
    left-to-right products the exponent flips sign.
    """
    return Conj(gen_p0(s), Pow(gen_w3(s), -n))


def pn_atom(s: ColumnScheme2, n: int) -> Atom:
    """Direct evaluator for ``p[n]``; agrees with :func:`gen_pn`."""

    def f(x):
        i, j, k = s.decode(x)
        return s.encode(n, 3 - j, k) if i == n else x

    return make_atom("p", AtomSpec(f, f, certificate=Certificate(involution=True,
                                                                infinite_two_cycles=True)),
                     params=(n,))


def _z_pos(x: int) -> int:
    # position of x on the infinite cycle ... 4 -> 2 -> 1 -> 3 -> 5 ...
    return (x - 1) // 2 if x % 2 else -(x // 2)


def _z_point(m: int) -> int:
    return 2 * m + 1 if m >= 0 else -2 * m


def _z_power(x: int, k: int) -> int:
    if x == 0:
        return 0
    return _z_point(_z_pos(x) + k)


def gen_z() -> Atom:
    return make_atom("z", AtomSpec(lambda x: _z_power(x, 1), lambda y: _z_power(y, -1), _z_power))


def gen_tau() -> Atom:
    t = FinPerm.from_cycles((0, 1))
    return make_atom("tau", AtomSpec(t, t, certificate=Certificate(
        finite_support=t.support, involution=True)))


def tau_power_exponent(m: int) -> int:
    """Exponent ``k`` with ``tau^{z^k} = (0, m)`` for ``m >= 1``.

    ``tau^{z^k}`` swaps ``0`` with ``z^k(1)``; ``z^k(1)`` runs through
    ``2k + 1`` for ``k >= 0`` and ``2|k|`` for ``k < 0``.
    """
    if m < 1:
        raise ValueError(f"no tau conjugate moves 0 to {m}")
    return (m - 1) // 2 if m % 2 else -(m // 2)


def _tau_conj(k: int) -> PermExpr:
    tau = gen_tau()
    return tau if k == 0 else Conj(tau, Pow(gen_z(), k))


def transposition_word(n: int, m: int) -> PermExpr:
    """A word over ``tau`` and ``z`` that evaluates to the transposition ``(n, m)``."""
    if n == m:
        raise ValueError(f"transposition needs two distinct points, got ({n}, {m})")
    n, m = sorted((n, m))
    if n == 0:
        return _tau_conj(tau_power_exponent(m))
    # (0 n)^{(0 m)} = (m n)
    return Conj(_tau_conj(tau_power_exponent(n)), _tau_conj(tau_power_exponent(m)))


def finword_for(f: FinPerm) -> PermExpr:
    if not f.is_involution():
        raise ValueError("finword_for needs a product of disjoint 2-cycles")
    words = [transposition_word(a, b) for a, b in f.cycles()]
    if len(words) == 1:
        return words[0]
    return Prod(tuple(words))


# ---------------------------------------------------------------------------
# the staged permutation b
# ---------------------------------------------------------------------------


def stage_pair(s: int) -> tuple[int, int]:
    """The pair ``(n, t)`` handled by the stage that carries code ``s``."""
    return uncantor(s)


class StageBuilder:
    """Runs the construction of ``b`` one stage at a time.

    The ``s``-th executed stage (counting from 0) handles the pair with
    Cantor code ``s``.  State only grows; finished stages are never revised.
    """

    def __init__(self, scheme: ColumnScheme2, predicate: Pi2Predicate, max_stage: int):
        self.scheme = scheme
        self.predicate = predicate
        self.max_stage = max_stage
        self.stage = 0
        self.consumed: dict[int, int] = {}
        self.pairs: dict[int, int] = {}
        self.case1: dict[int, int] = {}
        self._used: set[int] = set()
        self._lock = threading.Lock()

    def in_E(self, x: int) -> bool:
        """Membership in ``E^s``: the negative columns plus every consumed point."""
        i, _, _ = self.scheme.decode(x)
        return i < 0 or x in self._used

    def _least_unused(self, n: int, count: int) -> list[int]:
        # stages only ever take the least unused points, so the consumed
        # part of S_{n,2} is always an initial segment
        c = self.consumed.get(n, 0)
        return [self.scheme.encode(n, 2, c + d) for d in range(count)]

    def _run_one(self):
        n, t = stage_pair(self.stage)
        p, q, r = self._least_unused(n, 3)
        if self.predicate(n, t):
            self.pairs[p] = q
            self.pairs[q] = p
            self.case1[n] = self.case1.get(n, 0) + 1
        self._used.update((p, q, r))
        self.consumed[n] = self.consumed.get(n, 0) + 3
        self.stage += 1

    def advance_to(self, stages: int):
        if stages > self.max_stage:
            raise BudgetError(f"stage {stages} requested but max_stage is {self.max_stage}",
                              needed=stages)
        with self._lock:
            while self.stage < stages:
                self._run_one()

    def stages_needed(self, x: int) -> int:
        """Number of stages after which ``x`` is in ``E``; 0 for points never consumed."""
        i, j, k = self.scheme.decode(x)
        if i < 0 or j == 1:
            return 0
        return cantor(i, k // 3) + 1

    def value(self, x: int) -> int:
        i, j, _ = self.scheme.decode(x)
        if i < 0 or j == 1:
            return x
        need = self.stages_needed(x)
        if need > self.max_stage:
            raise BudgetError(f"point {x} is decided only at stage {need}, "
                              f"beyond max_stage {self.max_stage}", needed=need)
        self.advance_to(need)
        if x not in self._used:
            raise ConstructionError(f"point {x} still undecided after stage {need}")
        return self.pairs.get(x, x)

    def snapshot(self) -> dict[int, int]:
        return dict(self.pairs)

    def used(self) -> frozenset:
        return frozenset(self._used)


def build_b(s: ColumnScheme2, R: Pi2Predicate, max_stage: int) -> Atom:
    builder = StageBuilder(s, R, max_stage)
    cert = Certificate(involution=True)
    return make_atom("b", AtomSpec(builder.value, builder.value, certificate=cert),
                     verify_window=0)


def builder_of(b: Atom) -> StageBuilder:
    return b.spec.forward.__self__


def stages_for_column(n: int, S: int) -> list[int]:
    """The ``t`` with ``<n, t> < S``, in order."""
    out = []
    t = 0
    while cantor(n, t) < S:
        out.append(t)
        t += 1
    return out


def two_cycle_count(n: int, R: Pi2Predicate, S: int,
                    scheme: Optional[ColumnScheme2] = None) -> int:
    b = build_b(scheme or default_scheme_2(), R, S)
    bl = builder_of(b)
    bl.advance_to(S)
    return bl.case1.get(n, 0)


def column_product(s: ColumnScheme2, b: Atom, n: int) -> PermExpr:
    return Prod((b, Conj(b, pn_atom(s, n))))


def column_window(s: ColumnScheme2, n: int, S: int) -> Window:
    """Smallest window holding every point of ``S_n`` consumed in the first ``S`` stages."""
    T = len(stages_for_column(n, S))
    if T == 0:
        # nothing of S_n is decided yet; stop just below its least point
        return Window(max(1, s.encode(n, 1, 0)))
    return Window(s.encode(n, 2, 3 * T - 1) + 1)


def product_on_column(n: int, R: Pi2Predicate, S: int, w=None,
                      scheme: Optional[ColumnScheme2] = None,
                      off_window=None) -> CycleProfile:
    """Cycle profile of ``b * b^{p_n}`` on ``S_n`` below the window bound.

    Points of other columns below ``off_window`` (default: the window) are
    checked to be fixed; every one of them must be decidable within ``S``
    stages or a :class:`BudgetError` is raised.
    """
    s = scheme or default_scheme_2()
    w = column_window(s, n, S) if w is None else (w if isinstance(w, Window) else Window(int(w)))
    off = w if off_window is None else (off_window if isinstance(off_window, Window)
                                         else Window(int(off_window)))
    b = build_b(s, R, S)
    prod = column_product(s, b, n)
    members = set()
    for j in (1, 2):
        k = 0
        while (x := s.encode(n, j, k)) < w.bound:
            members.add(x)
            k += 1
    counts: dict[int, int] = {}
    escapes = 0
    done: set[int] = set()
    for x in sorted(members):
        if x in done:
            continue
        orbit = [x]
        y = prod._fwd(x)
        while y != x and y in members and len(orbit) <= len(members):
            orbit.append(y)
            y = prod._fwd(y)
        if y == x:
            counts[len(orbit)] = counts.get(len(orbit), 0) + 1
            done.update(orbit)
        else:
            escapes += 1
            done.add(x)
    for x in off:
        if s.decode(x)[0] != n and prod._fwd(x) != x:
            raise ConstructionError(f"b*b^p_{n} moves {x} outside column {n}")
    return CycleProfile(dict(sorted(counts.items())), escapes)


def decode_at_horizon(n: int, R: Pi2Predicate, S: int, threshold: int) -> ClassVerdict:
    """Horizon verdict on ``n in A``.

    A stabilization certificate that is already reached by stage ``S``
    takes precedence over the count threshold: a finite burst of true
    instances is not evidence of infinitely many.
    """
    count = two_cycle_count(n, R, S)
    T = R.stable_after(n)
    if T is not None and all(cantor(n, t) < S for t in range(T)):
        return ClassVerdict(FIN_TWO_CYCLES, count)
    if count >= threshold:
        return ClassVerdict(INF_EVIDENCE, count, S)
    return ClassVerdict(UNKNOWN)


def decidable_window(S: int, scheme: Optional[ColumnScheme2] = None) -> Window:
    """Largest initial window whose points ``b`` decides within ``S`` stages."""
    s = scheme or default_scheme_2()
    probe = StageBuilder(s, builtin_predicate("never"), S)
    x = 0
    while probe.stages_needed(x) <= S:
        x += 1
    return Window(max(x, 1))
