"""Coding an enumerated set into commutator identities of four permutations.

The naturals are split into columns ``R_i`` (``i`` ranging over the
integers) with increasing enumerations ``c_i^0 < c_i^1 < ...``.  From an
injective enumeration ``h`` of a set ``A`` we build

* ``w``:  ``c_i^j -> c_{i+1}^j`` (shift one column up),
* ``g0``: the swaps ``(c_0^{2j}, c_0^{2j+1})``,
* ``g1``: the swaps ``(c_0^{2j+1}, c_0^{2j+2})``,
* ``b``:  the swaps ``(c_n^t, c_n^{t+1})`` for every stage ``t`` with ``h(t) = n``,

and ``n`` is in ``A`` iff one of ``[g0, b']``, ``[g1, b']`` is not the
identity, where ``b'`` is ``b`` with column ``n`` moved onto column 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .errors import ConstructionError, WindowError
from .pairing import cantor, fold, uncantor, unfold
from .permcore import (Atom, AtomSpec, Certificate, Comm, Conj, PermExpr, Pow,
                       Window, finite_support, make_atom)

FIRST_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                59, 61, 67, 71, 73, 79, 83, 89, 97)


@dataclass(frozen=True)
class ColumnSchemeZ:
    """``(i, j) <-> cantor(fold(i), j)``; strictly increasing in ``j``."""

    def encode(self, i: int, j: int) -> int:
        if j < 0:
            raise ValueError(f"row index must be natural, got {j}")
        return cantor(fold(i), j)

    def decode(self, x: int) -> tuple[int, int]:
        a, j = uncantor(x)
        return unfold(a), j


def default_scheme_z() -> ColumnSchemeZ:
    return ColumnSchemeZ()


@dataclass(frozen=True)
class Enumerator:
    """A finite piece of an injective enumeration: ``values[t] = h(t)`` for stages ``t < horizon``.

    Stages missing from ``values`` enumerate nothing.
    """

    values: Mapping[int, int]
    horizon: int
    name: str = "table"
    stage_of: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        vals = {int(t): int(n) for t, n in dict(self.values).items()}
        if self.horizon < 0:
            raise ValueError("horizon must be natural")
        seen: dict[int, int] = {}
        for t in sorted(vals):
            n = vals[t]
            if t < 0 or n < 0:
                raise ConstructionError(f"stage/value must be natural: h({t}) = {n}")
            if t >= self.horizon:
                continue
            if n in seen:
                raise ConstructionError(
                    f"enumeration is not injective: h({seen[n]}) = h({t}) = {n}")
            seen[n] = t
        object.__setattr__(self, "values", {t: n for t, n in vals.items() if t < self.horizon})
        object.__setattr__(self, "stage_of", seen)

    def h(self, t: int) -> Optional[int]:
        return self.values.get(t)

    def enumerated(self) -> frozenset:
        return frozenset(self.stage_of)

    @classmethod
    def from_rule(cls, name: str, horizon: int) -> Enumerator:
        if name == "evens":
            vals = {t: 2 * t for t in range(horizon)}
        elif name == "empty":
            vals = {}
        elif name == "primes25":
            vals = {t: p for t, p in enumerate(FIRST_PRIMES) if t < horizon}
        else:
            raise KeyError(f"unknown enumerator {name!r}")
        return cls(vals, horizon, name)

    @classmethod
    def from_file(cls, path, horizon: Optional[int] = None) -> Enumerator:
        """Read ``t n`` lines; ``#`` starts a comment."""
        vals: dict[int, int] = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 't n', got {line!r}")
            t, n = int(parts[0]), int(parts[1])
            if t in vals:
                raise ConstructionError(f"{path}:{lineno}: stage {t} listed twice")
            vals[t] = n
        if horizon is None:
            horizon = max(vals, default=-1) + 1
        return cls(vals, horizon, str(path))


def ground_truth(name: str) -> Optional[frozenset]:
    """Intended set for the named rules, as far as a finite description goes."""
    if name == "empty":
        return frozenset()
    if name == "primes25":
        return frozenset(FIRST_PRIMES)
    return None


def in_ground_truth(name: str, n: int) -> Optional[bool]:
    if name == "evens":
        return n % 2 == 0
    s = ground_truth(name)
    return None if s is None else n in s


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def gen_w(s: ColumnSchemeZ) -> Atom:
    def power(x, k):
        i, j = s.decode(x)
        return s.encode(i + k, j)

    return make_atom("w", AtomSpec(lambda x: power(x, 1), lambda y: power(y, -1), power))


def _column0_swapper(s: ColumnSchemeZ, parity: int):
    # parity 0 pairs rows (2j, 2j+1); parity 1 pairs (2j+1, 2j+2)
    def f(x):
        i, j = s.decode(x)
        if i != 0:
            return x
        if parity == 0:
            return s.encode(0, j ^ 1)
        if j == 0:
            return x
        return s.encode(0, j + 1 if j % 2 == 1 else j - 1)

    return f


def gen_g0(s: ColumnSchemeZ) -> Atom:
    f = _column0_swapper(s, 0)
    return make_atom("g0", AtomSpec(f, f, certificate=Certificate(involution=True,
                                                                 infinite_two_cycles=True)))


def gen_g1(s: ColumnSchemeZ) -> Atom:
    f = _column0_swapper(s, 1)
    return make_atom("g1", AtomSpec(f, f, certificate=Certificate(involution=True,
                                                                 infinite_two_cycles=True)))


def gen_b(s: ColumnSchemeZ, e: Enumerator) -> Atom:
    """Swap ``c_n^t <-> c_n^{t+1}`` whenever ``h(t) = n``; finitely many swaps."""
    stage_of = dict(e.stage_of)

    def f(x):
        i, j = s.decode(x)
        t = stage_of.get(i) if i >= 0 else None
        if t is None:
            return x
        if j == t:
            return s.encode(i, t + 1)
        if j == t + 1:
            return s.encode(i, t)
        return x

    support = frozenset(s.encode(n, t + d) for n, t in stage_of.items() for d in (0, 1))
    cert = Certificate(finite_support=support, involution=True)
    return make_atom("b", AtomSpec(f, f, certificate=cert))


@dataclass(frozen=True)
class Construction:
    scheme: ColumnSchemeZ
    enumerator: Enumerator
    w: Atom
    g0: Atom
    g1: Atom
    b: Atom

    def shifted_b(self, n: int) -> PermExpr:
        """``b`` with column ``n`` carried onto column 0.

        The decode identity is stated as ``b^{w^n}`` in right-to-left
        composition; with left-to-right products the same map is
        ``b^{w^-n}``.
        """
        return Conj(self.b, Pow(self.w, -n))

    def commutators(self, n: int) -> tuple[PermExpr, PermExpr]:
        bn = self.shifted_b(n)
        return Comm(self.g0, bn), Comm(self.g1, bn)


def build(enumerator: Enumerator, scheme: Optional[ColumnSchemeZ] = None) -> Construction:
    s = scheme or default_scheme_z()
    return Construction(s, enumerator, gen_w(s), gen_g0(s), gen_g1(s), gen_b(s, enumerator))


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

IN = "In"
NOT_BY_HORIZON = "NotByHorizon"


@dataclass(frozen=True)
class DecodeVerdict:
    kind: str
    stage: Optional[int] = None
    horizon: Optional[int] = None
    # which commutators were non-identity on column 0: (g0, g1)
    nontrivial: tuple[bool, bool] = (False, False)

    @property
    def member(self) -> bool:
        return self.kind == IN

    def __str__(self):
        return f"In({self.stage})" if self.kind == IN else f"NotByHorizon({self.horizon})"


def required_window(s: ColumnSchemeZ, horizon: int) -> Window:
    return Window(s.encode(0, horizon + 2) + 1)


def column_points(s: ColumnSchemeZ, column: int, w: Window) -> list[int]:
    out = []
    j = 0
    while True:
        x = s.encode(column, j)
        if x >= w.bound:
            return out
        out.append(x)
        j += 1


def moved_rows(comm: PermExpr, s: ColumnSchemeZ, pts: list[int]) -> list[int]:
    return [s.decode(x)[1] for x in pts if comm._fwd(x) != x]


def decode_membership(n: int, s: ColumnSchemeZ, e: Enumerator, w=None,
                      construction: Optional[Construction] = None) -> DecodeVerdict:
    """Decide ``n`` in ``A`` up to the enumeration horizon from the commutators alone.

    Only column 0 is inspected: both commutators are supported there.  The
    stage is read off the moved rows (largest moved row minus 2) and then
    checked against the enumerator.
    """
    c = construction or build(e, s)
    need = required_window(s, e.horizon)
    w = need if w is None else (w if isinstance(w, Window) else Window(int(w)))
    if w.bound < need.bound:
        raise WindowError(f"window {w.bound} does not cover column 0 up to row "
                          f"{e.horizon + 2} (needs {need.bound})")
    c0, c1 = c.commutators(n)
    for comm in (c0, c1):
        supp = finite_support(comm)
        if supp is None:
            raise ConstructionError("commutator has no finitary certificate")
        if any(s.decode(x)[0] != 0 or x >= w.bound for x in supp if comm._fwd(x) != x):
            raise WindowError("commutator support leaves column 0 inside the window")
    pts = column_points(s, 0, w)
    rows0 = moved_rows(c0, s, pts)
    rows1 = moved_rows(c1, s, pts)
    if not rows0 and not rows1:
        return DecodeVerdict(NOT_BY_HORIZON, horizon=e.horizon)
    t = max(rows0 + rows1) - 2
    if e.h(t) != n:
        raise ConstructionError(f"recovered stage {t} for {n} but h({t}) = {e.h(t)}")
    return DecodeVerdict(IN, stage=t, horizon=e.horizon, nontrivial=(bool(rows0), bool(rows1)))
