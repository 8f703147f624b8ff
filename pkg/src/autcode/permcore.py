"""Permutations of the naturals as expression trees.

Expressions are built from registered atoms (each with total forward and
inverse evaluators) and finite cycle literals, combined by inverse, power,
product, conjugation and commutator.  Nothing here decides equality of
infinite permutations; every equality-flavoured helper takes an explicit
:class:`Window` and only compares points below its bound.

Composition is left to right: ``Prod([a, b])`` applies ``a`` first and then
``b``.  Conjugation and commutators follow the group-theory notation
``x^y = y^-1 x y`` and ``[x, y] = x^-1 y^-1 x y`` read in that order, so
``Conj(x, y)`` sends ``y(p)`` to ``y(x(p))``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .errors import CertificateError, CycleTypeError

DEFAULT_BUDGET_FACTOR = 4


@dataclass(frozen=True)
class Window:
    """The point set ``{0, ..., bound - 1}``."""

    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError(f"window bound must be >= 1, got {self.bound}")

    def __iter__(self):
        return iter(range(self.bound))

    def __contains__(self, x):
        return 0 <= x < self.bound

    def __len__(self):
        return self.bound


def _window(w) -> Window:
    return w if isinstance(w, Window) else Window(int(w))


# ---------------------------------------------------------------------------
# finite permutations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinPerm:
    """A finitary permutation stored as its moved points only."""

    moves: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        mapping = dict(self.moves)
        if len(mapping) != len(self.moves):
            raise ValueError("repeated source point in FinPerm")
        if any(a == b for a, b in self.moves):
            raise ValueError("FinPerm lists a fixed point")
        if set(mapping.values()) != set(mapping):
            raise ValueError("FinPerm moves are not a bijection of their support")
        if any(a < 0 for a in mapping):
            raise ValueError("FinPerm points must be natural numbers")
        object.__setattr__(self, "moves", tuple(sorted(mapping.items())))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> FinPerm:
        return cls(tuple((a, b) for a, b in mapping.items() if a != b))

    @classmethod
    def from_cycles(cls, *cycles: Iterable[int]) -> FinPerm:
        """Compose disjoint cycles, e.g. ``from_cycles((0, 1), (2, 3, 4))``."""
        mapping: dict[int, int] = {}
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"cycle {cyc} repeats a point")
            if len(cyc) < 2:
                continue
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if a in mapping:
                    raise ValueError(f"cycles are not disjoint at {a}")
                mapping[a] = b
        return cls.from_mapping(mapping)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.moves)

    @property
    def support(self) -> frozenset:
        return frozenset(a for a, _ in self.moves)

    def __call__(self, x: int) -> int:
        for a, b in self.moves:
            if a == x:
                return b
        return x

    def inverse(self) -> FinPerm:
        return FinPerm(tuple((b, a) for a, b in self.moves))

    def then(self, other: FinPerm) -> FinPerm:
        """Apply ``self`` first, then ``other``."""
        pts = self.support | other.support
        return FinPerm.from_mapping({x: other(self(x)) for x in pts})

    def conj(self, h: FinPerm) -> FinPerm:
        """``self^h``: sends ``h(a)`` to ``h(self(a))``."""
        return FinPerm.from_mapping({h(a): h(b) for a, b in self.moves})

    def cycles(self) -> list[tuple[int, ...]]:
        m = self.mapping
        seen: set[int] = set()
        out = []
        for start in sorted(m):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = m[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = m[x]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> Counter:
        return Counter(len(c) for c in self.cycles())

    def is_involution(self) -> bool:
        return all(len(c) == 2 for c in self.cycles())

    def __bool__(self):
        return bool(self.moves)


# ---------------------------------------------------------------------------
# certificates carried by atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MovedCertificate:
    """Eventually periodic description of the moved integers.

    ``n`` is moved iff ``n % period in residues``, except for the finitely
    many points listed in ``overrides`` as ``(n, moved)`` pairs.
    """

    period: int
    residues: frozenset
    overrides: tuple[tuple[int, bool], ...] = ()

    def moved(self, n: int) -> bool:
        for m, flag in self.overrides:
            if m == n:
                return flag
        return n % self.period in self.residues

    @property
    def infinitely_many_moved(self) -> bool:
        return bool(self.residues)

    @property
    def infinitely_many_fixed(self) -> bool:
        return len(self.residues) < self.period

    @property
    def tail_start(self) -> int:
        """First point from which the periodic rule holds without exceptions."""
        return max((n for n, _ in self.overrides), default=-1) + 1

    def transported(self, h: FinPerm) -> MovedCertificate:
        """Certificate for the conjugate ``p^h`` whose moved set is ``h(moved(p))``."""
        hinv = h.inverse()
        over = {n: self.moved(hinv(n)) for n in h.support}
        for n, flag in self.overrides:
            over.setdefault(n, self.moved(hinv(n)))
        kept = tuple(sorted((n, f) for n, f in over.items()
                            if f != (n % self.period in self.residues)))
        return MovedCertificate(self.period, self.residues, kept)


@dataclass(frozen=True)
class Certificate:
    finite_support: Optional[frozenset] = None
    involution: bool = False
    infinite_two_cycles: bool = False
    moved: Optional[MovedCertificate] = None
    # p maps each block [kB, (k+1)B) onto itself and commutes with x -> x + B
    block: Optional[int] = None


@dataclass(frozen=True)
class AtomSpec:
    forward: Callable[[int], int]
    inverse: Callable[[int], int]
    power: Optional[Callable[[int, int], int]] = None
    certificate: Certificate = Certificate()


# ---------------------------------------------------------------------------
# expression nodes
# ---------------------------------------------------------------------------


class PermExpr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def _fwd(self, x: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def _bwd(self, y: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(PermExpr):
    name: str
    params: tuple[int, ...] = ()
    spec: Optional[AtomSpec] = field(default=None, compare=False, repr=False, hash=False)

    def _need_spec(self) -> AtomSpec:
        if self.spec is None:
            raise CertificateError(f"atom {self.name!r} has no registered evaluator")
        return self.spec

    def _fwd(self, x):
        return self._need_spec().forward(x)

    def _bwd(self, y):
        return self._need_spec().inverse(y)


@dataclass(frozen=True)
class Fin(PermExpr):
    perm: FinPerm

    def _fwd(self, x):
        return self.perm(x)

    def _bwd(self, y):
        for a, b in self.perm.moves:
            if b == y:
                return a
        return y


@dataclass(frozen=True)
class Inv(PermExpr):
    arg: PermExpr

    def _fwd(self, x):
        return self.arg._bwd(x)

    def _bwd(self, y):
        return self.arg._fwd(y)


@dataclass(frozen=True)
class Pow(PermExpr):
    base: PermExpr
    exp: int

    def _run(self, x, k):
        b = self.base
        if isinstance(b, Atom) and b.spec is not None and b.spec.power is not None:
            return b.spec.power(x, k)
        step = b._fwd if k >= 0 else b._bwd
        for _ in range(abs(k)):
            x = step(x)
        return x

    def _fwd(self, x):
        return self._run(x, self.exp)

    def _bwd(self, y):
        return self._run(y, -self.exp)


@dataclass(frozen=True)
class Prod(PermExpr):
    factors: tuple[PermExpr, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def _fwd(self, x):
        for f in self.factors:
            x = f._fwd(x)
        return x

    def _bwd(self, y):
        for f in reversed(self.factors):
            y = f._bwd(y)
        return y


@dataclass(frozen=True)
class Conj(PermExpr):
    """``x^y = y^-1 x y``."""

    arg: PermExpr
    by: PermExpr

    def _fwd(self, p):
        return self.by._fwd(self.arg._fwd(self.by._bwd(p)))

    def _bwd(self, p):
        return self.by._fwd(self.arg._bwd(self.by._bwd(p)))


@dataclass(frozen=True)
class Comm(PermExpr):
    """``[x, y] = x^-1 y^-1 x y``."""

    left: PermExpr
    right: PermExpr

    def _fwd(self, p):
        x, y = self.left, self.right
        return y._fwd(x._fwd(y._bwd(x._bwd(p))))

    def _bwd(self, p):
        x, y = self.left, self.right
        return x._fwd(y._fwd(x._bwd(y._bwd(p))))


def identity() -> Prod:
    return Prod(())


def make_atom(name: str, spec: AtomSpec, params: tuple[int, ...] = (),
              verify_window: int = 64) -> Atom:
    """Build an atom, checking its evaluators and certificate on a small window."""
    if verify_window:
        verify_spec(name, spec, Window(verify_window))
    return Atom(name, tuple(params), spec)


def verify_spec(name: str, spec: AtomSpec, w: Window) -> None:
    cert = spec.certificate
    for x in w:
        y = spec.forward(x)
        if spec.inverse(y) != x:
            raise CertificateError(f"atom {name}: inverse fails at {x}")
        if spec.power is not None and spec.power(x, 1) != y:
            raise CertificateError(f"atom {name}: power(x, 1) disagrees at {x}")
        if cert.involution and spec.forward(y) != x:
            raise CertificateError(f"atom {name}: not an involution at {x}")
        if cert.finite_support is not None and (y != x) != (x in cert.finite_support):
            raise CertificateError(f"atom {name}: support certificate wrong at {x}")
        if cert.moved is not None and (y != x) != cert.moved.moved(x):
            raise CertificateError(f"atom {name}: moved certificate wrong at {x}")


# ---------------------------------------------------------------------------
# evaluation and window analysis
# ---------------------------------------------------------------------------


def _point(x) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ValueError(f"not a natural number: {x!r}")
    return x


def eval_at(e: PermExpr, x: int) -> int:
    return e._fwd(_point(x))


def eval_inverse(e: PermExpr, y: int) -> int:
    return e._bwd(_point(y))


def window_image(e: PermExpr, w) -> dict[int, int]:
    w = _window(w)
    return {x: e._fwd(x) for x in w}


def equal_on(e1: PermExpr, e2: PermExpr, w) -> bool:
    """Pointwise agreement below the window bound.

    A ``False`` answer is a proof of disequality; ``True`` only says no
    difference was found inside the window.
    """
    return all(e1._fwd(x) == e2._fwd(x) for x in _window(w))


@dataclass(frozen=True)
class CycleProfile:
    counts: dict
    escapes: int

    def two_cycles(self) -> int:
        return self.counts.get(2, 0)


def cycle_profile(e: PermExpr, w, step_budget: Optional[int] = None) -> CycleProfile:
    w = _window(w)
    n = w.bound
    if step_budget is None:
        step_budget = DEFAULT_BUDGET_FACTOR * n
    if step_budget < n:
        raise ValueError(f"step budget {step_budget} is below the window size {n}")
    counts: Counter = Counter()
    escapes = 0
    done: set[int] = set()
    for x in w:
        if x in done:
            continue
        orbit = [x]
        y = e._fwd(x)
        closed = False
        for _ in range(step_budget):
            if y == x:
                closed = True
                break
            if y >= n:
                break
            orbit.append(y)
            y = e._fwd(y)
        if closed:
            counts[len(orbit)] += 1
            done.update(orbit)
        else:
            escapes += 1
            done.add(x)
    return CycleProfile(dict(sorted(counts.items())), escapes)


def finite_support(e: PermExpr) -> Optional[frozenset]:
    """A finite superset of the moved points, or ``None`` when none is known."""
    if isinstance(e, Fin):
        return e.perm.support
    if isinstance(e, Atom):
        return e.spec.certificate.finite_support if e.spec is not None else None
    if isinstance(e, Inv):
        return finite_support(e.arg)
    if isinstance(e, Pow):
        return frozenset() if e.exp == 0 else finite_support(e.base)
    if isinstance(e, Prod):
        out: frozenset = frozenset()
        for f in e.factors:
            s = finite_support(f)
            if s is None:
                return None
            out |= s
        return out
    if isinstance(e, Conj):
        s = finite_support(e.arg)
        if s is None:
            return None
        return frozenset(e.by._fwd(a) for a in s)
    if isinstance(e, Comm):
        s = finite_support(e.left)
        if s is not None:
            return s | frozenset(e.right._fwd(a) for a in s)
        s = finite_support(e.right)
        if s is not None:
            return s | frozenset(e.left._fwd(a) for a in s)
        return None
    return None


def to_finperm(e: PermExpr) -> FinPerm:
    supp = finite_support(e)
    if supp is None:
        raise CertificateError("expression carries no finitary certificate")
    return FinPerm.from_mapping({x: e._fwd(x) for x in supp})


def conjugator_finitary(p: FinPerm, q: FinPerm) -> FinPerm:
    """Return ``h`` with ``p^h == q``."""
    cp, cq = p.cycles(), q.cycles()
    if Counter(map(len, cp)) != Counter(map(len, cq)):
        raise CycleTypeError(f"cycle types differ: {sorted(map(len, cp))} vs {sorted(map(len, cq))}")
    partial: dict[int, int] = {}
    by_len: dict[int, list] = {}
    for c in sorted(cq):
        by_len.setdefault(len(c), []).append(c)
    for c in sorted(cp):
        target = by_len[len(c)].pop(0)
        partial.update(zip(c, target))
    # extend the partial injection supp(p) -> supp(q) to a permutation
    src, dst = set(partial), set(partial.values())
    spare_src = sorted(dst - src)
    spare_dst = sorted(src - dst)
    partial.update(zip(spare_src, spare_dst))
    return FinPerm.from_mapping(partial)


FIN_TWO_CYCLES = "FinTwoCycles"
INF_EVIDENCE = "InfEvidence"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ClassVerdict:
    kind: str
    count: Optional[int] = None
    bound: Optional[int] = None

    def __str__(self):
        if self.kind == FIN_TWO_CYCLES:
            return f"{self.kind}({self.count})"
        if self.kind == INF_EVIDENCE:
            return f"{self.kind}({self.count}, {self.bound})"
        return self.kind


def classify(e: PermExpr, w, evidence_threshold: int) -> ClassVerdict:
    fp = None
    if finite_support(e) is not None:
        fp = to_finperm(e)
    if fp is not None:
        return ClassVerdict(FIN_TWO_CYCLES, fp.cycle_type().get(2, 0))
    w = _window(w)
    twos = cycle_profile(e, w).two_cycles()
    if twos >= evidence_threshold:
        return ClassVerdict(INF_EVIDENCE, twos, w.bound)
    return ClassVerdict(UNKNOWN)


# ---------------------------------------------------------------------------
# generic infinite-support atoms
# ---------------------------------------------------------------------------


def _swapadj(x):
    return x ^ 1


def _blk(x):
    r = x % 4
    if r == 0:
        return x + 1
    if r == 1:
        return x - 1
    return x


def swapadj() -> Atom:
    """The product of all transpositions ``(2j, 2j+1)``."""
    cert = Certificate(involution=True, infinite_two_cycles=True,
                       moved=MovedCertificate(2, frozenset({0, 1})), block=2)
    return make_atom("swapadj", AtomSpec(_swapadj, _swapadj, certificate=cert))


def blk() -> Atom:
    """The product of all ``(4j, 4j+1)``: infinitely many swaps and fixed points."""
    cert = Certificate(involution=True, infinite_two_cycles=True,
                       moved=MovedCertificate(4, frozenset({0, 1})), block=4)
    return make_atom("blk", AtomSpec(_blk, _blk, certificate=cert))


def _block_period(e: PermExpr) -> Optional[int]:
    """Common block length for products of block-periodic atoms, if any."""
    if isinstance(e, Atom):
        return e.spec.certificate.block if e.spec is not None else None
    if isinstance(e, (Inv, Pow)):
        return _block_period(e.arg if isinstance(e, Inv) else e.base)
    if isinstance(e, Prod) and e.factors:
        out = 1
        for f in e.factors:
            b = _block_period(f)
            if b is None:
                return None
            out = math.lcm(out, b)
        return out
    return None


def _block_certificate(e: PermExpr, B: int) -> Certificate:
    # everything is decided by one block
    moved = frozenset(x for x in range(B) if e._fwd(x) != x)
    invol = all(e._fwd(e._fwd(x)) == x for x in range(B))
    has_two = any(e._fwd(x) != x and e._fwd(e._fwd(x)) == x for x in range(B))
    if not moved:
        return Certificate(finite_support=frozenset(), involution=True)
    return Certificate(involution=invol, infinite_two_cycles=has_two,
                       moved=MovedCertificate(B, moved), block=B)


def certificate_of(e: PermExpr) -> Certificate:
    if isinstance(e, Atom) and e.spec is not None:
        return e.spec.certificate
    supp = finite_support(e)
    if supp is not None:
        return Certificate(finite_support=supp)
    B = _block_period(e)
    if B is not None:
        return _block_certificate(e, B)
    if isinstance(e, Conj) and finite_support(e.by) is not None:
        inner = certificate_of(e.arg)
        if inner.moved is not None:
            h = to_finperm(e.by)
            return Certificate(involution=inner.involution,
                               infinite_two_cycles=inner.infinite_two_cycles,
                               moved=inner.moved.transported(h))
    return Certificate()
