"""The interval algebra over the rationals and the action of permutations on it.

Elements are finite unions of half-open intervals ``[a, b)`` with rational
or infinite endpoints, kept sorted with touching pieces merged, so equal
elements have equal representations.  A permutation ``p`` of the naturals
acts through ``p~``: negative rationals are fixed and ``x >= 0`` goes to
``p(floor x) + frac x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import AutcodeError, BudgetError, CertificateError, WindowError
from .permcore import (Conj, Fin, FinPerm, MovedCertificate, PermExpr, Window,
                       certificate_of, finite_support, to_finperm)

INF = math.inf
Endpoint = Union[Fraction, float]


def _ep(a) -> Endpoint:
    if isinstance(a, float) and math.isinf(a):
        return a
    return Fraction(a)


@dataclass(frozen=True)
class BElem:
    intervals: tuple = ()

    @classmethod
    def of(cls, pieces: Iterable) -> BElem:
        return cls(_normalize(pieces))

    @classmethod
    def interval(cls, a, b) -> BElem:
        return cls.of([(a, b)])

    @classmethod
    def unit(cls, n: int) -> BElem:
        return cls.of([(n, n + 1)])

    def is_zero(self) -> bool:
        return not self.intervals

    def contains_point(self, q) -> bool:
        return any(a <= q < b for a, b in self.intervals)

    def sup_finite(self) -> Optional[Endpoint]:
        return self.intervals[-1][1] if self.intervals else None

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def __invert__(self):
        return complement(self)

    def __sub__(self, other):
        return meet(self, complement(other))

    def __le__(self, other):
        return leq(self, other)

    def __str__(self):
        return format_belem(self)


def _normalize(pieces) -> tuple:
    ivs = sorted((_ep(a), _ep(b)) for a, b in pieces)
    out: list[list] = []
    for a, b in ivs:
        if not a < b:
            continue
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


ZERO = BElem()
ONE = BElem(((-INF, INF),))


def join(x: BElem, y: BElem) -> BElem:
    return BElem.of(x.intervals + y.intervals)


def complement(x: BElem) -> BElem:
    out = []
    left = -INF
    for a, b in x.intervals:
        if left < a:
            out.append((left, a))
        left = b
    if left < INF:
        out.append((left, INF))
    return BElem(tuple(out))


def meet(x: BElem, y: BElem) -> BElem:
    out = []
    i = j = 0
    X, Y = x.intervals, y.intervals
    while i < len(X) and j < len(Y):
        a = max(X[i][0], Y[j][0])
        b = min(X[i][1], Y[j][1])
        if a < b:
            out.append((a, b))
        if X[i][1] < Y[j][1]:
            i += 1
        else:
            j += 1
    return BElem.of(out)


def leq(x: BElem, y: BElem) -> bool:
    return meet(x, y) == x


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def _fmt_ep(a: Endpoint) -> str:
    if a == INF:
        return "+inf"
    if a == -INF:
        return "-inf"
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def format_belem(x: BElem) -> str:
    if x.is_zero():
        return "0"
    return ";".join(f"[{_fmt_ep(a)},{_fmt_ep(b)})" for a, b in x.intervals)


def _parse_ep(t: str) -> Endpoint:
    t = t.strip()
    if t in ("+inf", "inf"):
        return INF
    if t == "-inf":
        return -INF
    return Fraction(t)


def parse_belem(text: str) -> BElem:
    text = text.strip()
    if text in ("0", ""):
        return ZERO
    if text == "1":
        return ONE
    pieces = []
    for part in text.split(";"):
        part = part.strip()
        if not (part.startswith("[") and part.endswith(")")):
            raise AutcodeError(f"bad interval {part!r}: expected [a,b)")
        a, b = part[1:-1].split(",")
        pieces.append((_parse_ep(a), _parse_ep(b)))
    return BElem.of(pieces)


# ---------------------------------------------------------------------------
# the lift p -> H(p)
# ---------------------------------------------------------------------------


def lift_point(p: PermExpr, q) -> Fraction:
    """``p~(q)``."""
    q = Fraction(q)
    if q < 0:
        return q
    n = math.floor(q)
    return p._fwd(n) + (q - n)


def _shift_piece(piece: tuple, d: int) -> tuple:
    return (piece[0] + d, piece[1] + d)


def _unit_pieces(x: BElem, n: int) -> list:
    return list(meet(x, BElem.unit(n)).intervals)


def _per_unit(p: PermExpr, x: BElem, pos: BElem) -> BElem:
    lo = math.floor(pos.intervals[0][0])
    hi = math.ceil(pos.sup_finite())
    out = list((x - pos).intervals)
    for n in range(lo, hi):
        d = p._fwd(n) - n
        out += [_shift_piece(pc, d) for pc in _unit_pieces(pos, n)]
    return BElem.of(out)


def apply_H(p: PermExpr, x: BElem, budget: int = 100_000) -> BElem:
    """Image of ``x`` under ``H(p)``.

    A narrow bounded element is cut into unit pieces that are translated
    one by one.  Otherwise, with a finite support, only the unit intervals
    over moved integers are cut out and translated; without one the
    nonnegative part must be bounded and at most ``budget`` units wide.
    """
    pos = meet(x, BElem.interval(0, INF))
    if pos.is_zero():
        return x
    top = pos.sup_finite()
    width = None if top == INF else math.ceil(top) - math.floor(pos.intervals[0][0])
    if width is not None and width <= 64:
        return _per_unit(p, x, pos)
    supp = finite_support(p)
    if supp is not None:
        moved = sorted(n for n in supp if p._fwd(n) != n)
        cut = BElem.of([(n, n + 1) for n in moved])
        out = list((x - cut).intervals)
        for n in moved:
            d = p._fwd(n) - n
            out += [_shift_piece(pc, d) for pc in _unit_pieces(x, n)]
        return BElem.of(out)
    if width is None:
        raise BudgetError("element is unbounded above and the permutation has no finite support",
                          None)
    if width > budget:
        raise BudgetError(f"{width} unit intervals exceed the budget {budget}", width)
    return _per_unit(p, x, pos)


def moved_region_lifted(p: PermExpr, points: Iterable[int]) -> BElem:
    """Union of the unit intervals ``[n, n+1)``, ``n`` in ``points``, that ``H(p)`` moves.

    Only images of elements under ``H(p)`` are inspected.
    """
    return BElem.of([(n, n + 1) for n in points
                     if apply_H(p, BElem.unit(n)) != BElem.unit(n)])


# ---------------------------------------------------------------------------
# Phi and Psi
# ---------------------------------------------------------------------------

FINITARY = "Finitary"
CERTIFIED = "CertifiedInfiniteMoved"


@dataclass(frozen=True)
class PhiClass:
    kind: str
    perm: PermExpr
    fin: Optional[FinPerm] = None
    cert: Optional[MovedCertificate] = None

    @classmethod
    def finitary(cls, p) -> PhiClass:
        fp = p if isinstance(p, FinPerm) else to_finperm(p)
        return cls(FINITARY, Fin(fp), fp)

    @classmethod
    def certified(cls, p: PermExpr) -> PhiClass:
        cert = certificate_of(p).moved
        if cert is None or not (cert.infinitely_many_moved and cert.infinitely_many_fixed):
            raise CertificateError("need infinitely many moved and infinitely many fixed points")
        return cls(CERTIFIED, p, None, cert)

    @classmethod
    def of(cls, p) -> PhiClass:
        if isinstance(p, FinPerm) or finite_support(p) is not None:
            return cls.finitary(p)
        return cls.certified(p)

    def moved(self, n: int) -> bool:
        return self.fin(n) != n if self.kind == FINITARY else self.cert.moved(n)


def moved_region(c: PhiClass, w=None) -> tuple[BElem, bool]:
    """``(region, partial)``; a certified class is cut off at the window."""
    if c.kind == FINITARY:
        return BElem.of([(n, n + 1) for n in sorted(c.fin.support)]), False
    bound = w.bound if isinstance(w, Window) else int(w)
    return BElem.of([(n, n + 1) for n in range(bound) if c.cert.moved(n)]), True


def phi_holds(u: BElem, c: PhiClass) -> bool:
    """``u`` lies inside the moved region (decided exactly)."""
    if u.is_zero():
        return True
    if c.kind == FINITARY:
        return leq(u, moved_region(c)[0])
    top = u.sup_finite()
    if top == INF or u.intervals[0][0] < 0:
        return False
    return leq(u, moved_region(c, math.ceil(top))[0])


SUP_EXISTS = "SupExists"
NO_SUP = "NoSupEvidence"


@dataclass(frozen=True)
class Refutation:
    candidate: BElem
    # "smaller" : witness is a strictly smaller upper bound
    # "not_above": witness is a Phi-element not below the candidate
    how: str
    witness: BElem
    verified: bool


@dataclass(frozen=True)
class PsiVerdict:
    kind: str
    sup: Optional[BElem] = None
    refutations: tuple = field(default=())

    @property
    def verified(self) -> bool:
        return self.kind == SUP_EXISTS or all(r.verified for r in self.refutations)

    def __str__(self):
        if self.kind == SUP_EXISTS:
            return f"SupExists({format_belem(self.sup)})"
        return f"NoSupEvidence({len(self.refutations)} candidates refuted)"


def _tail_start(z: BElem) -> Optional[int]:
    """Least natural ``M`` with ``[M, inf)`` inside ``z``."""
    if z.is_zero() or z.intervals[-1][1] != INF:
        return None
    a = z.intervals[-1][0]
    return 0 if a < 0 else math.ceil(a)


def is_upper_bound(z: BElem, c: PhiClass) -> bool:
    """Every Phi-element lies below ``z``: all moved unit intervals do."""
    if c.kind == FINITARY:
        return leq(moved_region(c)[0], z)
    M = _tail_start(z)
    if M is None:
        return False  # infinitely many moved blocks cannot fit in a bounded z
    return all(leq(BElem.unit(n), z) for n in range(M) if c.cert.moved(n))


def _refute(z: BElem, c: PhiClass, limit: int) -> Refutation:
    if is_upper_bound(z, c):
        M = _tail_start(z)
        f = next(n for n in range(M, M + limit) if not c.cert.moved(n))
        smaller = z - BElem.unit(f)
        ok = smaller != z and leq(smaller, z) and is_upper_bound(smaller, c)
        return Refutation(z, "smaller", smaller, ok)
    top = z.sup_finite()
    start = 0 if z.is_zero() or top == INF else math.ceil(top)
    for n in range(start, start + limit):
        if c.cert.moved(n) and not leq(BElem.unit(n), z):
            u = BElem.unit(n)
            return Refutation(z, "not_above", u, phi_holds(u, c) and not leq(u, z))
    # z has a tail and misses an early moved block
    n = next(n for n in range(start) if c.cert.moved(n) and not leq(BElem.unit(n), z))
    u = BElem.unit(n)
    return Refutation(z, "not_above", u, phi_holds(u, c) and not leq(u, z))


def default_candidates(c: PhiClass, w: Window) -> list[BElem]:
    region, _ = moved_region(c, w)
    N = w.bound
    tail = BElem.interval(N, INF)
    cands = [ONE, BElem.interval(0, INF), region, region | tail, BElem.interval(0, N),
             region | BElem.unit(N)]
    fixed = [n for n in range(N) if not c.cert.moved(n)]
    if fixed:
        cands.append(region | tail | BElem.unit(fixed[0]))
    return cands


def psi_check(c: PhiClass, w, candidates: Optional[list[BElem]] = None) -> PsiVerdict:
    """Does ``{x : Phi(x)}`` have a supremum?

    Finitary classes have the moved region as their largest Phi-element.
    For a certified infinite class every candidate upper bound gets a
    refutation: a strictly smaller upper bound or a Phi-element it misses.
    """
    if c.kind == FINITARY:
        return PsiVerdict(SUP_EXISTS, moved_region(c)[0])
    w = w if isinstance(w, Window) else Window(int(w))
    blocks = [n for n in range(w.bound) if c.cert.moved(n)]
    if len(blocks) < 2:
        raise WindowError(f"window {w.bound} shows {len(blocks)} moved blocks; need 2")
    cands = default_candidates(c, w) if candidates is None else candidates
    limit = 4 * c.cert.period + c.cert.tail_start + w.bound
    return PsiVerdict(NO_SUP, None, tuple(_refute(z, c, limit) for z in cands))


def conjugate_class(c: PhiClass, q: FinPerm) -> PhiClass:
    """Class of ``q^-1 p q``, whose lift is ``H(q)^-1 H(p) H(q)``."""
    if c.kind == FINITARY:
        return PhiClass.finitary(c.fin.conj(q))
    return PhiClass.certified(Conj(c.perm, Fin(q)))


def psi_conjugation_invariance(c: PhiClass, q: FinPerm, w) -> bool:
    before = psi_check(c, w)
    after = psi_check(conjugate_class(c, q), w)
    if before.kind != after.kind or not (before.verified and after.verified):
        return False
    if before.kind == SUP_EXISTS:
        # the supremum moves along with H(q)
        return apply_H(Fin(q), before.sup) == after.sup
    return True


# ---------------------------------------------------------------------------
# nontrivial permutations act nontrivially on four-element subalgebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelWitness:
    a: BElem
    subalgebra: frozenset
    image: frozenset


def kernel_witness(p) -> KernelWitness:
    fp = p if isinstance(p, FinPerm) else to_finperm(p)
    if not fp:
        raise AutcodeError("identity permutation has no kernel witness")
    n = min(fp.support)
    a = BElem.unit(n)
    e = Fin(fp)
    sub = frozenset({ZERO, a, complement(a), ONE})
    img = frozenset(apply_H(e, x) for x in sub)
    if img == sub:  # pragma: no cover - p(n) != n makes sigma(a) disjoint from a
        raise AutcodeError("image subalgebra unexpectedly equal")
    return KernelWitness(a, sub, img)
