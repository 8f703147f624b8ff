"""The countable-dimensional space V over an exact field.

Vectors are finitely supported coordinate maps over the fixed basis
``e_0, e_1, ...``.  Semilinear maps ``<mu, sigma>`` are described by how they
act on basis vectors (a permutation of indices, a finite table, a scalar
multiple, or a composite), twisted by a field automorphism on
coefficients.  Subspaces are finitely generated and kept in reduced echelon
form keyed by the least index of each basis vector, which makes equality
structural.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import AutcodeError, CertificateError
from .fields import Field, FieldAut, Rationals, get_field
from .permcore import (Atom, PermExpr, Prod, Inv, Window, certificate_of, finite_support)


class Vector:
    """Immutable finitely supported vector; zero coordinates are never stored."""

    __slots__ = ("field", "_c", "_h")

    def __init__(self, field: Field, coords=None):
        self.field = field
        z = field.zero
        self._c = {int(i): a for i, a in dict(coords or {}).items() if a != z}
        self._h = None

    @classmethod
    def basis(cls, field: Field, i: int) -> Vector:
        return cls(field, {i: field.one})

    @classmethod
    def zero(cls, field: Field) -> Vector:
        return cls(field)

    def __getitem__(self, i):
        return self._c.get(i, self.field.zero)

    def items(self):
        return sorted(self._c.items())

    @property
    def support(self) -> frozenset:
        return frozenset(self._c)

    def leading(self) -> Optional[int]:
        return min(self._c) if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: Vector) -> Vector:
        f = self.field
        out = dict(self._c)
        for i, a in other._c.items():
            out[i] = f.add(out.get(i, f.zero), a)
        return Vector(f, out)

    def __neg__(self) -> Vector:
        f = self.field
        return Vector(f, {i: f.neg(a) for i, a in self._c.items()})

    def __sub__(self, other: Vector) -> Vector:
        return self + (-other)

    def scale(self, alpha) -> Vector:
        f = self.field
        return Vector(f, {i: f.mul(alpha, a) for i, a in self._c.items()})

    def twist(self, sigma: FieldAut) -> Vector:
        return Vector(self.field, {i: sigma(a) for i, a in self._c.items()})

    def __eq__(self, other):
        return (isinstance(other, Vector) and self.field == other.field
                and self._c == other._c)

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.field.name, tuple(self.items())))
        return self._h

    def __repr__(self):
        return format_vector(self)


def vec(field: Field, coords) -> Vector:
    """Convenience constructor coercing plain numbers into ``field``."""
    co = getattr(field, "coerce", lambda a: a)
    return Vector(field, {i: co(a) for i, a in dict(coords).items()})


def linear_combination(field: Field, terms) -> Vector:
    out = Vector.zero(field)
    for alpha, v in terms:
        out = out + v.scale(alpha)
    return out


# ---------------------------------------------------------------------------
# semilinear maps
# ---------------------------------------------------------------------------


class SemilinearMap:
    """``mu(sum c_i e_i) = sum sigma(c_i) mu(e_i)``."""

    field: Field
    sigma: FieldAut

    def image(self, i: int) -> Vector:
        raise NotImplementedError

    def apply(self, v: Vector) -> Vector:
        f = self.field
        out = Vector.zero(f)
        for i, a in v.items():
            out = out + self.image(i).scale(self.sigma(a))
        return out


@dataclass(frozen=True, eq=False)
class PermInduced(SemilinearMap):
    perm: PermExpr
    field: Field
    sigma: FieldAut

    def image(self, i):
        return Vector.basis(self.field, self.perm._fwd(i))

    def apply(self, v):
        s = self.sigma
        return Vector(self.field, {self.perm._fwd(i): s(a) for i, a in v.items()})


@dataclass(frozen=True, eq=False)
class FiniteModification(SemilinearMap):
    """``e_i -> table[i]`` for listed ``i``, ``e_i -> e_i`` elsewhere."""

    table: tuple[tuple[int, Vector], ...]
    field: Field
    sigma: FieldAut

    def image(self, i):
        for k, v in self.table:
            if k == i:
                return v
        return Vector.basis(self.field, i)


@dataclass(frozen=True, eq=False)
class Scaled(SemilinearMap):
    alpha: object
    inner: SemilinearMap

    @property
    def field(self):
        return self.inner.field

    @property
    def sigma(self):
        return self.inner.sigma

    def image(self, i):
        return self.inner.image(i).scale(self.alpha)

    def apply(self, v):
        return self.inner.apply(v).scale(self.alpha)


@dataclass(frozen=True, eq=False)
class Composed(SemilinearMap):
    """Apply ``first``, then ``second``."""

    first: SemilinearMap
    second: SemilinearMap

    @property
    def field(self):
        return self.first.field

    @property
    def sigma(self):
        return self.first.sigma.then(self.second.sigma)

    def image(self, i):
        return self.second.apply(self.first.image(i))

    def apply(self, v):
        return self.second.apply(self.first.apply(v))


def identity_map(field: Field) -> PermInduced:
    return PermInduced(Prod(()), field, field.aut("id"))


def finite_modification(field: Field, table: dict, sigma: Optional[FieldAut] = None
                        ) -> FiniteModification:
    return FiniteModification(tuple(sorted(table.items())), field, sigma or field.aut("id"))


def apply(m: SemilinearMap, v: Vector) -> Vector:
    return m.apply(v)


def compose(m1: SemilinearMap, m2: SemilinearMap) -> SemilinearMap:
    """The map ``v -> m2(m1(v))``."""
    if m1.field != m2.field:
        raise AutcodeError("maps over different fields")
    if isinstance(m1, PermInduced) and isinstance(m2, PermInduced):
        return PermInduced(Prod((m1.perm, m2.perm)), m1.field, m1.sigma.then(m2.sigma))
    return Composed(m1, m2)


def _mat_inverse(field: Field, cols: list[list]) -> list[list]:
    """Inverse of the square matrix given by its columns, as columns."""
    n = len(cols)
    # rows of [M | I]
    rows = [[cols[c][r] for c in range(n)] + [field.one if r == k else field.zero
                                              for k in range(n)] for r in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != field.zero), None)
        if piv is None:
            raise AutcodeError("finite modification table is not invertible")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = field.inv(rows[c][c])
        rows[c] = [field.mul(inv, a) for a in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != field.zero:
                k = rows[r][c]
                rows[r] = [field.sub(a, field.mul(k, b)) for a, b in zip(rows[r], rows[c])]
    return [[rows[r][n + c] for r in range(n)] for c in range(n)]


def invert(m: SemilinearMap) -> SemilinearMap:
    f = m.field
    if isinstance(m, PermInduced):
        return PermInduced(Inv(m.perm), f, m.sigma.inverse())
    if isinstance(m, Scaled):
        # (alpha mu)^-1 = sigma^-1(alpha^-1) mu^-1
        return Scaled(m.sigma.inverse()(f.inv(m.alpha)), invert(m.inner))
    if isinstance(m, Composed):
        return Composed(invert(m.second), invert(m.first))
    if isinstance(m, FiniteModification):
        keys = [k for k, _ in m.table]
        idx = sorted(set(keys).union(*(v.support for _, v in m.table)))
        pos = {u: r for r, u in enumerate(idx)}
        cols = []
        for u in idx:
            img = m.image(u)
            cols.append([img[v] for v in idx])
            if not img.support <= set(idx):  # pragma: no cover - idx covers supports
                raise AutcodeError("table image escapes its carrier")
        icols = _mat_inverse(f, cols)
        sinv = m.sigma.inverse()
        table = {}
        for u in idx:
            v = Vector(f, {w: sinv(icols[pos[u]][pos[w]]) for w in idx})
            if v != Vector.basis(f, u):
                table[u] = v
        return finite_modification(f, table, sinv)
    raise AutcodeError(f"no closed-form inverse for {type(m).__name__}")


# ---------------------------------------------------------------------------
# GSL modulo scalars
# ---------------------------------------------------------------------------


def _strip_scalars(m: SemilinearMap) -> SemilinearMap:
    while isinstance(m, Scaled):
        m = m.inner
    return m


def normalize(m: SemilinearMap) -> SemilinearMap:
    """Scalar-normal form: the least nonzero coordinate of ``mu(e_0)`` becomes 1."""
    base = _strip_scalars(m)
    img = base.image(0)
    if img.is_zero():
        raise AutcodeError("map kills e_0, so it is not injective")
    c = img[img.leading()]
    f = base.field
    return base if c == f.one else Scaled(f.inv(c), base)


@dataclass(frozen=True, eq=False)
class GslElement:
    rep: SemilinearMap

    @classmethod
    def of(cls, m: SemilinearMap) -> GslElement:
        return cls(normalize(m))

    def then(self, other: GslElement) -> GslElement:
        return GslElement.of(compose(self.rep, other.rep))

    def inverse(self) -> GslElement:
        return GslElement.of(invert(self.rep))

    def conj(self, by: GslElement) -> GslElement:
        """``self^by = by^-1 self by`` (left to right)."""
        return GslElement.of(compose(compose(invert(by.rep), self.rep), by.rep))

    def comm(self, other: GslElement) -> GslElement:
        a, b = self.rep, other.rep
        return GslElement.of(compose(compose(compose(invert(a), invert(b)), a), b))


def delta_embed(p: PermExpr, field: Optional[Field] = None) -> GslElement:
    """The class of the linear map ``e_i -> e_{p(i)}``."""
    f = field or Rationals()
    return GslElement.of(PermInduced(p, f, f.aut("id")))


def _window_indices(w, indices) -> Iterable[int]:
    if indices is not None:
        return indices
    w = w if isinstance(w, Window) else Window(int(w))
    return range(w.bound)


def gsl_equal_on(g1: GslElement, g2: GslElement, w, indices=None) -> bool:
    a, b = g1.rep, g2.rep
    return a.sigma == b.sigma and all(a.image(i) == b.image(i)
                                      for i in _window_indices(w, indices))


def _scalar_ratio(u: Vector, v: Vector):
    """``alpha`` with ``u == alpha * v`` or ``None``."""
    if u.support != v.support or u.is_zero():
        return None
    f = u.field
    i = u.leading()
    alpha = f.div(u[i], v[i])
    return alpha if v.scale(alpha) == u else None


def equivalent_mod_scalar(m1: SemilinearMap, m2: SemilinearMap, w, indices=None) -> bool:
    """Same twist and one nonzero scalar relating every basis image in the window."""
    if m1.field != m2.field or m1.sigma != m2.sigma:
        return False
    alpha = None
    for i in _window_indices(w, indices):
        a = _scalar_ratio(m1.image(i), m2.image(i))
        if a is None or (alpha is not None and a != alpha):
            return False
        alpha = a
    return True


def nsim_identity(m: SemilinearMap, w, indices=None) -> bool:
    """True iff ``m`` is visibly not a scalar multiple of the identity.

    Either ``m(e_0)`` is independent of ``e_0``, or ``m(e_0) = alpha e_0``
    and some basis vector in the window is scaled by something else.  A
    nontrivial twist is reported as well since it alone breaks scalar
    equivalence.
    """
    if not m.sigma.is_identity():
        return True
    f = m.field
    e0 = Vector.basis(f, 0)
    alpha = _scalar_ratio(m.image(0), e0)
    if alpha is None:
        return True
    for i in _window_indices(w, indices):
        if m.image(i) != Vector.basis(f, i).scale(alpha):
            return True
    return False


# ---------------------------------------------------------------------------
# finitely generated subspaces
# ---------------------------------------------------------------------------


def _reduce(v: Vector, basis: tuple[Vector, ...]) -> Vector:
    f = v.field
    for b in basis:
        p = b.leading()
        c = v[p]
        if c != f.zero:
            v = v - b.scale(c)
    return v


@dataclass(frozen=True)
class Subspace:
    field: Field
    basis: tuple[Vector, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def support(self) -> frozenset:
        out: frozenset = frozenset()
        for b in self.basis:
            out |= b.support
        return out

    def __contains__(self, v: Vector) -> bool:
        return member(v, self)

    def __repr__(self):
        return format_subspace(self)


def _insert(basis: list[Vector], v: Vector) -> bool:
    f = v.field
    r = _reduce(v, tuple(basis))
    if r.is_zero():
        return False
    p = r.leading()
    r = r.scale(f.inv(r[p]))
    for k, b in enumerate(basis):
        c = b[p]
        if c != f.zero:
            basis[k] = b - r.scale(c)
    basis.append(r)
    basis.sort(key=Vector.leading)
    return True


def span(field: Field, vs: Iterable[Vector]) -> Subspace:
    basis: list[Vector] = []
    for v in vs:
        if v.field != field:
            raise AutcodeError("vector from a different field")
        _insert(basis, v)
    return Subspace(field, tuple(basis))


def member(v: Vector, S: Subspace) -> bool:
    return _reduce(v, S.basis).is_zero()


def subspace_sum(S: Subspace, T: Subspace) -> Subspace:
    return span(S.field, S.basis + T.basis)


def intersect(S: Subspace, T: Subspace) -> Subspace:
    """Zassenhaus: echelonize rows ``(s | s)`` and ``(t | 0)``; rows ``(0 | x)`` span the meet."""
    f = S.field
    off = max(S.support | T.support, default=-1) + 1
    if off == 0:
        return Subspace(f)

    def doubled(v, keep):
        c = dict(v.items())
        if keep:
            c.update({i + off: a for i, a in v.items()})
        return Vector(f, c)

    rows = span(f, [doubled(s, True) for s in S.basis] + [doubled(t, False) for t in T.basis])
    meet = [Vector(f, {i - off: a for i, a in r.items()})
            for r in rows.basis if r.leading() >= off]
    return span(f, meet)


def leq(S: Subspace, T: Subspace) -> bool:
    return all(member(b, T) for b in S.basis)


def induced(g, S: Subspace) -> Subspace:
    m = g.rep if isinstance(g, GslElement) else g
    return span(S.field, (m.apply(b) for b in S.basis))


# ---------------------------------------------------------------------------
# the five test spaces
# ---------------------------------------------------------------------------


def guichard_generators(which: int, field: Field, count: int) -> list[Vector]:
    """The first ``count`` listed generators of ``V_which``."""
    one = field.one
    gens = []
    for j in range(count):
        if which == 1:
            gens.append(Vector(field, {2 * j: one}))
        elif which == 2:
            gens.append(Vector(field, {2 * j + 1: one}))
        elif which == 3:
            gens.append(Vector(field, {2 * j: one, 2 * j + 1: one}))
        elif which == 4:
            gens.append(Vector(field, {2 * j + 1: one, 2 * j + 2: one}))
        elif which == 5:
            gens.append(Vector(field, {2 * j: one, 2 * j + 1: field.enumerate(j)}))
        else:
            raise ValueError(f"no space V_{which}")
    return gens


def guichard_membership(which: int, v: Vector) -> bool:
    f = v.field
    if v.is_zero():
        return True
    top = max(v.support)
    if which == 1:
        return all(i % 2 == 0 for i in v.support)
    if which == 2:
        return all(i % 2 == 1 for i in v.support)
    if which == 3:
        return all(v[2 * j] == v[2 * j + 1] for j in range(top // 2 + 1))
    if which == 4:
        # generators touching indices <= top + 1 are the only ones that can matter
        S = span(f, guichard_generators(4, f, top // 2 + 1))
        return member(v, S)
    if which == 5:
        return all(v[2 * j + 1] == f.mul(f.enumerate(j), v[2 * j]) for j in range(top // 2 + 1))
    raise ValueError(f"no space V_{which}")


# ---------------------------------------------------------------------------
# the finite-difference property of finitary images
# ---------------------------------------------------------------------------


def moved_basis_span(p: PermExpr, field: Field) -> Subspace:
    supp = finite_support(p)
    if supp is None:
        raise CertificateError("permutation has no finitary certificate")
    return span(field, (Vector.basis(field, i) for i in sorted(supp) if p._fwd(i) != i))


def property_D_check(m: PermInduced, samples: Iterable[Vector]) -> bool:
    """``v - m(v)`` lies in the span of the moved basis vectors for every sample."""
    W = moved_basis_span(m.perm, m.field)
    return all(member(v - m.apply(v), W) for v in samples)


def refute_property_D(p: PermExpr, W: Subspace, field: Optional[Field] = None,
                      search_limit: int = 100_000) -> Vector:
    """A vector ``x`` with ``x - m(x)`` outside ``W`` for the map induced by ``p``.

    ``p`` must certify infinitely many 2-cycles.  A swapped pair of basis
    vectors outside the finite support of ``W`` gives the witness.
    """
    cert = certificate_of(p)
    if not cert.infinite_two_cycles:
        raise CertificateError("expression does not certify infinitely many 2-cycles")
    f = field or W.field
    m = PermInduced(p, f, f.aut("id"))
    B1 = W.support
    for u in range(search_limit):
        v = p._fwd(u)
        if v == u or p._fwd(v) != u or u in B1 or v in B1:
            continue
        x = Vector.basis(f, u)
        if member(x - m.apply(x), W):  # pragma: no cover - excluded by construction
            raise AutcodeError("swap outside the support of W fell inside W")
        return x
    raise AutcodeError(f"no swapped pair found below {search_limit}")


def random_vector(field: Field, rng: random.Random, dim: int, density: float = 0.6) -> Vector:
    return Vector(field, {i: field.random(rng) for i in range(dim) if rng.random() < density})


def random_subspace(field: Field, rng: random.Random, max_dim: int, ambient: int) -> Subspace:
    k = rng.randint(0, max_dim)
    return span(field, (random_vector(field, rng, ambient) for _ in range(k)))


# ---------------------------------------------------------------------------
# text forms
# ---------------------------------------------------------------------------


def format_vector(v: Vector) -> str:
    f = v.field
    body = ", ".join(f"{i}:{f.format(a)}" for i, a in v.items())
    return f"{f.name}[{body}]"


_VEC = re.compile(r"^\s*([A-Za-z0-9()]+)\s*\[(.*)\]\s*$")


def parse_vector(text: str, field: Optional[Field] = None) -> Vector:
    m = _VEC.match(text)
    if m is None:
        raise AutcodeError(f"bad vector text {text!r}")
    f = get_field(m.group(1))
    if field is not None and f != field:
        raise AutcodeError(f"vector tagged {f.name}, expected {field.name}")
    coords = {}
    body = m.group(2).strip()
    if body:
        for item in body.split(","):
            i, a = item.split(":")
            coords[int(i)] = f.parse(a.strip())
    return Vector(f, coords)


def format_subspace(S: Subspace) -> str:
    return S.field.name + "{" + "; ".join(format_vector(b) for b in S.basis) + "}"


def parse_subspace(text: str) -> Subspace:
    text = text.strip()
    brace = text.index("{")
    f = get_field(text[:brace])
    body = text[brace + 1:text.rindex("}")].strip()
    vs = [parse_vector(part, f) for part in body.split(";")] if body else []
    return span(f, vs)
