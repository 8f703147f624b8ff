"""Decoding membership through the lifted images only.

The coding permutations are pushed into the semilinear group (basis
permutation maps modulo scalars) or into the interval algebra, the two
commutators are formed there, and nontriviality is read off the lifted
objects: ``nsim_identity`` on column 0 for the linear lift, moved unit
intervals for the interval lift.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import coding_ce, intalg, vspace
from .fields import Field, Rationals
from .permcore import Inv, PermExpr, Pow, Window


@dataclass(frozen=True)
class LiftedVerdict:
    member: bool
    nontrivial: tuple[bool, bool]

    def __str__(self):
        return "In" if self.member else "NotByHorizon"


def _col0(c: coding_ce.Construction, w: Window) -> list[int]:
    return coding_ce.column_points(c.scheme, 0, w)


def decode_via_gsl(n: int, c: coding_ce.Construction, w=None,
                   field: Field | None = None) -> LiftedVerdict:
    f = field or Rationals()
    w = w or coding_ce.required_window(c.scheme, c.enumerator.horizon)
    d = lambda p: vspace.delta_embed(p, f)  # noqa: E731
    bn = d(c.b).conj(d(Pow(c.w, -n)))
    pts = _col0(c, w)
    flags = tuple(vspace.nsim_identity(d(g).comm(bn).rep, w, indices=pts)
                  for g in (c.g0, c.g1))
    return LiftedVerdict(any(flags), flags)


def _lifted_comm_moves(x: PermExpr, y: PermExpr, pts) -> bool:
    # [x, y] = x^-1 y^-1 x y, each factor applied as H(.) on a unit interval
    steps = (Inv(x), Inv(y), x, y)
    for n in pts:
        u = intalg.BElem.unit(n)
        v = u
        for s in steps:
            v = intalg.apply_H(s, v)
        if v != u:
            return True
    return False


def decode_via_ba(n: int, c: coding_ce.Construction, w=None) -> LiftedVerdict:
    w = w or coding_ce.required_window(c.scheme, c.enumerator.horizon)
    bn = c.shifted_b(n)
    pts = _col0(c, w)
    flags = tuple(_lifted_comm_moves(g, bn, pts) for g in (c.g0, c.g1))
    return LiftedVerdict(any(flags), flags)
