"""Exact computable fields: the rationals, GF(p) for primes p <= 97, and GF(4).

Elements are plain Python values (``Fraction`` for the rationals, ``int``
residues otherwise).  GF(4) elements are 2-bit integers ``a1*x + a0`` with
``x^2 = x + 1``; ``2`` is the generator ``x`` and ``3`` is ``x^2``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .errors import AutcodeError

PRIMES_TO_97 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                67, 71, 73, 79, 83, 89, 97)


class Field:
    name = "?"
    order: Optional[int] = None
    zero = 0
    one = 1

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> list:
        raise AutcodeError(f"{self.name} is infinite")

    def enumerate(self, j: int):
        """``j``-th term of the fixed enumeration alpha_0, alpha_1, ... of the field."""
        els = self.elements()
        return els[j % len(els)]

    def random(self, rng: random.Random):
        raise NotImplementedError

    def random_nonzero(self, rng: random.Random):
        while True:
            a = self.random(rng)
            if a != self.zero:
                return a

    def automorphisms(self) -> dict[str, "FieldAut"]:
        return {"id": FieldAut("id", self, lambda a: a)}

    def aut(self, name: str) -> "FieldAut":
        try:
            return self.automorphisms()[name]
        except KeyError:
            raise AutcodeError(f"{self.name} has no automorphism {name!r}") from None

    def format(self, a) -> str:
        return f"{a}/1"

    def parse(self, text: str):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class FieldAut:
    name: str
    field: Field
    fn: Callable

    def __call__(self, a):
        return self.fn(a)

    def inverse(self) -> "FieldAut":
        # identity and the GF(4) Frobenius are both involutions
        return self

    def then(self, other: "FieldAut") -> "FieldAut":
        """Apply ``self`` first, then ``other``."""
        if self.name == "id":
            return other
        if other.name == "id":
            return self
        if self.name == other.name == "frob":
            return self.field.aut("id")
        raise AutcodeError(f"cannot compose {self.name} and {other.name}")

    def __eq__(self, other):
        return (isinstance(other, FieldAut) and self.field == other.field
                and self.name == other.name)

    def __hash__(self):
        return hash((self.field.name, self.name))

    def is_identity(self) -> bool:
        return self.name == "id"


class Rationals(Field):
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def coerce(self, a):
        return Fraction(a)

    def enumerate(self, j: int):
        """0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, ... by height, then descending value."""
        for k, q in enumerate(_rationals_by_height()):
            if k == j:
                return q
        raise AssertionError  # pragma: no cover

    def random(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))

    def format(self, a) -> str:
        return f"{a.numerator}/{a.denominator}"

    def parse(self, text: str):
        return Fraction(text)


def _rationals_by_height() -> Iterator[Fraction]:
    from math import gcd

    yield Fraction(0)
    h = 1
    while True:
        pos = {Fraction(p, q) for p in range(1, h + 1) for q in range(1, h + 1)
               if max(p, q) == h and gcd(p, q) == 1}
        for q in sorted(pos, reverse=True):
            yield q
            yield -q
        h += 1


class PrimeField(Field):
    def __init__(self, p: int):
        if p not in PRIMES_TO_97:
            raise AutcodeError(f"GF({p}) not supported: need a prime <= 97")
        self.p = p
        self.order = p
        self.name = f"GF{p}"

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def coerce(self, a):
        return int(a) % self.p

    def elements(self):
        return list(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def parse(self, text: str):
        q = Fraction(text)
        return self.div(q.numerator % self.p, q.denominator % self.p)


_GF4_MUL = [[0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2]]
_GF4_INV = {1: 1, 2: 3, 3: 2}


class GF4(Field):
    name = "GF4"
    order = 4

    def add(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        return _GF4_MUL[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return _GF4_INV[a]

    def coerce(self, a):
        a = int(a)
        if a not in range(4):
            raise AutcodeError(f"GF4 element out of range: {a}")
        return a

    def elements(self):
        return [0, 1, 2, 3]

    def random(self, rng):
        return rng.randrange(4)

    def frobenius(self, a):
        return self.mul(a, a)

    def automorphisms(self):
        return {"id": FieldAut("id", self, lambda a: a),
                "frob": FieldAut("frob", self, self.frobenius)}

    def parse(self, text: str):
        q = Fraction(text)
        if q.denominator != 1:
            raise AutcodeError(f"GF4 element must be 0..3, got {text}")
        return self.coerce(q.numerator)


def get_field(name: str) -> Field:
    n = name.strip()
    if n in ("Q", "QQ", "rationals"):
        return Rationals()
    if n in ("GF4", "GF(4)"):
        return GF4()
    for prefix in ("GF(", "GF"):
        if n.startswith(prefix):
            try:
                return PrimeField(int(n[len(prefix):].rstrip(")")))
            except ValueError:
                break
    raise AutcodeError(f"unknown field {name!r}")
