"""Text syntax for permutation expressions.

Grammar::

    expr   := term {"*" term}
    term   := "[" expr "," expr "]" | factor ["^" exp]
    exp    := integer | "{" integer "}" | "{" expr "}"
    factor := primary {"'"}
    primary:= atom | "id" | "(" nat nat {nat} ")" | "(" expr ")"
    atom   := "w" | "g0" | "g1" | "p0" | "z" | "tau" | "swapadj" | "blk"
            | "b" | "p[" nat "]"

``^`` with an integer is a power, ``^{expr}`` is conjugation, ``'`` is the
inverse and ``[x, y]`` the commutator.  Integers may carry a leading ``-``.
"""
from __future__ import annotations

import random
import re
from typing import Optional

from . import coding_ce, coding_pi2
from .errors import ParseError
from .permcore import (Atom, Comm, Conj, Fin, FinPerm, Inv, PermExpr, Pow, Prod, blk,
                       swapadj)

ATOM_NAMES = ("w", "g0", "g1", "p0", "z", "tau", "swapadj", "blk", "b", "p")


class UnknownAtomError(ParseError):
    pass


class Vocabulary:
    """Binds atom names to evaluators.

    ``family`` picks which construction ``w`` and ``b`` belong to: ``"ce"``
    (enumerated sets, with ``g0``/``g1``) or ``"pi2"`` (the staged
    construction, with ``p0``/``p[n]``).  Atoms are built on first use.
    """

    def __init__(self, family: str = "ce", enumerator=None, predicate=None,
                 max_stage: int = 1600):
        if family not in ("ce", "pi2"):
            raise ValueError(f"unknown family {family!r}")
        self.family = family
        self.scheme_z = coding_ce.default_scheme_z()
        self.scheme_2 = coding_pi2.default_scheme_2()
        self.enumerator = enumerator or coding_ce.Enumerator.from_rule("evens", 200)
        self.predicate = predicate or coding_pi2.builtin_predicate("always")
        self.max_stage = max_stage
        self._cache: dict = {}

    def names(self) -> tuple[str, ...]:
        return ATOM_NAMES

    def _make(self, name, params):
        if name == "w":
            return (coding_ce.gen_w(self.scheme_z) if self.family == "ce"
                    else coding_pi2.gen_w3(self.scheme_2))
        if name == "g0":
            return coding_ce.gen_g0(self.scheme_z)
        if name == "g1":
            return coding_ce.gen_g1(self.scheme_z)
        if name == "p0":
            return coding_pi2.gen_p0(self.scheme_2)
        if name == "p":
            return coding_pi2.pn_atom(self.scheme_2, params[0])
        if name == "z":
            return coding_pi2.gen_z()
        if name == "tau":
            return coding_pi2.gen_tau()
        if name == "swapadj":
            return swapadj()
        if name == "blk":
            return blk()
        if name == "b":
            if self.family == "ce":
                return coding_ce.gen_b(self.scheme_z, self.enumerator)
            return coding_pi2.build_b(self.scheme_2, self.predicate, self.max_stage)
        raise UnknownAtomError(f"unknown atom {name!r}")

    def atom(self, name: str, params: tuple[int, ...] = ()) -> Atom:
        if name not in ATOM_NAMES:
            raise UnknownAtomError(f"unknown atom {name!r}")
        if (name == "p") != bool(params):
            raise UnknownAtomError(f"atom {name!r} takes {'one index' if name == 'p' else 'no index'}")
        key = (name, tuple(params))
        if key not in self._cache:
            self._cache[key] = self._make(name, tuple(params))
        return self._cache[key]


_DEFAULT_VOCAB: Optional[Vocabulary] = None


def default_vocabulary() -> Vocabulary:
    global _DEFAULT_VOCAB
    if _DEFAULT_VOCAB is None:
        _DEFAULT_VOCAB = Vocabulary()
    return _DEFAULT_VOCAB


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[*^{}()\[\],'-]))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, vocab):
        self.toks = _tokenize(text)
        self.i = 0
        self.vocab = vocab

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym):
        kind, val, pos = self.take()
        if val != sym or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {sym!r}, found {found}", pos)

    def is_sym(self, sym, k=0):
        kind, val, _ = self.peek(k)
        return kind == "sym" and val == sym

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return e

    def expr(self):
        terms = [self.term()]
        while self.is_sym("*"):
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Prod(tuple(terms))

    def term(self):
        if self.is_sym("["):
            self.take()
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect("]")
            return Comm(left, right)
        f = self.factor()
        if self.is_sym("^"):
            self.take()
            if self.is_sym("{"):
                self.take()
                if self.peek()[0] == "int" or self.is_sym("-"):
                    k = self.integer()
                    self.expect("}")
                    return Pow(f, k)
                by = self.expr()
                self.expect("}")
                return Conj(f, by)
            return Pow(f, self.integer())
        return f

    def integer(self):
        sign = 1
        if self.is_sym("-"):
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ParseError("expected an integer", pos)
        return sign * int(val)

    def factor(self):
        f = self.primary()
        while self.is_sym("'"):
            self.take()
            f = Inv(f)
        return f

    def primary(self):
        kind, val, pos = self.peek()
        if kind == "name":
            self.take()
            if val == "id":
                return Prod(())
            params = ()
            if val == "p" and self.is_sym("["):
                self.take()
                k, v, p = self.take()
                if k != "int":
                    raise ParseError("expected a column index", p)
                params = (int(v),)
                self.expect("]")
            try:
                return self.vocab.atom(val, params)
            except UnknownAtomError as exc:
                raise UnknownAtomError(str(exc), pos) from None
        if kind == "sym" and val == "(":
            self.take()
            if self.peek()[0] == "int":
                return self.cycle(pos)
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos)

    def cycle(self, start):
        pts = []
        while self.peek()[0] == "int":
            pts.append(int(self.take()[1]))
        self.expect(")")
        if len(pts) < 2:
            raise ParseError("malformed cycle: needs at least two points", start)
        if len(set(pts)) != len(pts):
            raise ParseError("malformed cycle: repeated point", start)
        return Fin(FinPerm.from_cycles(pts))


def parse(text: str, vocab: Optional[Vocabulary] = None) -> PermExpr:
    return _Parser(text, vocab or default_vocabulary()).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _exp(k: int) -> str:
    return str(k) if k >= 0 else "{%d}" % k


def _pr_expr(e):
    if isinstance(e, Prod) and len(e.factors) == 1:
        return _pr_expr(e.factors[0])
    if isinstance(e, Prod) and len(e.factors) >= 2:
        return "*".join(_pr_term(f) for f in e.factors)
    return _pr_term(e)


def _pr_term(e):
    if isinstance(e, Comm):
        return f"[{_pr_expr(e.left)}, {_pr_expr(e.right)}]"
    if isinstance(e, Pow):
        return f"{_pr_factor(e.base)}^{_exp(e.exp)}"
    if isinstance(e, Conj):
        return f"{_pr_factor(e.arg)}^{{{_pr_expr(e.by)}}}"
    return _pr_factor(e)


def _pr_factor(e):
    if isinstance(e, Atom):
        if e.name not in ATOM_NAMES or (e.name == "p") != bool(e.params):
            raise UnknownAtomError(f"atom {e.name!r} has no text form")
        return f"p[{e.params[0]}]" if e.name == "p" else e.name
    if isinstance(e, Fin):
        cycles = e.perm.cycles()
        if not cycles:
            return "id"
        text = "*".join("(" + " ".join(map(str, c)) + ")" for c in cycles)
        return text if len(cycles) == 1 else f"({text})"
    if isinstance(e, Inv):
        return _pr_factor(e.arg) + "'"
    if isinstance(e, Prod) and not e.factors:
        return "id"
    if isinstance(e, Prod) and len(e.factors) == 1:
        return _pr_factor(e.factors[0])
    return f"({_pr_expr(e)})"


def to_text(e: PermExpr) -> str:
    """Canonical text of ``e``.

    Round-trips structurally except for two degenerate shapes with no text
    of their own: one-factor products print as their factor and
    multi-cycle literals print as a product of single cycles.
    """
    return _pr_expr(e)


# ``print`` mirrors the operation name used throughout the docs.
print_expr = to_text


# ---------------------------------------------------------------------------
# random expressions (round-trip and law testing)
# ---------------------------------------------------------------------------


def random_cycle(rng: random.Random, max_point: int = 20, max_len: int = 4) -> FinPerm:
    k = rng.randint(2, max_len)
    return FinPerm.from_cycles(rng.sample(range(max_point), k))


def random_expr(rng: random.Random, vocab: Optional[Vocabulary] = None, depth: int = 3,
                atoms: Optional[tuple[str, ...]] = None) -> PermExpr:
    vocab = vocab or default_vocabulary()
    atoms = atoms or ATOM_NAMES
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.3:
            return Fin(random_cycle(rng))
        name = rng.choice(atoms)
        return vocab.atom(name, (rng.randint(0, 5),) if name == "p" else ())
    kind = rng.choice(("inv", "pow", "prod", "conj", "comm"))
    sub = lambda: random_expr(rng, vocab, depth - 1, atoms)  # noqa: E731
    if kind == "inv":
        return Inv(sub())
    if kind == "pow":
        return Pow(sub(), rng.randint(-3, 3))
    if kind == "prod":
        return Prod(tuple(sub() for _ in range(rng.randint(2, 3))))
    if kind == "conj":
        return Conj(sub(), sub())
    return Comm(sub(), sub())
