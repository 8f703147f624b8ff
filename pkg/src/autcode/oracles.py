"""Independent reference computations used to cross-check the main modules.

Nothing in here calls the code it checks.  Permutations are numpy index
arrays, subspaces are dense matrices reduced mod p, the stage construction
is recounted from the pairing alone, and interval elements are probed at
sample points.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

# ---------------------------------------------------------------------------
# permutations as arrays
# ---------------------------------------------------------------------------


def perm_array(mapping: dict, n: int) -> np.ndarray:
    a = np.arange(n)
    for x, y in mapping.items():
        a[x] = y
    return a


def cycles_array(cycles: Iterable[tuple[int, ...]], n: int) -> np.ndarray:
    a = np.arange(n)
    for c in cycles:
        for x, y in zip(c, c[1:] + c[:1]):
            a[x] = y
    return a


def then(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Apply ``a`` first, then ``b``."""
    return b[a]


def inverse(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a))
    return out


def power(a: np.ndarray, k: int) -> np.ndarray:
    base = a if k >= 0 else inverse(a)
    out = np.arange(len(a))
    for _ in range(abs(k)):
        out = then(out, base)
    return out


def conj(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return then(then(inverse(y), x), y)


def comm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return then(then(then(inverse(x), inverse(y)), x), y)


def transposition(n: int, m: int, size: int) -> np.ndarray:
    return cycles_array([(n, m)], size)


def cycle_counts(a: np.ndarray) -> dict[int, int]:
    seen = np.zeros(len(a), bool)
    out: dict[int, int] = {}
    for x in range(len(a)):
        if seen[x]:
            continue
        k, y = 0, x
        while not seen[y]:
            seen[y] = True
            y = a[y]
            k += 1
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# the enumerated-set coding, simulated on column 0 by tables
# ---------------------------------------------------------------------------


def ce_commutators_on_column0(stage: int | None, rows: int) -> tuple[list[int], list[int]]:
    """Rows of column 0 moved by the two commutators when ``n`` entered at ``stage``.

    Rows are just ``0..rows-1``; ``g0`` pairs ``(2j, 2j+1)``, ``g1`` pairs
    ``(2j+1, 2j+2)`` and the shifted ``b`` swaps ``(stage, stage+1)``.
    """
    g0 = cycles_array([(2 * j, 2 * j + 1) for j in range(rows // 2)], rows)
    g1 = cycles_array([(2 * j + 1, 2 * j + 2) for j in range((rows - 1) // 2)], rows)
    b = np.arange(rows) if stage is None else transposition(stage, stage + 1, rows)
    out = []
    for g in (g0, g1):
        c = comm(g, b)
        out.append([int(x) for x in np.nonzero(c != np.arange(rows))[0]])
    return out[0], out[1]


# ---------------------------------------------------------------------------
# stage bookkeeping
# ---------------------------------------------------------------------------


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def stage_count(n: int, S: int, R: Callable[[int, int], bool]) -> int:
    """``|{t : <n, t> < S and R(n, t)}|`` by direct search."""
    return sum(1 for t in range(S) if cantor_pair(n, t) < S and R(n, t))


def stages_touching(n: int, S: int) -> int:
    return sum(1 for t in range(S) if cantor_pair(n, t) < S)


# ---------------------------------------------------------------------------
# subspaces over GF(p) as dense matrices
# ---------------------------------------------------------------------------


def rref_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(M[r:, c])[0]
        if len(piv) == 0:
            continue
        k = r + piv[0]
        M[[r, k]] = M[[k, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
    return M[:r]


def rank_mod_p(M: np.ndarray, p: int) -> int:
    if len(M) == 0:
        return 0
    return len(rref_mod_p(M, p))


def in_rowspace(v: np.ndarray, M: np.ndarray, p: int) -> bool:
    if len(M) == 0:
        return not np.any(np.asarray(v) % p)
    return rank_mod_p(np.vstack([M, v]), p) == rank_mod_p(M, p)


def span_elements(M: np.ndarray, p: int) -> set[tuple]:
    """Every vector of the row space; only for tiny dimensions."""
    M = np.asarray(M, dtype=np.int64)
    if len(M) == 0:
        return set()
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(M)):
        out.add(tuple(int(x) for x in np.asarray(coeffs) @ M % p))
    return out


# ---------------------------------------------------------------------------
# intervals probed at points
# ---------------------------------------------------------------------------


def sample_points(lo: int, hi: int, denominators=(1, 2, 3, 4)) -> list[Fraction]:
    pts = set()
    for d in denominators:
        for k in range(lo * d, hi * d):
            pts.add(Fraction(k, d))
    return sorted(pts)


def in_union(pieces, q) -> bool:
    return any(a <= q < b for a, b in pieces)


def lifted_preimage(perm_inverse: Callable[[int], int], q: Fraction) -> Fraction:
    """``p~^-1(q)`` from the inverse permutation alone."""
    if q < 0:
        return q
    n = q.numerator // q.denominator
    return perm_inverse(n) + (q - n)
