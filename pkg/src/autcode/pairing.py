"""Cantor pairing and the integer fold used by the column schemes."""
from __future__ import annotations

from math import isqrt


def cantor(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError(f"cantor pairing needs naturals, got ({a}, {b})")
    s = a + b
    return s * (s + 1) // 2 + b


def uncantor(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError(f"negative code {z}")
    s = (isqrt(8 * z + 1) - 1) // 2
    b = z - s * (s + 1) // 2
    return s - b, b


def fold(i: int) -> int:
    """Bijection Z -> N: 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ..."""
    return 2 * i if i >= 0 else -2 * i - 1


def unfold(a: int) -> int:
    return a // 2 if a % 2 == 0 else -(a + 1) // 2
