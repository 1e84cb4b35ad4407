"""Helpers for sets of small non-negative integers stored as Python ints.

Bit ``k`` of the integer is set iff ``k`` belongs to the set. Python ints are
arbitrary precision, so a row of an ``N``-vertex class is a single int and
intersection sizes are ``(a & b).bit_count()``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List


def from_iter(items: Iterable[int]) -> int:
    bits = 0
    for k in items:
        if k < 0:
            raise ValueError(f"negative element {k}")
        bits |= 1 << k
    return bits


def full(n: int) -> int:
    """The set {0, ..., n-1}."""
    return (1 << n) - 1


def popcount(bits: int) -> int:
    return bits.bit_count()


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the members of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def to_list(bits: int) -> List[int]:
    return list(iter_bits(bits))


def compress(bits: int, positions: List[int]) -> int:
    """Re-index ``bits`` onto ``positions``: bit ``k`` of the result is set iff
    ``positions[k]`` is in ``bits``."""
    out = 0
    for k, p in enumerate(positions):
        if bits >> p & 1:
            out |= 1 << k
    return out
