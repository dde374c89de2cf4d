"""Subsets of {0, ..., n-1} represented as int bitmasks."""

from __future__ import annotations

from collections.abc import Iterable, Iterator


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> list[int]:
    return list(bits(mask))


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def universe(n: int) -> int:
    """The full subset of an n-element ground set."""
    return (1 << n) - 1
