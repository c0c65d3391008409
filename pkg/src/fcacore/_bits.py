"""Python ints used as bitsets: bit ``i`` set means index ``i`` is a member."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_indices(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def full(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def remap(mask: int, mapping: dict[int, int]) -> int:
    """Translate bit positions through ``mapping``; unmapped bits are dropped."""
    out = 0
    for i in iter_bits(mask):
        j = mapping.get(i)
        if j is not None:
            out |= 1 << j
    return out


def remapper(mapping: dict[int, int]) -> Callable[[int], int]:
    """:func:`remap` for a fixed ``mapping``, one 256-entry table per input byte."""
    if not mapping:
        return lambda mask: 0
    if all(i == j for i, j in mapping.items()):
        keep = from_indices(mapping)
        return lambda mask: mask & keep
    nbytes = max(mapping) // 8 + 1
    width = full(8 * nbytes)
    tables = []
    for k in range(nbytes):
        table = [0] * 256
        for bit in range(8):
            j = mapping.get(8 * k + bit)
            if j is None:
                continue
            out = 1 << j
            for v in range(1 << bit, 256, 1 << (bit + 1)):
                for w in range(v, v + (1 << bit)):
                    table[w] |= out
        tables.append(table)

    def apply(mask: int) -> int:
        out = 0
        for table, byte in zip(tables, (mask & width).to_bytes(nbytes, "little")):
            if byte:
                out |= table[byte]
        return out

    return apply
