"""Selecting interesting and readable pq-cores."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

from .context import FormalContext
from .lattice import enumerate_concepts
from .pqcore import CoreGrid, CoreParams, compute_core, grid_to_csv

__all__ = [
    "READABLE_BOUND",
    "SEARCH_BOUND",
    "RankedCore",
    "InterestReport",
    "interesting_cores",
    "binary_search_readable",
    "exhaustive_search_readable",
    "heatmap_export",
]

READABLE_BOUND = 30
SEARCH_BOUND = 60


@dataclass(frozen=True)
class RankedCore:
    p: int
    q: int
    score: int
    lattice_size: int | None
    object_count: int
    attribute_count: int
    balanced: bool


@dataclass
class InterestReport:
    entries: list[RankedCore]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def keys(self) -> list[tuple[int, int]]:
        return [(e.p, e.q) for e in self.entries]

    def to_tsv(self) -> str:
        lines = ["rank\tp\tq\tscore\tsize\tbalance"]
        for rank, e in enumerate(self.entries, start=1):
            size = "" if e.lattice_size is None else e.lattice_size
            lines.append(f"{rank}\t{e.p}\t{e.q}\t{e.score}\t{size}\t{int(e.balanced)}")
        return "\n".join(lines) + "\n"


def interesting_cores(
    grid: CoreGrid, readability_bound: int = READABLE_BOUND, measure: str = "lattice"
) -> InterestReport:
    """Rank cores by the drop in size caused by one more step in ``p`` or ``q``.

    ``measure="lattice"`` uses concept counts (and drops cores with more than
    ``readability_bound`` concepts); ``measure="context"`` uses incidence
    counts.  Missing neighbours count as size 0.  A core is flagged balanced
    when one parameter is at least twice the other.
    """
    if measure == "lattice":
        if grid.cells and not grid.has_lattice_sizes:
            raise ValueError("grid lacks lattice sizes")
        size: Callable = lambda c: c.lattice_size
    elif measure == "context":
        size = lambda c: c.incidence_count
    else:
        raise ValueError(f"unknown measure {measure!r}")

    def at(p, q):
        cell = grid.cells.get((p, q))
        return 0 if cell is None else size(cell)

    entries = []
    for (p, q), cell in grid.cells.items():
        if p < 1 or q < 1:
            continue
        if cell.lattice_size is not None and cell.lattice_size > readability_bound:
            continue
        here = size(cell)
        score = max(here - at(p + 1, q), here - at(p, q + 1))
        entries.append(
            RankedCore(
                p, q, score, cell.lattice_size, cell.object_count, cell.attribute_count,
                max(p, q) >= 2 * min(p, q),
            )
        )
    entries.sort(key=lambda e: (-e.score, e.p, e.q))
    return InterestReport(entries)


def _side_params(side: str, k: int) -> tuple[int, int]:
    if side == "attribute":
        return 1, k
    if side == "object":
        return k, 1
    raise ValueError("side must be 'object' or 'attribute'")


def _side_range(K: FormalContext, side: str) -> int:
    return K.n_objects if side == "attribute" else K.n_attributes


def binary_search_readable(
    K: FormalContext, side: str = "attribute", lattice_bound: int = SEARCH_BOUND
) -> CoreParams | None:
    """Largest side-core whose concept lattice has at most ``lattice_bound`` concepts.

    ``side="attribute"`` searches ``(1, q)`` over ``q`` in ``[1, |G|]``,
    ``side="object"`` searches ``(p, 1)`` over ``p`` in ``[1, |M|]``.  Returns
    the smallest parameter with a non-empty core within the bound, or ``None``
    when no non-empty core on that side is small enough.  Relies on core
    lattice sizes shrinking as the parameter grows.
    """
    hi = _side_range(K, side)
    cores: dict[int, FormalContext] = {}
    sizes: dict[int, int] = {}

    def core(k):
        if k not in cores:
            cores[k] = compute_core(K, *_side_params(side, k))
        return cores[k]

    def size(k):
        if k not in sizes:
            sizes[k] = len(enumerate_concepts(core(k)))
        return sizes[k]

    if hi < 1 or core(1).is_empty:
        return None
    # last parameter with a non-empty core
    lo, top = 1, hi
    while lo < top:
        mid = (lo + top + 1) // 2
        if core(mid).is_empty:
            top = mid - 1
        else:
            lo = mid
    last = lo
    if size(last) > lattice_bound:
        return None
    lo, top = 1, last
    while lo < top:
        mid = (lo + top) // 2
        if size(mid) <= lattice_bound:
            top = mid
        else:
            lo = mid + 1
    return CoreParams(*_side_params(side, lo))


def exhaustive_search_readable(
    K: FormalContext, side: str = "attribute", lattice_bound: int = SEARCH_BOUND
) -> CoreParams | None:
    """Linear-scan counterpart of :func:`binary_search_readable`."""
    for k in range(1, _side_range(K, side) + 1):
        S = compute_core(K, *_side_params(side, k))
        if S.is_empty:
            return None
        if len(enumerate_concepts(S)) <= lattice_bound:
            return CoreParams(*_side_params(side, k))
    return None


def heatmap_export(grid: CoreGrid, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(grid_to_csv(grid))
