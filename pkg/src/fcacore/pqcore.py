"""pq-cores of formal contexts.

The pq-core of ``K`` is the unique maximal induced sub-context in which every
object has at least ``p`` attributes and every attribute at least ``q``
objects.  :func:`compute_core` peels it off with one bucket queue per side,
keyed by the current derivation size, in time linear in ``|G| * |M|``.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from . import _bits
from .context import FormalContext, induced_by_masks
from .lattice import ConceptLattice, compute_core_lattice, enumerate_concepts

__all__ = [
    "CoreParams",
    "CoreCell",
    "CoreGrid",
    "CoreOrder",
    "compute_core",
    "brute_force_core",
    "core_grid",
    "core_counts",
    "connected_components",
    "core_order_diagram",
    "grid_to_csv",
]


class CoreParams(NamedTuple):
    p: int
    q: int


def _check_params(p: int, q: int) -> None:
    if int(p) != p or int(q) != q or p < 0 or q < 0:
        raise ValueError(f"core parameters must be non-negative integers, got ({p}, {q})")


class _BucketQueue:
    """Items bucketed by a non-increasing integer key."""

    __slots__ = ("key", "buckets", "low")

    def __init__(self, keys: list[int]):
        self.key = list(keys)
        top = max(self.key, default=0)
        self.buckets: list[set[int]] = [set() for _ in range(top + 1)]
        for item, k in enumerate(self.key):
            self.buckets[k].add(item)
        self.low = 0

    def decrement(self, item: int) -> None:
        k = self.key[item]
        self.buckets[k].discard(item)
        self.buckets[k - 1].add(item)
        self.key[item] = k - 1
        if k - 1 < self.low:
            self.low = k - 1

    def pop_below(self, bound: int) -> int | None:
        """Remove and return some item with key < bound."""
        limit = min(bound, len(self.buckets))
        while self.low < limit:
            bucket = self.buckets[self.low]
            if bucket:
                return bucket.pop()
            self.low += 1
        return None


def _core_masks(K: FormalContext, p: int, q: int) -> tuple[int, int]:
    obj_adj = [list(_bits.iter_bits(r)) for r in K.rows]
    attr_adj = [list(_bits.iter_bits(c)) for c in K.cols]
    objects = _BucketQueue([len(a) for a in obj_adj])
    attributes = _BucketQueue([len(a) for a in attr_adj])
    obj_alive = [True] * len(obj_adj)
    attr_alive = [True] * len(attr_adj)

    while True:
        g = objects.pop_below(p)
        if g is not None:
            obj_alive[g] = False
            for a in obj_adj[g]:
                if attr_alive[a]:
                    attributes.decrement(a)
        m = attributes.pop_below(q)
        if m is not None:
            attr_alive[m] = False
            for o in attr_adj[m]:
                if obj_alive[o]:
                    objects.decrement(o)
        if g is None and m is None:
            break

    omask = _bits.from_indices(i for i, alive in enumerate(obj_alive) if alive)
    amask = _bits.from_indices(i for i, alive in enumerate(attr_alive) if alive)
    return omask, amask


def compute_core(K: FormalContext, p: int, q: int) -> FormalContext:
    """Return the pq-core of ``K``.

    ``p = 0`` (``q = 0``) puts no constraint on objects (attributes).  The
    result may be empty; for ``p, q >= 1`` an empty core is the 0x0 context.

    >>> from fcacore.datasets import water
    >>> compute_core(water(), 4, 3).shape
    (6, 7)
    """
    _check_params(p, q)
    omask, amask = _core_masks(K, p, q)
    if omask == K.all_objects and amask == K.all_attributes:
        return K
    return induced_by_masks(K, omask, amask)


def brute_force_core(
    K: FormalContext, p: int, q: int, rng: np.random.Generator | int | None = None
) -> FormalContext:
    """Delete violating objects/attributes one at a time until none is left.

    With ``rng`` the next deletion is drawn at random among all current
    violators; otherwise the first violating object (then attribute) goes.
    """
    _check_params(p, q)
    gen = None if rng is None else np.random.default_rng(rng)
    objs, attrs = K.all_objects, K.all_attributes
    while True:
        bad = [("g", g) for g in _bits.iter_bits(objs) if (K.rows[g] & attrs).bit_count() < p]
        bad += [("m", m) for m in _bits.iter_bits(attrs) if (K.cols[m] & objs).bit_count() < q]
        if not bad:
            break
        kind, i = bad[0] if gen is None else bad[gen.integers(len(bad))]
        if kind == "g":
            objs &= ~(1 << i)
        else:
            attrs &= ~(1 << i)
    return induced_by_masks(K, objs, attrs)


@dataclass(frozen=True)
class CoreCell:
    object_count: int
    attribute_count: int
    incidence_count: int
    lattice_size: int | None = None
    core: FormalContext | None = field(default=None, compare=False, repr=False)


@dataclass
class CoreGrid:
    """Non-empty pq-cores for ``p, q >= 1`` keyed by ``(p, q)``."""

    cells: dict[tuple[int, int], CoreCell] = field(default_factory=dict)

    def __len__(self):
        return len(self.cells)

    def __getitem__(self, key):
        return self.cells[tuple(key)]

    def __contains__(self, key):
        return tuple(key) in self.cells

    def get(self, key, default=None):
        return self.cells.get(tuple(key), default)

    @property
    def has_lattice_sizes(self) -> bool:
        return bool(self.cells) and all(c.lattice_size is not None for c in self.cells.values())

    def cell_count(self) -> int:
        """Number of ``(p, q)`` pairs with a non-empty core."""
        return len(self.cells)

    def distinct_core_count(self) -> int:
        """Number of pairwise different non-empty core contexts."""
        return len({(c.core.objects, c.core.attributes) for c in self.cells.values()})

    @property
    def p_values(self) -> list[int]:
        return sorted({p for p, _ in self.cells})

    @property
    def q_values(self) -> list[int]:
        return sorted({q for _, q in self.cells})


def _cell(core: FormalContext, lattice: ConceptLattice | None) -> CoreCell:
    return CoreCell(
        core.n_objects,
        core.n_attributes,
        core.n_incidences,
        None if lattice is None else len(lattice),
        core,
    )


def _grid_row(args) -> list[tuple[tuple[int, int], CoreCell]]:
    p, core, lattice = args
    out = []
    q = 1
    while not core.is_empty:
        out.append(((p, q), _cell(core, lattice)))
        nxt = compute_core(core, p, q + 1)
        if lattice is not None:
            lattice = compute_core_lattice(core, nxt, lattice)
        core = nxt
        q += 1
    return out


def core_grid(K: FormalContext, with_lattice_sizes: bool = False, workers: int = 1) -> CoreGrid:
    """All non-empty pq-cores with ``p, q >= 1``.

    Each row ``p`` starts from the (p, 1)-core, derived from the (p-1, 1)-core,
    and descends in ``q`` by deleting from the previous core.  Lattice sizes
    are carried along by transforming the previous core's concepts instead of
    enumerating every core from scratch.  Rows are independent once their
    starting core is known; ``workers > 1`` evaluates them in a process pool.
    """
    starts = []
    core = compute_core(K, 1, 1)
    lattice = enumerate_concepts(core) if with_lattice_sizes else None
    p = 1
    while not core.is_empty:
        starts.append((p, core, lattice))
        nxt = compute_core(core, p + 1, 1)
        if lattice is not None:
            lattice = compute_core_lattice(core, nxt, lattice)
        core = nxt
        p += 1

    if workers > 1 and len(starts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_grid_row, starts))
    else:
        rows = [_grid_row(s) for s in starts]
    grid = CoreGrid()
    for row in rows:
        grid.cells.update(row)
    return grid


def core_counts(K: FormalContext) -> dict[str, int]:
    """Four ways of counting non-empty pq-cores.

    ``cells`` counts parameter pairs, ``distinct`` counts different core
    contexts, both over ``p, q >= 1``; the ``*_with_zero`` variants also
    admit ``p = 0`` or ``q = 0``.
    """
    out = {}
    for name, lo in (("", 1), ("_with_zero", 0)):
        cells, distinct = 0, set()
        for p in range(lo, K.n_attributes + 1):
            for q in range(lo, K.n_objects + 1):
                S = compute_core(K, p, q)
                if not S.is_empty:
                    cells += 1
                    distinct.add((S.objects, S.attributes))
        out["cells" + name] = cells
        out["distinct" + name] = len(distinct)
    return out


def connected_components(K: FormalContext) -> int:
    """Connected components of the bipartite incidence graph on ``G + M``.

    Objects without attributes and attributes without objects are components
    of their own.
    """
    n, m = K.shape
    if n + m == 0:
        return 0
    pairs = np.array(sorted(K.incidence), dtype=np.int64).reshape(-1, 2)
    graph = coo_matrix(
        (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1] + n)), shape=(n + m, n + m)
    )
    count, _ = _cc(graph, directed=False)
    return int(count)


@dataclass
class CoreOrder:
    """Distinct cores ordered by the induced sub-context relation.

    ``edges`` holds cover pairs ``(lower, upper)`` of node indices.
    """

    cores: list[FormalContext]
    labels: list[list[tuple[int, int]]]
    edges: set[tuple[int, int]]

    def leq(self, i: int, j: int) -> bool:
        a, b = self.cores[i], self.cores[j]
        return set(a.objects) <= set(b.objects) and set(a.attributes) <= set(b.attributes)

    def lattice_violations(self) -> list[tuple[int, int, str]]:
        """Pairs ``(i, j, kind)`` lacking a unique meet (kind ``"meet"``) or join."""
        n = len(self.cores)
        le = [[self.leq(i, j) for j in range(n)] for i in range(n)]
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                lower = [k for k in range(n) if le[k][i] and le[k][j]]
                greatest = [k for k in lower if all(le[x][k] for x in lower)]
                if len(greatest) != 1:
                    out.append((i, j, "meet"))
                upper = [k for k in range(n) if le[i][k] and le[j][k]]
                least = [k for k in upper if all(le[k][x] for x in upper)]
                if len(least) != 1:
                    out.append((i, j, "join"))
        return out

    def is_lattice(self) -> bool:
        return not self.lattice_violations()

    def to_dot(self) -> str:
        lines = ["digraph cores {", "  rankdir=BT;", "  node [shape=box];"]
        for i, (core, labels) in enumerate(zip(self.cores, self.labels)):
            pq = " ".join(f"{p},{q}" for p, q in labels)
            lines.append(f'  n{i} [label="{pq}\\n{core.n_objects}x{core.n_attributes}"];')
        for lo, hi in sorted(self.edges):
            lines.append(f"  n{lo} -> n{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def core_order_diagram(K: FormalContext, grid: CoreGrid | None = None) -> CoreOrder:
    grid = core_grid(K) if grid is None else grid
    index: dict[tuple, int] = {}
    cores: list[FormalContext] = []
    labels: list[list[tuple[int, int]]] = []
    for key in sorted(grid.cells):
        core = grid.cells[key].core
        ident = (core.objects, core.attributes)
        if ident not in index:
            index[ident] = len(cores)
            cores.append(core)
            labels.append([])
        labels[index[ident]].append(key)

    order = CoreOrder(cores, labels, set())
    n = len(cores)
    less = [[i != j and order.leq(i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if less[i][j] and not any(less[i][k] and less[k][j] for k in range(n)):
                order.edges.add((i, j))
    return order


def grid_to_csv(grid: CoreGrid) -> str:
    """Heat-map table: rows ascending ``p``, columns ascending ``q``.

    Cells hold the lattice size, or objects times attributes when sizes were
    not computed; empty cores give empty cells.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    ps = range(1, max(grid.p_values) + 1) if grid.cells else []
    qs = range(1, max(grid.q_values) + 1) if grid.cells else []
    writer.writerow(["p\\q", *qs])
    for p in ps:
        row = [p]
        for q in qs:
            cell = grid.cells.get((p, q))
            if cell is None:
                row.append("")
            elif cell.lattice_size is not None:
                row.append(cell.lattice_size)
            else:
                row.append(cell.object_count * cell.attribute_count)
        writer.writerow(row)
    return buf.getvalue()


def write_grid_csv(grid: CoreGrid, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(grid_to_csv(grid))
