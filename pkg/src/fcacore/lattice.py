"""Concept enumeration, cover relation and concept-set transformations.

Concepts are ``(extent, intent)`` pairs of bitmasks relative to the context
they belong to.  The transformations relate concept sets of different induced
sub-contexts of some common context; objects and attributes are matched by
name.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from . import _bits
from .context import (
    ContextError,
    FormalContext,
    dual,
    induced_by_names,
    is_induced_subcontext,
)

__all__ = [
    "Concept",
    "ConceptLattice",
    "next_closure",
    "lectic_key",
    "enumerate_concepts",
    "cover_relation",
    "meet_irreducibles",
    "join_irreducibles",
    "object_core_intents",
    "remove_attributes_transform",
    "remove_objects_transform",
    "insert_attributes_transform",
    "insert_objects_transform",
    "compute_core_lattice",
    "lattice_transformer",
    "dual_lattice",
    "to_dot",
]


class Concept(NamedTuple):
    extent: int
    intent: int


def lectic_key(mask: int, n: int) -> int:
    """Sort key realising the lectic order on subsets of ``range(n)``.

    Index 0 is the most significant position: ``A < B`` iff the smallest
    element in which they differ belongs to ``B``.
    """
    if n == 0:
        return 0
    return int(format(mask, f"0{n}b")[::-1], 2)


class ConceptLattice:
    """Concepts of ``context`` in lectic order of intents, with optional covers.

    ``cover`` holds pairs ``(lower, upper)`` of positions in ``concepts``.
    Two lattices compare equal when they contain the same concepts by name,
    regardless of order or of the context object they are attached to.
    """

    __hash__ = None

    def __init__(
        self,
        context: FormalContext,
        concepts: Iterable[Concept],
        cover: Iterable[tuple[int, int]] | None = None,
        *,
        presorted: bool = False,
    ):
        concepts = [Concept(*c) for c in concepts]
        if not presorted:
            n = context.n_attributes
            concepts.sort(key=lambda c: lectic_key(c.intent, n))
        self.context = context
        self.concepts: tuple[Concept, ...] = tuple(concepts)
        self.cover: frozenset[tuple[int, int]] | None = None if cover is None else frozenset(cover)

    def __len__(self):
        return len(self.concepts)

    def __iter__(self) -> Iterator[Concept]:
        return iter(self.concepts)

    def __getitem__(self, i: int) -> Concept:
        return self.concepts[i]

    def intents(self) -> set[int]:
        return {c.intent for c in self.concepts}

    def extents(self) -> set[int]:
        return {c.extent for c in self.concepts}

    def named(self) -> frozenset[tuple[frozenset[str], frozenset[str]]]:
        K = self.context
        return frozenset((K.object_names(c.extent), K.attribute_names(c.intent)) for c in self.concepts)

    def __eq__(self, other):
        if not isinstance(other, ConceptLattice):
            return NotImplemented
        return self.named() == other.named()

    def __repr__(self):
        return f"ConceptLattice({len(self.concepts)} concepts of {self.context!r})"

    def index_of_intent(self) -> dict[int, int]:
        return {c.intent: i for i, c in enumerate(self.concepts)}

    def index_of_extent(self) -> dict[int, int]:
        return {c.extent: i for i, c in enumerate(self.concepts)}

    def upper_covers(self) -> list[list[int]]:
        up: list[list[int]] = [[] for _ in self.concepts]
        for lo, hi in self._require_cover():
            up[lo].append(hi)
        return up

    def lower_covers(self) -> list[list[int]]:
        down: list[list[int]] = [[] for _ in self.concepts]
        for lo, hi in self._require_cover():
            down[hi].append(lo)
        return down

    def _require_cover(self) -> frozenset[tuple[int, int]]:
        if self.cover is None:
            raise ValueError("cover relation not computed; call cover_relation() first")
        return self.cover


def next_closure(
    closure: Callable[[int], int],
    n: int,
    order: Sequence[int] | None = None,
    start: int | None = None,
) -> Iterator[int]:
    """Enumerate the closed sets of ``closure`` over ``n`` elements lectically.

    ``order`` lists the element indices from smallest to largest (default
    ``0..n-1``).  Without ``start`` enumeration begins at the closure of the
    empty set; with ``start`` it yields only the closed sets lectically after
    ``start``, which need not itself be closed.
    """
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of range(n)")
    pos = [1 << a for a in order]
    prefix = [0] * n
    acc = 0
    for i in range(n):
        prefix[i] = acc
        acc |= pos[i]
    top = acc

    if start is None:
        current = closure(0)
        yield current
    else:
        current = start
    while current != top:
        A = current
        for i in range(n - 1, -1, -1):
            bit = pos[i]
            if A & bit:
                A &= ~bit
                continue
            B = closure(A | bit)
            if not (B & ~A) & prefix[i]:
                current = B
                break
        else:
            return
        yield current


def enumerate_concepts(K: FormalContext) -> ConceptLattice:
    """All formal concepts of ``K`` in lectic order of intents (next_closure)."""
    concepts = [Concept(K.down(B), B) for B in next_closure(K.attribute_closure, K.n_attributes)]
    return ConceptLattice(K, concepts, presorted=True)


def cover_relation(L: ConceptLattice) -> ConceptLattice:
    """Attach the cover relation, computed by upper-neighbour search per concept."""
    K = L.context
    by_extent = L.index_of_extent()
    all_objects = K.all_objects
    cover = set()
    for i, (A, _) in enumerate(L.concepts):
        candidates = all_objects & ~A
        minimal = candidates
        for g in _bits.iter_bits(candidates):
            bit = 1 << g
            B1 = K.up(A | bit)
            A1 = K.down(B1)
            if minimal & (A1 & ~A & ~bit):
                minimal &= ~bit
            else:
                cover.add((i, by_extent[A1]))
    return ConceptLattice(K, L.concepts, cover, presorted=True)


def meet_irreducibles(L: ConceptLattice) -> list[Concept]:
    """Concepts with exactly one upper cover."""
    return [L.concepts[i] for i, ups in enumerate(L.upper_covers()) if len(ups) == 1]


def join_irreducibles(L: ConceptLattice) -> list[Concept]:
    """Concepts with exactly one lower cover."""
    return [L.concepts[i] for i, downs in enumerate(L.lower_covers()) if len(downs) == 1]


def object_core_intents(K: FormalContext, p: int, lattice: ConceptLattice | None = None) -> set[int]:
    """Intersections of all families of intents of ``K`` with at least ``p`` attributes.

    These are exactly the intents of the (p, 0)-core, expressed over the full
    attribute set of ``K``.  The empty family contributes ``M``.
    """
    intents = (lattice or enumerate_concepts(K)).intents()
    large = [B for B in intents if B.bit_count() >= p]
    closed = {K.all_attributes}
    for B in large:
        closed |= {B & X for X in closed}
    return closed


# transformations
#
# Internally a concept set travels between phases as a dict ``key -> value``:
# intent -> extent on the attribute side, extent -> intent on the object side.
# Only the final result is sorted into a ConceptLattice.


def _check_same_objects(sub: FormalContext, sup: FormalContext) -> None:
    if sub.objects != sup.objects:
        raise ContextError("contexts must share the same object set (in the same order)")
    if not set(sub.attributes) <= set(sup.attributes):
        raise ContextError("attribute set of the smaller context is not contained in the larger one")
    if not is_induced_subcontext(sub, sup):
        raise ContextError("not an induced sub-context")


def _index_map(src: Sequence[str], dst: Sequence[str]) -> dict[int, int]:
    index = {name: j for j, name in enumerate(dst)}
    return {i: index[name] for i, name in enumerate(src) if name in index}


def _attr_map(src: FormalContext, dst: FormalContext) -> dict[int, int]:
    return _index_map(src.attributes, dst.attributes)


def _remove(pairs: Iterable[tuple[int, int]], cut: Callable[[int], int]) -> dict[int, int]:
    """Map keys through ``cut`` and union the values landing on the same key."""
    merged: dict[int, int] = {}
    for key, value in pairs:
        k = cut(key)
        merged[k] = merged.get(k, 0) | value
    return merged


def _insert(
    carried: dict[int, int],
    n: int,
    old_mask: int,
    closure: Callable[[int], int],
    derive: Callable[[int], int],
) -> dict[int, int]:
    """Add the closed sets meeting the new elements (those outside ``old_mask``).

    next_closure runs under an order with the new elements first, starting
    right after ``old_mask``.  A carried set that is the old part of a new
    closed set and is not closed itself any more is dropped.
    """
    new_first = [a for a in range(n) if not old_mask >> a & 1]
    if not new_first:
        return carried
    order = new_first + [a for a in range(n) if old_mask >> a & 1]
    fresh = {}
    for I in next_closure(closure, n, order=order, start=old_mask):
        fresh[I] = derive(I)
        D = I & old_mask
        if D in carried and closure(D) != D:
            del carried[D]
    carried.update(fresh)
    return carried


def _attribute_pairs(L: ConceptLattice) -> Iterator[tuple[int, int]]:
    return ((c.intent, c.extent) for c in L.concepts)


def _object_pairs(L: ConceptLattice) -> Iterator[tuple[int, int]]:
    return ((c.extent, c.intent) for c in L.concepts)


def _from_intents(K: FormalContext, by_intent: dict[int, int]) -> ConceptLattice:
    return ConceptLattice(K, (Concept(A, B) for B, A in by_intent.items()))


def _from_extents(K: FormalContext, by_extent: dict[int, int]) -> ConceptLattice:
    return ConceptLattice(K, (Concept(A, B) for A, B in by_extent.items()))


def dual_lattice(L: ConceptLattice) -> ConceptLattice:
    """Concepts of the dual context (extent and intent swapped)."""
    return ConceptLattice(dual(L.context), (Concept(c.intent, c.extent) for c in L.concepts))


def remove_attributes_transform(
    T: FormalContext, S: FormalContext, concepts_of_T: ConceptLattice
) -> ConceptLattice:
    """Concepts of ``S = (U, N)`` from those of ``T = (U, V)``, ``N`` a subset of ``V``.

    Intents are cut down to ``N``; the extent of a resulting intent is the
    union of the extents of all concepts of ``T`` mapped onto it.  One pass
    over ``concepts_of_T``.
    """
    _check_same_objects(S, T)
    cut = _bits.remapper(_attr_map(T, S))
    return _from_intents(S, _remove(_attribute_pairs(concepts_of_T), cut))


def remove_objects_transform(
    T: FormalContext, S: FormalContext, concepts_of_T: ConceptLattice
) -> ConceptLattice:
    """Dual of :func:`remove_attributes_transform`: ``S = (H, V)`` with ``H`` a subset of ``U``."""
    _check_same_objects(dual(S), dual(T))
    cut = _bits.remapper(_index_map(T.objects, S.objects))
    return _from_extents(S, _remove(_object_pairs(concepts_of_T), cut))


def insert_attributes_transform(
    S: FormalContext, T: FormalContext, concepts_of_S: ConceptLattice
) -> ConceptLattice:
    """Concepts of ``T = (U, V)`` from those of ``S = (U, N)``, ``N`` a subset of ``V``.

    The new intents all meet ``V \\ N``.  They are enumerated by next_closure
    on ``T`` under an order that puts ``V \\ N`` before ``N``, starting right
    after ``N``.  A carried concept with intent ``D`` is dropped when some new
    intent ``I`` has ``I & N == D`` and ``D`` is not closed in ``T``.
    """
    _check_same_objects(S, T)
    amap = _attr_map(S, T)
    grow = _bits.remapper(amap)
    carried = {grow(B): A for B, A in _attribute_pairs(concepts_of_S)}
    old = _bits.from_indices(amap.values())
    out = _insert(carried, T.n_attributes, old, T.attribute_closure, T.down)
    return _from_intents(T, out)


def insert_objects_transform(
    S: FormalContext, T: FormalContext, concepts_of_S: ConceptLattice
) -> ConceptLattice:
    """Dual of :func:`insert_attributes_transform`: adds objects, same attributes."""
    _check_same_objects(dual(S), dual(T))
    omap = _index_map(S.objects, T.objects)
    grow = _bits.remapper(omap)
    carried = {grow(A): B for A, B in _object_pairs(concepts_of_S)}
    old = _bits.from_indices(omap.values())
    out = _insert(carried, T.n_objects, old, T.object_closure, T.up)
    return _from_extents(T, out)


def compute_core_lattice(
    T: FormalContext, S: FormalContext, concepts_of_T: ConceptLattice
) -> ConceptLattice:
    """Concepts of an induced sub-context ``S`` of ``T`` from the concepts of ``T``.

    Attributes are removed first, then objects (the dual step); linear in the
    number of concepts of ``T``.
    """
    if not is_induced_subcontext(S, T):
        raise ContextError("S is not an induced sub-context of T")
    by_intent = _remove(_attribute_pairs(concepts_of_T), _bits.remapper(_attr_map(T, S)))
    cut = _bits.remapper(_index_map(T.objects, S.objects))
    return _from_extents(S, _remove(((A, B) for B, A in by_intent.items()), cut))


def lattice_transformer(
    K: FormalContext, S: FormalContext, T: FormalContext, concepts_of_S: ConceptLattice
) -> ConceptLattice:
    """Concepts of ``T`` from those of ``S``, both induced sub-contexts of ``K``.

    Four phases: drop attributes of ``S`` missing from ``T``, add attributes
    of ``T`` missing from ``S``, then the same for objects.  Phases with
    nothing to do are skipped.
    """
    if not is_induced_subcontext(S, K) or not is_induced_subcontext(T, K):
        raise ContextError("S and T must be induced sub-contexts of K")
    H, N = set(S.objects), set(S.attributes)
    U = set(T.objects)
    objs_H = [g for g in K.objects if g in H]
    # a2 = (H, V): the objects of S with the attributes of T
    a2 = induced_by_names(K, objs_H, T.attributes)

    by_intent = dict(_attribute_pairs(concepts_of_S))
    kept = _attr_map(S, a2)
    if len(kept) < S.n_attributes:
        by_intent = _remove(by_intent.items(), _bits.remapper(kept))
    else:
        grow = _bits.remapper(kept)
        by_intent = {grow(B): A for B, A in by_intent.items()}
    if len(kept) < a2.n_attributes:
        old = _bits.from_indices(kept.values())
        by_intent = _insert(by_intent, a2.n_attributes, old, a2.attribute_closure, a2.down)

    # b1 = (H & U, V), then on to T = (U, V)
    b1_objects = [g for g in objs_H if g in U]
    by_extent = {A: B for B, A in by_intent.items()}
    if len(b1_objects) < a2.n_objects:
        cut = _bits.remapper(_index_map(a2.objects, b1_objects))
        by_extent = _remove(by_extent.items(), cut)
    omap = _index_map(b1_objects, T.objects)
    grow = _bits.remapper(omap)
    by_extent = {grow(A): B for A, B in by_extent.items()}
    if len(b1_objects) < T.n_objects:
        old = _bits.from_indices(omap.values())
        by_extent = _insert(by_extent, T.n_objects, old, T.object_closure, T.up)
    return _from_extents(T, by_extent)


# DOT export


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(L: ConceptLattice, object_counts: bool = False, name: str = "lattice") -> str:
    """Hasse diagram in DOT with reduced labelling.

    Each attribute labels its attribute concept and each object its object
    concept.  With ``object_counts`` a node shows how many objects it
    introduces instead of their names.
    """
    if L.cover is None:
        L = cover_relation(L)
    K = L.context
    by_intent = L.index_of_intent()
    by_extent = L.index_of_extent()
    attr_labels: list[list[str]] = [[] for _ in L.concepts]
    obj_labels: list[list[str]] = [[] for _ in L.concepts]
    for a, name_a in enumerate(K.attributes):
        attr_labels[by_intent[K.attribute_closure(1 << a)]].append(name_a)
    for g, name_g in enumerate(K.objects):
        obj_labels[by_extent[K.object_closure(1 << g)]].append(name_g)

    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [shape=box, fontsize=10];']
    for i in range(len(L.concepts)):
        parts = []
        if attr_labels[i]:
            parts.append(", ".join(attr_labels[i]))
        if obj_labels[i]:
            parts.append(str(len(obj_labels[i])) if object_counts else ", ".join(obj_labels[i]))
        label = "\\n".join(_dot_escape(p) for p in parts)
        lines.append(f'  c{i} [label="{label}"];')
    for lo, hi in sorted(L.cover):
        lines.append(f"  c{lo} -> c{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
