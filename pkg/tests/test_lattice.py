import numpy as np
import pytest

import oracles
from fcacore import _bits
from fcacore.context import ContextError, FormalContext, induced_by_masks, induced_by_names
from fcacore.datasets import random_context, water
from fcacore.lattice import (
    ConceptLattice,
    compute_core_lattice,
    cover_relation,
    enumerate_concepts,
    insert_attributes_transform,
    join_irreducibles,
    lattice_transformer,
    lectic_key,
    meet_irreducibles,
    next_closure,
    object_core_intents,
    remove_attributes_transform,
    to_dot,
)
from fcacore.pqcore import compute_core


def random_sub(K, rng, keep=0.7):
    omask = _bits.from_indices(np.flatnonzero(rng.random(K.n_objects) < keep).tolist())
    amask = _bits.from_indices(np.flatnonzero(rng.random(K.n_attributes) < keep).tolist())
    return induced_by_masks(K, omask, amask)


def brute_cover(L):
    """Cover pairs from pairwise extent containment."""
    ext = [c.extent for c in L]
    n = len(ext)
    lt = lambda a, b: ext[a] != ext[b] and ext[a] & ~ext[b] == 0
    return {
        (i, j)
        for i in range(n)
        for j in range(n)
        if lt(i, j) and not any(lt(i, k) and lt(k, j) for k in range(n))
    }


def test_water_counts(W):
    assert len(enumerate_concepts(W)) == 19
    assert len(enumerate_concepts(compute_core(W, 4, 3))) == 13


def test_single_cross_and_empty():
    L = enumerate_concepts(FormalContext(["g"], ["m"], [(0, 0)]))
    assert list(L) == [(1, 1)]
    L0 = enumerate_concepts(FormalContext([], []))
    assert list(L0) == [(0, 0)]


def test_enumeration_matches_power_set():
    rng = np.random.default_rng(0)
    for _ in range(25):
        K = random_context(8, 8, float(rng.uniform(0.2, 0.7)), rng)
        L = enumerate_concepts(K)
        assert L.named() == oracles.named_concepts(K)
        assert len(L) == len(oracles.all_intents(K))


def test_lectic_order(W):
    L = enumerate_concepts(W)
    keys = [lectic_key(c.intent, W.n_attributes) for c in L]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    # ``A < B`` iff the smallest differing element belongs to B
    for a, b in zip(L.concepts, L.concepts[1:]):
        diff = a.intent ^ b.intent
        low = diff & -diff
        assert b.intent & low


def test_next_closure_order_overlay():
    K = random_context(6, 6, 0.5, rng=4)
    order = [3, 5, 0, 1, 4, 2]
    closed = list(next_closure(K.attribute_closure, 6, order=order))
    assert set(closed) == enumerate_concepts(K).intents()
    assert len(closed) == len(set(closed))
    with pytest.raises(ValueError):
        list(next_closure(K.attribute_closure, 6, order=[0, 0, 1, 2, 3, 4]))


def test_cover_chain():
    K = FormalContext(["g1", "g2"], ["m1", "m2"], [(0, 0), (1, 0), (1, 1)])
    L = cover_relation(enumerate_concepts(K))
    assert len(L) == 2 and len(L.cover) == 1


def test_cover_matches_containment(W):
    L = cover_relation(enumerate_concepts(W))
    assert set(L.cover) == brute_cover(L)
    core = cover_relation(enumerate_concepts(compute_core(W, 4, 3)))
    assert len(core) == 13
    assert set(core.cover) == brute_cover(core)
    for lo, hi in core.cover:
        assert core[lo].extent & ~core[hi].extent == 0 and core[lo].extent != core[hi].extent


def test_cover_random():
    rng = np.random.default_rng(12)
    for _ in range(20):
        K = random_context(int(rng.integers(1, 9)), int(rng.integers(1, 9)), 0.5, rng)
        L = cover_relation(enumerate_concepts(K))
        assert set(L.cover) == brute_cover(L)


def test_meet_irreducible_chain():
    K = FormalContext(["g1", "g2", "g3"], ["m1", "m2"], [(1, 0), (2, 0), (2, 1)])
    L = cover_relation(enumerate_concepts(K))
    assert len(L) == 3
    bottom = min(L, key=lambda c: c.extent.bit_count())
    middle = [c for c in L if c.extent.bit_count() == 2]
    assert set(meet_irreducibles(L)) == {bottom, *middle}


def test_meet_irreducible_boolean():
    K = FormalContext(["g1", "g2"], ["m1", "m2"], [(0, 1), (1, 0)])
    L = cover_relation(enumerate_concepts(K))
    assert len(L) == 4
    coatoms = {c for c in L if c.extent.bit_count() == 1}
    assert set(meet_irreducibles(L)) == coatoms
    assert set(join_irreducibles(L)) == coatoms


def test_meet_irreducible_water(W):
    L = cover_relation(enumerate_concepts(W))
    meets = {c.intent for c in meet_irreducibles(L)}
    for name in ("suckles its offspring", "two seed leaves"):
        a = W.attribute_index(name)
        assert W.attribute_closure(1 << a) in meets
    covers = brute_cover(L)
    expected = {L[i].intent for i in range(len(L)) if sum(1 for lo, _ in covers if lo == i) == 1}
    assert meets == expected


def test_irreducibles_need_cover(W):
    with pytest.raises(ValueError):
        meet_irreducibles(enumerate_concepts(W))


def test_object_core_intents_examples(W):
    assert object_core_intents(W, 0) == enumerate_concepts(W).intents()
    direct = enumerate_concepts(compute_core(W, 4, 0)).intents()
    assert object_core_intents(W, 4) == direct
    assert object_core_intents(W, 10) == {W.all_attributes}
    assert enumerate_concepts(compute_core(W, 10, 0)).intents() == {W.all_attributes}


def test_remove_attributes_examples(W):
    L = enumerate_concepts(W)
    assert remove_attributes_transform(W, W, L) == L
    none = induced_by_names(W, W.objects, [])
    out = remove_attributes_transform(W, none, L)
    assert list(out) == [(W.all_objects, 0)]
    sub = induced_by_names(W, W.objects, W.attributes[:7])
    assert remove_attributes_transform(W, sub, L) == enumerate_concepts(sub)
    with pytest.raises(ContextError):
        remove_attributes_transform(W, compute_core(W, 4, 3), L)


def test_compute_core_lattice_water(W):
    L = enumerate_concepts(W)
    assert compute_core_lattice(W, W, L) == L
    S = compute_core(W, 4, 3)
    out = compute_core_lattice(W, S, L)
    assert len(out) == 13
    assert out == enumerate_concepts(S)
    assert out.context is S


def test_compute_core_lattice_random():
    rng = np.random.default_rng(21)
    for _ in range(40):
        T = random_context(int(rng.integers(1, 9)), int(rng.integers(1, 9)), 0.5, rng)
        S = random_sub(T, rng)
        assert compute_core_lattice(T, S, enumerate_concepts(T)) == enumerate_concepts(S)


def test_insert_attributes_examples(W):
    L = enumerate_concepts(W)
    assert insert_attributes_transform(W, W, L) == L
    S = induced_by_names(W, W.objects, W.attributes[:7])
    out = insert_attributes_transform(S, W, enumerate_concepts(S))
    assert len(out) == 19 and out == L


def test_insert_attributes_random():
    rng = np.random.default_rng(5)
    for _ in range(40):
        T = random_context(int(rng.integers(1, 9)), int(rng.integers(1, 9)), 0.5, rng)
        amask = _bits.from_indices(np.flatnonzero(rng.random(T.n_attributes) < 0.6).tolist())
        S = induced_by_masks(T, T.all_objects, amask)
        assert insert_attributes_transform(S, T, enumerate_concepts(S)) == enumerate_concepts(T)


def test_lattice_transformer_water(W):
    S = compute_core(W, 4, 3)
    T = compute_core(W, 2, 4)
    LS = enumerate_concepts(S)
    assert lattice_transformer(W, S, S, LS) == LS
    assert lattice_transformer(W, S, T, LS) == enumerate_concepts(T)
    a, b = compute_core(W, 2, 2), compute_core(W, 3, 3)
    La = enumerate_concepts(a)
    back = lattice_transformer(W, b, a, lattice_transformer(W, a, b, La))
    assert back == La


def test_lattice_transformer_random():
    rng = np.random.default_rng(99)
    for _ in range(40):
        K = random_context(int(rng.integers(1, 9)), int(rng.integers(1, 9)), 0.5, rng)
        S, T = random_sub(K, rng), random_sub(K, rng)
        assert lattice_transformer(K, S, T, enumerate_concepts(S)) == enumerate_concepts(T)


def test_lattice_equality_by_names(W):
    L = enumerate_concepts(W)
    shuffled = ConceptLattice(W, list(L)[::-1], presorted=True)
    assert shuffled == L
    assert L != enumerate_concepts(compute_core(W, 4, 3))


def test_order_embedding():
    rng = np.random.default_rng(17)
    for _ in range(30):
        K = random_context(int(rng.integers(1, 10)), int(rng.integers(1, 10)), 0.5, rng)
        for S in (random_sub(K, rng), compute_core(K, 2, 2)):
            to_K = {i: K.attribute_index(n) for i, n in enumerate(S.attributes)}
            LS = enumerate_concepts(S)
            images = []
            for A, B in LS:
                BK = _bits.remap(B, to_K)
                images.append(K.down(BK))
            assert len(set(images)) == len(LS)
            for x in LS:
                for y in LS:
                    if x.extent & ~y.extent == 0:
                        ix = images[LS.concepts.index(x)]
                        iy = images[LS.concepts.index(y)]
                        assert ix & ~iy == 0


def test_deleting_attributes_property():
    rng = np.random.default_rng(3)
    for _ in range(30):
        K = random_context(8, 8, 0.5, rng)
        amask = _bits.from_indices(np.flatnonzero(rng.random(8) < 0.5).tolist())
        S = induced_by_masks(K, K.all_objects, amask)
        to_S = {K.attribute_index(n): i for i, n in enumerate(S.attributes)}
        int_S = enumerate_concepts(S).intents()
        for D in enumerate_concepts(K).intents():
            assert _bits.remap(D, to_S) in int_S


def test_dot_export(W):
    dot = to_dot(enumerate_concepts(W))
    assert dot.startswith("digraph lattice {")
    assert dot.count("->") == len(cover_relation(enumerate_concepts(W)).cover)
    for name in W.attributes + W.objects:
        assert name in dot
    counts = to_dot(enumerate_concepts(W), object_counts=True)
    assert "Bream" not in counts and "needs water" in counts
    assert to_dot(enumerate_concepts(W)) == dot


def test_dot_escaping():
    K = FormalContext(['say "hi"'], ["a\\b"], [(0, 0)])
    dot = to_dot(enumerate_concepts(K))
    assert 'say \\"hi\\"' in dot and "a\\\\b" in dot
