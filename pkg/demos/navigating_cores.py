"""Move between cores by transforming concept sets instead of re-enumerating.

A concept set is carried from one core to another: concepts are removed by
intersecting with the smaller attribute and object sets, and the missing
ones are filled in by next_closure started just past the shared part.
"""

import time

import numpy as np

from fcacore import compute_core, enumerate_concepts, lattice_transformer
from fcacore.datasets import random_context

rng = np.random.default_rng(1)
K = random_context(60, 16, 0.35, rng)
path = [(2, 2), (4, 6), (3, 3), (5, 5), (2, 8), (1, 1)]

cores = {pq: compute_core(K, *pq) for pq in path}
current = path[0]
L = enumerate_concepts(cores[current])
print(f"start at {current}: {len(L)} concepts")

for nxt in path[1:]:
    t0 = time.perf_counter()
    L = lattice_transformer(K, cores[current], cores[nxt], L)
    moved = time.perf_counter() - t0
    t0 = time.perf_counter()
    direct = enumerate_concepts(cores[nxt])
    fresh = time.perf_counter() - t0
    assert L == direct
    S = cores[nxt]
    print(
        f"{current} -> {nxt}: core {S.n_objects}x{S.n_attributes}, {len(L)} concepts "
        f"(transform {moved * 1e3:.1f} ms, from scratch {fresh * 1e3:.1f} ms)"
    )
    current = nxt
