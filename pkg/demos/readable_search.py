"""Finding a readable core of a context with many concepts.

Concept counts shrink as p or q grows, so a binary search on one side finds
the largest side-core whose lattice stays below a threshold.  An iceberg
lattice filters by support instead.
"""

from fractions import Fraction

import numpy as np

from fcacore import binary_search_readable, compute_core, enumerate_concepts, iceberg_concepts
from fcacore.datasets import random_context

K = random_context(200, 14, 0.3, np.random.default_rng(5))
print(f"{K.n_objects}x{K.n_attributes} context with {len(enumerate_concepts(K))} concepts")

for side in ("attribute", "object"):
    params = binary_search_readable(K, side, 60)
    if params is None:
        print(f"{side} side: no core within 60 concepts")
        continue
    S = compute_core(K, *params)
    print(
        f"{side} side: {tuple(params)}-core is {S.n_objects}x{S.n_attributes} "
        f"with {len(enumerate_concepts(S))} concepts"
    )

for minsupp in (Fraction(1, 10), Fraction(1, 5), Fraction(1, 3)):
    print(f"iceberg at minsupp {minsupp}: {len(iceberg_concepts(K, minsupp))} concepts")
