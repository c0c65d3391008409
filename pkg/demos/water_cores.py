"""Walk through the pq-cores of the small water-organisms context.

Run with ``python3 demos/water_cores.py``.
"""

from fcacore import compute_core, core_counts, core_grid, enumerate_concepts, interesting_cores
from fcacore.context import format_cxt
from fcacore.datasets import water
from fcacore.pqcore import grid_to_csv


def show(K):
    width = max(len(g) for g in K.objects)
    for g, row in zip(K.objects, K.rows):
        cells = "".join("X" if row >> m & 1 else "." for m in range(K.n_attributes))
        print(f"  {g:<{width}}  {cells}")


K = water()
print(f"{K.n_objects} objects, {K.n_attributes} attributes, {len(enumerate_concepts(K))} concepts")
show(K)

# Require 4 attributes per object and 3 objects per attribute.  Bean and Leech
# fall out first, which starves "suckles its offspring" and "two seed leaves".
S = compute_core(K, 4, 3)
print("\n(4,3)-core:", ", ".join(S.objects))
show(S)
print(f"its lattice has {len(enumerate_concepts(S))} concepts")

grid = core_grid(K, with_lattice_sizes=True)
print("\nlattice sizes over the core grid (rows p, columns q):")
print(grid_to_csv(grid))
print("core counts:", core_counts(K))

print("most interesting readable cores:")
for e in interesting_cores(grid, 30).entries[:6]:
    print(f"  ({e.p},{e.q})  drop={e.score:2d}  size={e.lattice_size}")

print("\nthe core, ready to save as .cxt:\n")
print(format_cxt(S))
