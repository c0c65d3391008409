"""The cores of a context, ordered by inclusion, need not form a lattice.

The context below is made of two blocks joined by a few shared attributes.
Raising p and raising q peel different blocks off, so two cores can have
two incomparable smallest common super-cores.
"""

from fcacore import connected_components, core_order_diagram
from fcacore.datasets import split_components

K = split_components()
print(f"{K.n_objects}x{K.n_attributes} context, {connected_components(K)} connected components")

order = core_order_diagram(K)
for i, (core, labels) in enumerate(zip(order.cores, order.labels)):
    print(f"  core {i}: {core.n_objects}x{core.n_attributes}  from {labels}")
print("cover edges (smaller, larger):", order.edges)

for i, j, kind in order.lattice_violations():
    print(f"  cores {i} and {j} have no unique {kind}")
print("\nis a lattice:", order.is_lattice())
print("\nDOT for graphviz:\n")
print(order.to_dot())
