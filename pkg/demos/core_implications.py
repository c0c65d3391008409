"""What an implication found in a core says about the full context."""

from fcacore import canonical_base, compute_core, core_implication_bounds
from fcacore.datasets import water
from fcacore.implications import format_implication

K = water()
p, q = 4, 3
S = compute_core(K, p, q)
base = canonical_base(S)
print(f"canonical base of the ({p},{q})-core has {len(base)} implications\n")

for imp in base:
    r = core_implication_bounds(K, S, p, imp, q=q)
    print(format_implication(S, imp))
    print(
        f"   supp in K = {r.support}  within [{r.lower_support}, {r.upper_support}]"
        f"   conf in K = {r.confidence} >= {r.lower_confidence}"
    )
    if r.confidence_one:
        print(f"   premise has >= {p} attributes, so it holds in K as well")
    if r.exact_support:
        print(f"   |premise + conclusion| >= {p}, support carries over exactly")
    assert r.consistent
