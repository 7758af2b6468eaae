"""Sublinear expanders: verify, extract, and connect inside them.

Run: python demos/02_expanders.py
"""

from cruxkit import generators as gen
from cruxkit.graph import average_degree
from cruxkit.expander import ExpanderParams, connect_avoiding, extract_expander, rho, verify_expander

eps, t = 0.02, 4
print("The expansion rate rho(x) decays like 1/log^2 x and vanishes below t/5:")
for x in (0.5, 2, 10, 100, 1000):
    print(f"  rho({x}) = {rho(x, eps, t):.5f}")

params = ExpanderParams(eps, t)
print("\nQ^4 is an expander at these parameters; two disjoint K_8 are not.")
print("  Q^4:", verify_expander(gen.hypercube(4), params, mode="exhaustive").verified)
rep = verify_expander(gen.disjoint_union(gen.complete(8), gen.complete(8)), params, mode="sampled", seed=1)
print("  2 K_8:", rep.verified, "witness", rep.witness.sorted())

print("\nExtraction keeps most of the average degree, with minimum degree at least d(H)/2.")
g = gen.complete_bipartite(60, 4)
rep = extract_expander(g, 1 / 400, 2, seed=1)
H, _ = g.induced(rep.subgraph)
print(f"  K_60,4: d(G) = {float(average_degree(g)):.2f}")
print(f"  H: {H.n} vertices, d(H) = {float(average_degree(H)):.2f}, min degree {H.min_degree}, verified {rep.verified}")

print("\nA short path between two sets that avoids a forbidden set W:")
res = connect_avoiding(gen.hypercube(4), [0], [15], w=[1, 2, 4])
print("  path", res.path, "length", res.length)
