"""Random subgraphs explored by a DFS that only reveals the edges it needs.

Run: python demos/05_percolation.py
"""

from cruxkit import generators as gen
from cruxkit.generators import PercolationConfig
from cruxkit.percolation import classify_vertices, dfs_with_unrevealed, giant_component

host = gen.projective_incidence(7)
cfg = PercolationConfig(5 / 8, seed=3)
r = dfs_with_unrevealed(host, cfg)
print(f"PG(2,7) incidence graph: {host.n} vertices, k = {r.k}")
print(f"  unrevealed edges: {len(r.q_edges())}, all ancestor-descendant: {not r.ancestor_violations()}")
print("  revealing them reproduces the plain sample:", r.revealed_graph() == gen.sample_subgraph(host, cfg))

rep = classify_vertices(r, 0.1)
print(f"  full {rep.full_fraction:.2f}, poor {rep.poor_fraction:.2f}")

print("\nGiant component of Q^12 below and above p = 1/m:")
for p in (0.5 / 12, 1.5 / 12):
    c = giant_component(gen.sample_subgraph(gen.hypercube(12), PercolationConfig(p, 1)))
    print(f"  p = {p:.3f}: largest component {c.largest} ({c.fraction:.2f} of vertices)")
