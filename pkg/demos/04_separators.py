"""Balanced separators and recursive (s,t)-separability.

Run: python demos/04_separators.py
"""

from cruxkit import generators as gen
from cruxkit.separators import find_balanced_separator, separability_corollary_params, separability_decompose

print("One vertex splits a path or a star; a clique has no small separator.")
print("  P_7 :", find_balanced_separator(gen.path(7), 1).S)
print("  star:", find_balanced_separator(gen.star(8), 1).S)
print("  K_5 :", find_balanced_separator(gen.complete(5), 2))

print("\nRecursive halving of P_15 with s=3, t=4:")
v = separability_decompose(gen.path(15), 3, 4)
print("  separable", v.separable, "aggregate", v.decomposition.aggregate.sorted())

print("\nQ^3 cannot be cut with a budget of 1 per 8 vertices; the stuck piece is the evidence:")
v = separability_decompose(gen.hypercube(3), 8, 2)
print("  separable", v.separable, "evidence", v.evidence.sorted())

p = separability_corollary_params(4096, 4)
print(f"\nCorollary parameters for n=4096, psi=4: s={p.s}, t={p.t}")
