"""How small can a subgraph be while keeping a fraction of the average degree?

Run: python demos/01_crux.py
"""

from fractions import Fraction

from cruxkit import generators as gen
from cruxkit.crux import crux_exact, crux_lb_hypercube, crux_upper_heuristic, edge_isoperimetry_check

print("Complete graphs: the crux is the smallest clique that is dense enough.")
for n in (6, 10):
    for alpha in (Fraction(1, 2), Fraction(9, 10)):
        cert = crux_exact(gen.complete(n), alpha)
        print(f"  K_{n}, alpha={alpha}: c = {cert.upper_bound}, witness {cert.witness.sorted()}")

print("\nTwo cliques joined by nothing: the crux sits inside one of them.")
g = gen.disjoint_union(gen.complete(5), gen.complete(5))
print("  ", crux_exact(g, 0.5).to_dict())

print("\nHypercubes: subcubes are the densest small pieces.")
for m in (3, 4):
    cert = crux_exact(gen.hypercube(m), 0.5)
    print(f"  Q^{m}: exact c = {cert.upper_bound}, closed-form lower bound {crux_lb_hypercube(0.5 * m)}")
big = crux_upper_heuristic(gen.hypercube(10), 0.5, host=("hypercube",))
print(f"  Q^10: certified range [{big.lower_bound}, {big.upper_bound}] ({big.lower_method})")

print("\nEdge isoperimetry in Q^6: a subcube meets the bound exactly, a random set does not.")
print("  subcube of size 8:", edge_isoperimetry_check(6, range(8)))
print("  scattered set:    ", edge_isoperimetry_check(6, [0, 7, 19, 42, 63]))
