"""Seeded Monte Carlo experiments, as run by `cruxkit experiment`.

Run: python demos/06_experiments.py
"""

from cruxkit.percolation import c4free_cycle_experiment, hypercube_cycle_experiment

tab = c4free_cycle_experiment([5, 7, 11], [5.0], 4, seed=0)
print("Cycle length grows roughly like k^2 in random subgraphs of C4-free hosts:")
s = tab.summary[5.0]
for k, L in zip(s["k"], s["mean_cycle"]):
    print(f"  k = {k:2d}: mean longest cycle found {L:.1f}")
print(f"  log-log slope {s['slope']:.2f}")

tab = hypercube_cycle_experiment([9], 0.5, 4, seed=0)
print("\nQ^9 at p = 1.5/m, CSV body without timing:")
print("\n".join(tab.csv_lines(timing=False)))
