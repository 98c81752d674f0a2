"""Where does a random cluster graph stop being one big clique?

For each n we solve P(C = 1) = 1/2 for the edge probability and print it next
to the bracket [p_L, p_U] that the solver starts from.  Then, at n = 100, the
whole curve p -> P(C = 1) is tabulated.  It is lopsided: just below p* the
fragmented graphs win outright, while above it the big clique only has to
fend off splits that shed a vertex or two.
"""

import numpy as np

from clustergraph import EdgeBias, build_bell_table
from clustergraph.critical import critical_bounds, solve_critical
from clustergraph.exactdist import prob_single_clique

print(f"{'n':>5} {'p_L':>9} {'p*':>9} {'p_U':>9} {'iters':>5}")
for n in (50, 100, 200, 400, 800):
    res = solve_critical(n, 0.5)
    lo, hi = critical_bounds(n)
    print(f"{n:5d} {lo:9.5f} {res.p_star:9.5f} {hi:9.5f} {res.iterations:5d}")

n = 100
p_star = solve_critical(n).p_star
print(f"\nP(C = 1) around p* = {p_star:.5f} at n = {n}")
for p in np.linspace(p_star - 0.004, p_star + 0.008, 13):
    prob = prob_single_clique(build_bell_table(n, EdgeBias.from_p(p)), n)
    bar = "#" * int(round(40 * prob))
    print(f"  p={p:.4f}  {prob:8.5f}  {bar}")
