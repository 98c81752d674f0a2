"""Exact samples versus the exact laws they are supposed to follow.

A few thousand draws at n = 60 and p = 0.1, summarised by clique count and
edge count, then compared with the exact means and with a histogram of C.
"""

import numpy as np

from clustergraph import EdgeBias, build_bell_table
from clustergraph.exactdist import clique_count_pmf, expected_cliques, expected_edges
from clustergraph.sampler import RngStream, sample_block_sizes, sample_cluster_graph, size_statistics

n, p, draws = 60, 0.1, 5000
table = build_bell_table(n, EdgeBias.from_p(p))

stats = size_statistics(sample_block_sizes(table, n, RngStream(7), draws))
c, m = stats[:, 0], stats[:, 1]
print(f"E[C]: exact {expected_cliques(table, n):.3f}, sample {c.mean():.3f} +- {c.std() / np.sqrt(draws):.3f}")
print(f"E[M]: exact {expected_edges(table, n):.3f}, sample {m.mean():.3f} +- {m.std() / np.sqrt(draws):.3f}")

pmf = clique_count_pmf(table, n)
counts = np.bincount(c, minlength=n + 1)
print("\n  c   exact   sample")
for k in range(int(c.min()), int(c.max()) + 1):
    print(f"{k:3d}  {pmf.prob(k):.4f}  {counts[k] / draws:.4f}")

# one labelled draw, to see what the objects look like
part = sample_cluster_graph(table, 12, RngStream(7, 1))
print("\na labelled draw on 12 vertices:", sorted(sorted(b) for b in part.blocks))
