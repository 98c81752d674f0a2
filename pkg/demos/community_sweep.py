"""Louvain on a planted partition, with the resolution set by a cluster-graph prior.

Five communities of 100 vertices.  For each prior edge probability p we run
Louvain a few times and report how many within-cluster edges it finds and how
well its partition agrees with the planted one.  A small version of the full
sweep (use `clustergraph figure --fig 4` for that); takes about half a minute.
"""

from clustergraph.community import SweepConfig, figure4_sweep, gamma_resolution

config = SweepConfig(
    p_grid=(0.498, 0.5, 0.502, 0.504, 0.506, 0.51),
    replicas=4,
    community_sizes=(100,) * 5,
    p_in=10 / 99,
    p_out=1 / 40,
    seed=3,
)
print(f"{'p':>6} {'gamma':>7} {'edges':>8} {'corr':>6}")
for row in figure4_sweep(config):
    gamma = gamma_resolution(config.p_in, config.p_out, row.p)
    print(f"{row.p:6.3f} {gamma:7.4f} {row.mean_detected_edges:8.1f} {row.mean_correlation:6.3f}")
