from collections import Counter

import numpy as np
import pytest

from clustergraph.bellcore import EdgeBias, build_bell_table
from clustergraph.oracle import Partition, enumerate_partitions, exact_statistic_pmf
from clustergraph.sampler import (
    RngStream,
    SamplerExhausted,
    SimpleGraph,
    acceptance_probability,
    is_cluster_graph,
    rejection_batch,
    rejection_sample,
    sample_block_sizes,
    sample_cluster_graph,
    size_statistics,
)


def tv(counts: Counter, pmf: dict, total: int) -> float:
    keys = set(counts) | set(pmf)
    return 0.5 * sum(abs(counts.get(k, 0) / total - pmf.get(k, 0.0)) for k in keys)


def test_trivial_draws():
    tb = build_bell_table(2, EdgeBias(0.0))
    assert sample_cluster_graph(tb, 1, RngStream(0)) == Partition.from_blocks(1, [[0]])
    rng = RngStream(1)
    ones = sum(sample_cluster_graph(tb, 2, rng).c == 1 for _ in range(20000))
    assert abs(ones / 20000 - 0.5) < 0.015


def test_full_partition_law_small_n():
    # every one of the 52 partitions of 5 labels, against w^m / B_5(w)
    n, w = 5, 0.6
    tb = build_bell_table(n, EdgeBias.from_w(w))
    rng = RngStream(2)
    draws = 100_000
    counts = Counter(sample_cluster_graph(tb, n, rng) for _ in range(draws))
    z = float(np.exp(tb.log_b[n]))
    want = {p: w**p.m / z for p in enumerate_partitions(n)}
    assert tv(counts, want, draws) < 0.01


def test_edge_law_n6():
    n, w = 6, 0.3
    tb = build_bell_table(n, EdgeBias.from_w(w))
    rng = RngStream(3)
    draws = 200_000
    m = size_statistics(sample_block_sizes(tb, n, rng, draws))[:, 1]
    counts = Counter(m.tolist())
    assert tv(counts, exact_statistic_pmf(n, EdgeBias.from_w(w), "edges"), draws) < 0.01


def test_sizes_match_full_sampler_law():
    n = 30
    tb = build_bell_table(n, EdgeBias.from_p(0.4))
    a = size_statistics(sample_block_sizes(tb, n, RngStream(4), 20000))
    assert sum(len(b) for b in sample_cluster_graph(tb, n, RngStream(5)).blocks) == n
    full = [sample_cluster_graph(tb, n, RngStream(6, i)) for i in range(3000)]
    assert abs(a[:, 0].mean() - np.mean([p.c for p in full])) < 0.25


def test_rejection_oracle_clique_law():
    n, p = 5, 0.4
    rng = RngStream(7)
    got = []
    while len(got) < 100_000:
        got.extend(rejection_batch(n, p, rng, 200_000)[:, 0].tolist())
    counts = Counter(got[:100_000])
    assert tv(counts, exact_statistic_pmf(n, EdgeBias.from_p(p), "cliques"), 100_000) < 0.015


def test_rejection_sample_small():
    rng = RngStream(8)
    for _ in range(50):
        part = rejection_sample(2, 0.9, rng, max_attempts=1)
        assert part.n == 2
    with pytest.raises(SamplerExhausted):
        rejection_sample(12, 0.5, RngStream(9), max_attempts=3)


def test_acceptance_probability():
    tb = build_bell_table(3, EdgeBias(0.0))
    assert acceptance_probability(3, 0.5, tb.log_b[3]) == pytest.approx(5 / 8)


def test_rejection_batch_matches_slow_path():
    n, p = 5, 0.5
    rng = RngStream(10)
    fast = rejection_batch(n, p, rng, 4000)
    rng = RngStream(10)
    bits = rng.gen.random((4000, 10)) < p
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    slow = []
    for row in bits:
        g = SimpleGraph(n, frozenset(e for e, b in zip(pairs, row) if b))
        if is_cluster_graph(g):
            comp = g.components()
            slow.append((comp.c, g.m))
    assert fast.tolist() == [list(x) for x in slow]


def test_is_cluster_graph():
    assert is_cluster_graph(SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert not is_cluster_graph(SimpleGraph.from_edges(3, [(0, 1), (1, 2)]))
    assert is_cluster_graph(SimpleGraph(5))
    for part in enumerate_partitions(5):
        assert is_cluster_graph(SimpleGraph.from_partition(part))
        assert SimpleGraph.from_partition(part).components() == part


def test_simple_graph_guards():
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        SimpleGraph(3, frozenset({(0, 3)}))
    g = SimpleGraph.from_edges(3, [(2, 0), (0, 2)])
    assert g.edges == frozenset({(0, 2)})


def test_streams_reproducible_and_distinct():
    a = RngStream(42).uniform(5)
    b = RngStream(42).uniform(5)
    c = RngStream(42, 1).uniform(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(RngStream(42).child(3).uniform(3), RngStream(42, 3).uniform(3))


def test_size_statistics():
    out = size_statistics([[3, 1, 1], [5]])
    assert out.tolist() == [[3, 3, 3], [1, 10, 5]]
