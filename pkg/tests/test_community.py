import itertools
import json
import math

import numpy as np
import pytest

from clustergraph.community import (
    DEFAULT_P_GRID,
    InvalidParameters,
    LabeledGraph,
    PpmParams,
    SweepConfig,
    UndefinedCorrelation,
    correlation_coefficient,
    erm,
    erm_move_gain,
    figure4_sweep,
    gamma_resolution,
    generate_ppm,
    is_single_move_optimal,
    log_posterior,
    louvain,
    ring_of_cliques,
)
from clustergraph.oracle import Partition, enumerate_partitions
from clustergraph.sampler import RngStream, SimpleGraph

TRIANGLE = SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def random_graph(n, p, rng):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return SimpleGraph.from_edges(n, [e for e in pairs if rng.gen.random() < p])


def test_gamma_resolution():
    assert gamma_resolution(0.8, 0.2, 0.5) == pytest.approx(0.5)
    with pytest.raises(InvalidParameters):
        gamma_resolution(0.3, 0.3, 0.5)
    with pytest.raises(InvalidParameters):
        gamma_resolution(0.3, 0.4, 0.5)
    g = gamma_resolution(10 / 199, 1 / 80, 0.5)
    lo, hi = 1 / 80, 10 / 199
    assert lo < g < hi  # resolution sits between the two densities


def test_ppm_extremes():
    params = PpmParams((3, 4), 1.0, 0.0)
    lg = generate_ppm(params, RngStream(0))
    assert lg.graph == SimpleGraph.from_partition(lg.truth)


def test_ppm_er_degenerate():
    n, p = 30, 0.3
    params = PpmParams((10, 20), p, p)
    m = [generate_ppm(params, RngStream(1, i)).graph.m for i in range(200)]
    pairs = n * (n - 1) // 2
    sd = math.sqrt(pairs * p * (1 - p) / 200)
    assert abs(np.mean(m) - pairs * p) < 4 * sd


def test_ppm_figure_parameters():
    params = PpmParams((200,) * 5, 10 / 199, 1 / 80)
    lg = generate_ppm(params, RngStream(2))
    lab = lg.truth.labels()
    intra = sum(1 for u, v in lg.graph.edges if lab[u] == lab[v])
    inter = lg.graph.m - intra
    # expected intra and inter degree are both 10
    assert abs(2 * intra / 1000 - 10) < 4 * math.sqrt(10 * 2 / 1000)
    assert abs(2 * inter / 1000 - 10) < 4 * math.sqrt(10 * 2 / 1000)


def test_erm_examples():
    singles = Partition.from_labels(range(3))
    assert erm(TRIANGLE, singles, 0.3) == 0.0
    whole = Partition.from_labels([0, 0, 0])
    assert erm(TRIANGLE, whole, 0.3) == pytest.approx(1 - 0.3 * 3 / 3)
    assert erm(TRIANGLE, Partition.from_blocks(3, [[0, 1], [2]]), 0.5) == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        erm(SimpleGraph(3), whole, 0.5)


def test_posterior_is_affine_in_erm():
    rng = RngStream(3)
    g = random_graph(5, 0.5, rng)
    p_in, p_out, p = 0.7, 0.2, 0.4
    gamma = gamma_resolution(p_in, p_out, p)
    parts = list(enumerate_partitions(5))
    lp = np.array([log_posterior(g, q, p_in, p_out, p) for q in parts])
    e = np.array([erm(g, q, gamma) for q in parts])
    slopes = []
    for i, j in itertools.combinations(range(len(parts)), 2):
        if abs(e[i] - e[j]) > 1e-9:
            slopes.append((lp[i] - lp[j]) / (e[i] - e[j]))
    assert max(slopes) - min(slopes) < 1e-9 * abs(np.mean(slopes))
    assert min(slopes) > 0


@pytest.mark.parametrize("triple", [(0.7, 0.2, 0.4), (0.3, 0.05, 0.5), (0.9, 0.6, 0.2)])
def test_posterior_ranking_matches_erm(triple):
    p_in, p_out, p = triple
    gamma = gamma_resolution(p_in, p_out, p)
    rng = RngStream(4)
    for k in range(6):
        n = (5, 6, 7)[k % 3]
        g = random_graph(n, 0.5, rng.child(k))
        if g.m == 0:
            continue
        parts = list(enumerate_partitions(n))
        lp = np.array([log_posterior(g, q, p_in, p_out, p) for q in parts])
        e = np.array([erm(g, q, gamma) for q in parts])
        order = np.argsort(e, kind="stable")
        assert np.all(np.diff(lp[order]) > -1e-9)
        assert parts[int(np.argmax(lp))].m == parts[int(np.argmax(e))].m or math.isclose(
            e.max(), e[int(np.argmax(lp))], abs_tol=1e-12)


def test_posterior_empty_graph():
    g = SimpleGraph(4)
    val = log_posterior(g, Partition.from_labels([0, 0, 1, 1]), 0.6, 0.1, 0.5)
    assert math.isfinite(val)
    with pytest.raises(InvalidParameters):
        log_posterior(g, Partition.from_labels([0, 0, 1, 1]), 1.0, 0.1, 0.5)


def test_louvain_two_triangles():
    g = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    truth = Partition.from_blocks(6, [[0, 1, 2], [3, 4, 5]])
    best = max(enumerate_partitions(6), key=lambda q: erm(g, q, 0.5))
    assert best == truth
    assert louvain(g, 0.5, RngStream(5)) == truth


def test_louvain_ring_of_cliques():
    lg = ring_of_cliques(10, 5)
    found = louvain(lg.graph, 2 / 25, RngStream(6))
    assert found == lg.truth


def test_louvain_single_edge():
    g = SimpleGraph.from_edges(2, [(0, 1)])
    assert louvain(g, 0.9, RngStream(7)).c == 1
    with pytest.raises(ValueError):
        louvain(SimpleGraph(3), 0.5, RngStream(7))


def test_louvain_single_move_optimal():
    rng = RngStream(8)
    for k in range(8):
        g = random_graph(14, 0.3, rng.child(k))
        if g.m == 0:
            continue
        for gamma in (0.1, 0.3, 0.6):
            part = louvain(g, gamma, rng.child(100 + k))
            assert is_single_move_optimal(g, part, gamma)


def test_move_gain_matches_full_recompute():
    rng = RngStream(9)
    checked = 0
    while checked < 1000:
        g = random_graph(10, 0.4, rng.child(checked))
        if g.m == 0:
            continue
        gen = rng.child(checked).child(1).gen
        labels = gen.integers(0, 4, size=10).tolist()
        gamma = float(gen.random())
        for _ in range(10):
            v = int(gen.integers(10))
            target = int(gen.integers(5))
            before = erm(g, Partition.from_labels(labels), gamma)
            moved = list(labels)
            moved[v] = target
            after = erm(g, Partition.from_labels(moved), gamma)
            assert abs(erm_move_gain(g, labels, v, target, gamma) - (after - before)) < 1e-10
            checked += 1


def test_ring_of_cliques():
    lg = ring_of_cliques(3, 3)
    assert lg.graph.m == 12
    assert lg.graph.components().c == 1
    lg = ring_of_cliques(6, 4)
    lab = lg.truth.labels()
    between = sum(1 for u, v in lg.graph.edges if {lab[u], lab[v]} == {0, 1})
    assert between / 4**2 == pytest.approx(1 / 16)
    with pytest.raises(ValueError):
        ring_of_cliques(2, 3)


def test_correlation_examples():
    a = Partition.from_blocks(4, [[0, 1], [2, 3]])
    b = Partition.from_blocks(4, [[0, 2], [1, 3]])
    assert correlation_coefficient(a, a) == pytest.approx(1.0)
    # indicator vectors (1,0,0,0,0,1) and (0,1,0,0,1,0): cov -1/9 over variance 2/9
    assert correlation_coefficient(a, b) == pytest.approx(-1 / 2)
    assert correlation_coefficient(a, b) == pytest.approx(np.corrcoef([1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 1, 0])[0, 1])
    with pytest.raises(UndefinedCorrelation):
        correlation_coefficient(a, Partition.from_labels([0, 1, 2, 3]))
    with pytest.raises(UndefinedCorrelation):
        correlation_coefficient(Partition.from_labels([0, 0, 0, 0]), a)


def test_correlation_symmetric_and_sharp():
    parts = [q for q in enumerate_partitions(6) if 0 < q.m < 15]
    for a in parts[::7]:
        for b in parts:
            r = correlation_coefficient(a, b)
            assert r == pytest.approx(correlation_coefficient(b, a), abs=1e-15)
            assert (abs(r - 1) < 1e-12) == (a == b)


def test_correlation_independent_partitions():
    gen = RngStream(10).gen
    vals = []
    for _ in range(20):
        a = Partition.from_labels(gen.integers(0, 5, 100).tolist())
        b = Partition.from_labels(gen.integers(0, 5, 100).tolist())
        vals.append(correlation_coefficient(a, b))
    assert max(abs(v) for v in vals) < 0.2


def test_sweep_config_parsing(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"p_grid": {"start": 0.5, "stop": 0.51, "num": 21}, "replicas": 3, "seed": 5}))
    cfg = SweepConfig.from_file(path)
    assert cfg.replicas == 3 and cfg.seed == 5
    assert np.allclose(cfg.p_grid, DEFAULT_P_GRID)
    assert SweepConfig.from_dict({"p_grid": [0.5]}).p_grid == (0.5,)


def test_small_sweep_deterministic():
    cfg = SweepConfig(p_grid=(0.5, 0.52), replicas=1, community_sizes=(20, 20), p_in=0.5, p_out=0.05, seed=3)
    a = figure4_sweep(cfg)
    b = figure4_sweep(cfg)
    assert a == b
    assert a[0].mean_detected_edges <= a[1].mean_detected_edges
    assert a[0].stderr_correlation == 0.0
