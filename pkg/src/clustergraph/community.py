"""Community detection by ER-modularity, and its Bayesian reading.

With a cluster-graph prior P(G_C) = w^m(G_C) / B_n(w) and a planted-partition
likelihood, the log-posterior of a partition is an increasing affine function
of the ER-modularity

    ERM(G_C) = (m(G & G_C) - gamma * m(G_C)) / m(G)

at the resolution gamma returned by gamma_resolution.  Louvain is used to
find local maxima.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from clustergraph.bellcore import EdgeBias, build_bell_table
from clustergraph.oracle import Partition
from clustergraph.sampler import RngStream, SimpleGraph


class InvalidParameters(ValueError):
    pass


class UndefinedCorrelation(ValueError):
    pass


@dataclass(frozen=True)
class PpmParams:
    community_sizes: tuple[int, ...]
    p_in: float
    p_out: float

    def __post_init__(self) -> None:
        if not self.community_sizes or min(self.community_sizes) < 1:
            raise InvalidParameters("community sizes must be positive")
        if not (0 <= self.p_in <= 1 and 0 <= self.p_out <= 1):
            raise InvalidParameters("p_in and p_out must be probabilities")

    @property
    def n(self) -> int:
        return sum(self.community_sizes)


@dataclass(frozen=True)
class LabeledGraph:
    graph: SimpleGraph
    truth: Partition

    def __post_init__(self) -> None:
        if self.graph.n != self.truth.n:
            raise ValueError("truth must cover the graph's vertices")


def gamma_resolution(p_in: float, p_out: float, p: float) -> float:
    """Resolution at which ERM ranks partitions like the posterior.

    gamma = log((1-p_out)/(1-p_in) * (1-p)/p) / log(p_in (1-p_out) / (p_out (1-p_in)))
    """
    if not (0 < p_out < p_in < 1):
        raise InvalidParameters(f"need 0 < p_out < p_in < 1, got p_in={p_in}, p_out={p_out}")
    if not (0 < p < 1):
        raise InvalidParameters(f"p must lie in (0, 1), got {p}")
    num = math.log1p(-p_out) - math.log1p(-p_in) + math.log1p(-p) - math.log(p)
    den = math.log(p_in) + math.log1p(-p_out) - math.log(p_out) - math.log1p(-p_in)
    return num / den


def generate_ppm(params: PpmParams, rng: RngStream) -> LabeledGraph:
    """Planted partition graph: intra pairs Bernoulli(p_in), inter pairs Bernoulli(p_out)."""
    labels = np.repeat(np.arange(len(params.community_sizes)), params.community_sizes)
    n = len(labels)
    iu, ju = np.triu_indices(n, k=1)
    same = labels[iu] == labels[ju]
    prob = np.where(same, params.p_in, params.p_out)
    keep = rng.gen.random(len(iu)) < prob
    edges = frozenset(zip(iu[keep].tolist(), ju[keep].tolist()))
    return LabeledGraph(SimpleGraph(n, edges), Partition.from_labels(labels.tolist()))


def _edge_counts(g: SimpleGraph, part: Partition) -> tuple[int, int, int]:
    """(m(G), m(G & G_C), m(G_C))."""
    lab = part.labels()
    inside = sum(1 for u, v in g.edges if lab[u] == lab[v])
    return g.m, inside, part.m


def erm(g: SimpleGraph, part: Partition, gamma: float) -> float:
    """ER-modularity (m(G & G_C) - gamma m(G_C)) / m(G)."""
    if g.n != part.n:
        raise ValueError("graph and partition sizes differ")
    m_g, inside, m_c = _edge_counts(g, part)
    if m_g == 0:
        raise ValueError("ER-modularity is undefined on an empty graph")
    return (inside - gamma * m_c) / m_g


def log_posterior(g: SimpleGraph, part: Partition, p_in: float, p_out: float, p: float) -> float:
    """log P(G | G_C) + log P(G_C), including the -log B_n(w) prior normaliser."""
    for name, val in (("p_in", p_in), ("p_out", p_out), ("p", p)):
        if not (0 < val < 1):
            raise InvalidParameters(f"{name} must lie in (0, 1)")
    n = g.n
    m_g, inside, m_c = _edge_counts(g, part)
    pairs = n * (n - 1) // 2
    loglik = (
        inside * math.log(p_in)
        + (m_c - inside) * math.log1p(-p_in)
        + (m_g - inside) * math.log(p_out)
        + (pairs - m_c - m_g + inside) * math.log1p(-p_out)
    )
    bias = EdgeBias.from_p(p)
    log_prior = m_c * bias.t - build_bell_table(n, bias).log_b[n]
    return loglik + float(log_prior)


def ring_of_cliques(k: int, s: int) -> LabeledGraph:
    """k cliques of size s in a ring, clique i joined to clique i+1 by one edge."""
    if k < 3 or s < 2:
        raise ValueError("need k >= 3 and s >= 2")
    edges = []
    for c in range(k):
        base = c * s
        edges += [(base + i, base + j) for i in range(s) for j in range(i + 1, s)]
        edges.append((base + s - 1, ((c + 1) % k) * s))
    truth = Partition.from_labels([v // s for v in range(k * s)])
    return LabeledGraph(SimpleGraph.from_edges(k * s, edges), truth)


def correlation_coefficient(a: Partition, b: Partition) -> float:
    """Pearson correlation of the two same-block indicator vectors over all pairs.

    Computed from pair counts of the contingency table, in exact integers.
    """
    if a.n != b.n:
        raise ValueError("partitions have different sizes")
    total = a.n * (a.n - 1) // 2
    in_a, in_b = a.m, b.m
    la, lb = a.labels(), b.labels()
    joint: dict[tuple[int, int], int] = {}
    for x, y in zip(la, lb):
        joint[(x, y)] = joint.get((x, y), 0) + 1
    both = sum(c * (c - 1) // 2 for c in joint.values())
    var = in_a * (total - in_a) * in_b * (total - in_b)
    if var == 0:
        raise UndefinedCorrelation("a partition with all pairs alike has no correlation")
    return (total * both - in_a * in_b) / math.sqrt(var)


# ------------------------------------------------------------------ Louvain


def erm_move_gain(
    g: SimpleGraph, labels: Sequence[int], v: int, target: int, gamma: float
) -> float:
    """Change in ERM when vertex v moves to block ``target`` (full neighbour scan).

    [(e(v, b) - e(v, a minus v)) - gamma (|b| - (|a| - 1))] / m(G).
    """
    a = labels[v]
    if target == a:
        return 0.0
    adj = g.neighbours()[v]
    e_b = sum(1 for u in adj if labels[u] == target)
    e_a = sum(1 for u in adj if labels[u] == a)
    size_b = sum(1 for x in labels if x == target)
    size_a = sum(1 for x in labels if x == a)
    return ((e_b - e_a) - gamma * (size_b - (size_a - 1))) / g.m


def _local_moves(
    adj: list[dict[int, float]], weight: list[int], gamma: float, rng: RngStream
) -> tuple[list[int], bool]:
    """Single-node best moves until none improves; returns (community of node, moved?)."""
    count = len(adj)
    comm = list(range(count))
    size = list(weight)  # total original vertices in each community
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in rng.gen.permutation(count).tolist():
            a = comm[i]
            links: dict[int, float] = {}
            for j, wt in adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + wt
            wi = weight[i]
            stay = links.get(a, 0.0) - gamma * wi * (size[a] - wi)
            best, best_val = a, stay
            for c in sorted(links):
                if c == a:
                    continue
                val = links[c] - gamma * wi * size[c]
                if val > best_val + 1e-12:
                    best, best_val = c, val
            if best == a and stay < -1e-12 and size[a] > wi:
                # an empty community scores 0; take the lowest free index
                best = next(c for c in range(count) if size[c] == 0)
            if best != a:
                size[a] -= wi
                size[best] += wi
                comm[i] = best
                improved = moved_any = True
    return comm, moved_any


def louvain(g: SimpleGraph, gamma: float, rng: RngStream) -> Partition:
    """Greedy ERM maximisation: local moves, then aggregation, until a fixed point.

    Ties keep the current block, otherwise the lowest-indexed candidate wins;
    the node order in each sweep is a fresh seeded shuffle.
    """
    if g.m == 0:
        raise ValueError("Louvain needs at least one edge")
    adj: list[dict[int, float]] = [dict() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u][v] = adj[u].get(v, 0.0) + 1.0
        adj[v][u] = adj[v].get(u, 0.0) + 1.0
    weight = [1] * g.n
    member = list(range(g.n))  # original vertex -> current node
    while True:
        comm, moved = _local_moves(adj, weight, gamma, rng)
        if not moved:
            break
        ids = {c: k for k, c in enumerate(sorted(set(comm)))}
        comm = [ids[c] for c in comm]
        new_adj: list[dict[int, float]] = [dict() for _ in ids]
        new_weight = [0] * len(ids)
        for i, nbrs in enumerate(adj):
            ci = comm[i]
            new_weight[ci] += weight[i]
            for j, wt in nbrs.items():
                cj = comm[j]
                if ci != cj:
                    new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + wt
        adj, weight = new_adj, new_weight
        member = [comm[x] for x in member]
    part = Partition.from_labels(member)
    return _polish(g, part, gamma)


def _polish(g: SimpleGraph, part: Partition, gamma: float) -> Partition:
    """Vertex-level best moves until single-vertex optimal (aggregation can leave gains)."""
    labels = part.labels()
    nbrs = g.neighbours()
    size: dict[int, int] = {}
    for x in labels:
        size[x] = size.get(x, 0) + 1
    fresh = max(labels) + 1
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            a = labels[v]
            links: dict[int, int] = {}
            for u in nbrs[v]:
                links[labels[u]] = links.get(labels[u], 0) + 1
            stay = links.get(a, 0) - gamma * (size[a] - 1)
            best, best_val = a, stay
            for c in sorted(links):
                if c != a and links[c] - gamma * size[c] > best_val + 1e-12:
                    best, best_val = c, links[c] - gamma * size[c]
            if best == a and stay < -1e-12 and size[a] > 1:
                best = fresh
                fresh += 1
            if best != a:
                size[a] -= 1
                size[best] = size.get(best, 0) + 1
                labels[v] = best
                changed = True
    return Partition.from_labels(labels)


def is_single_move_optimal(g: SimpleGraph, part: Partition, gamma: float, tol: float = 1e-12) -> bool:
    """True if no single vertex move (to another block or a new one) raises ERM."""
    labels = part.labels()
    base = erm(g, part, gamma)
    fresh = max(labels) + 1
    for v in range(g.n):
        for target in set(labels) | {fresh}:
            if target == labels[v]:
                continue
            trial = list(labels)
            trial[v] = target
            if erm(g, Partition.from_labels(trial), gamma) > base + tol:
                return False
    return True


# --------------------------------------------------------- planted sweep


# 21 points spanning [0.5, 0.51]; the n = 1000 critical window is about [0.50199, 0.50295]
DEFAULT_P_GRID = tuple(round(0.5 + 0.0005 * i, 4) for i in range(21))


@dataclass(frozen=True)
class SweepConfig:
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    replicas: int = 20
    community_sizes: tuple[int, ...] = (200,) * 5
    p_in: float = 10 / 199
    p_out: float = 1 / 80
    seed: int = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "SweepConfig":
        """Read a JSON config; ``p_grid`` may be a list or {"start", "stop", "num"}."""
        raw = json.loads(Path(path).read_text())
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        grid = raw.get("p_grid", DEFAULT_P_GRID)
        if isinstance(grid, dict):
            grid = np.linspace(grid["start"], grid["stop"], int(grid["num"])).tolist()
        return cls(
            p_grid=tuple(float(x) for x in grid),
            replicas=int(raw.get("replicas", 20)),
            community_sizes=tuple(int(x) for x in raw.get("community_sizes", (200,) * 5)),
            p_in=float(raw.get("p_in", 10 / 199)),
            p_out=float(raw.get("p_out", 1 / 80)),
            seed=int(raw.get("seed", 0)),
        )


@dataclass(frozen=True)
class SweepRow:
    p: float
    mean_detected_edges: float
    mean_correlation: float
    stderr_correlation: float


def figure4_sweep(config: SweepConfig, rng: RngStream | None = None) -> list[SweepRow]:
    """Average Louvain statistics over planted-partition replicas, per prior p.

    Replica r draws its graph from stream r and runs Louvain from stream
    (r, 1) for every p, so the p-dependence is not masked by graph noise.
    """
    root = rng if rng is not None else RngStream(config.seed)
    params = PpmParams(config.community_sizes, config.p_in, config.p_out)
    graphs = [generate_ppm(params, root.child(r)) for r in range(config.replicas)]
    rows = []
    for p in config.p_grid:
        gamma = gamma_resolution(config.p_in, config.p_out, p)
        edges, corr = [], []
        for r, lg in enumerate(graphs):
            found = louvain(lg.graph, gamma, root.child(r).child(1))
            edges.append(found.m)
            try:
                corr.append(correlation_coefficient(found, lg.truth))
            except UndefinedCorrelation:
                corr.append(0.0)
        se = float(np.std(corr, ddof=1) / math.sqrt(len(corr))) if len(corr) > 1 else 0.0
        rows.append(SweepRow(p, float(np.mean(edges)), float(np.mean(corr)), se))
    return rows
