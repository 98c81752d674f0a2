"""Exact sampling of random cluster graphs and an independent rejection oracle.

The exact sampler peels off one clique at a time: the highest unassigned
label draws its clique size from the degree law of the remaining vertices,
then picks its partners uniformly.  The rejection sampler draws plain
Erdos-Renyi graphs and keeps the ones that happen to be cluster graphs.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from clustergraph.bellcore import BellTable
from clustergraph.exactdist import degree_log_pmf
from clustergraph.oracle import Partition


class SamplerExhausted(RuntimeError):
    """Rejection sampling used up its attempt budget."""


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on {0..n-1}; edges stored as (u, v) with u < v."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {(u, v)} for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            canon.add((min(u, v), max(u, v)))
        return cls(n, frozenset(canon))

    @classmethod
    def from_partition(cls, part: Partition) -> "SimpleGraph":
        edges = [(b[i], b[j]) for b in part.blocks for i in range(len(b)) for j in range(i + 1, len(b))]
        return cls(part.n, frozenset(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbours(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def components(self) -> Partition:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return Partition.from_labels([find(v) for v in range(self.n)])


class RngStream:
    """Seeded, splittable random stream (numpy Philox under a SeedSequence).

    ``RngStream(seed, index)`` is reproducible, and distinct indices under the
    same seed give independent streams.
    """

    def __init__(self, seed: int, index: int | tuple[int, ...] = ()) -> None:
        key = (index,) if isinstance(index, int) else tuple(index)
        self.seed = int(seed)
        self.key = key
        self.gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(self.seed, spawn_key=key)))

    def child(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.key + (index,))

    def uniform(self, size=None):
        return self.gen.random(size)


@dataclass
class _SizeTables:
    """Cached cumulative clique-size laws for each number of remaining vertices."""

    table: BellTable
    cdfs: dict[int, list[float]] = field(default_factory=dict)

    def cdf(self, k: int) -> list[float]:
        if k not in self.cdfs:
            logp = degree_log_pmf(self.table, k)
            probs = np.exp(logp - logp.max())
            c = np.cumsum(probs)
            self.cdfs[k] = list(c / c[-1])
        return self.cdfs[k]

    def draw(self, k: int, u: float) -> int:
        # smallest size whose cumulative mass reaches u
        c = self.cdf(k)
        return min(bisect.bisect_left(c, u), k - 1) + 1


_CACHE: dict[int, _SizeTables] = {}


def _size_tables(table: BellTable) -> _SizeTables:
    key = id(table)
    cached = _CACHE.get(key)
    if cached is None or cached.table is not table:
        cached = _SizeTables(table)
        _CACHE.clear()
        _CACHE[key] = cached
    return cached


def sample_cluster_graph(table: BellTable, n: int, rng: RngStream) -> Partition:
    """One exact draw with P(G) = w^m(G) / B_n(w)."""
    if not (0 < n <= table.n_max):
        raise IndexError(f"n={n} outside 1..{table.n_max}")
    sizes = _size_tables(table)
    unassigned = list(range(n))
    blocks = []
    while unassigned:
        k = len(unassigned)
        s = sizes.draw(k, rng.gen.random())
        anchor = unassigned.pop()
        if s > 1:
            picks = rng.gen.choice(k - 1, size=s - 1, replace=False)
            chosen = {unassigned[i] for i in picks}
            unassigned = [v for v in unassigned if v not in chosen]
            blocks.append([anchor, *chosen])
        else:
            blocks.append([anchor])
    return Partition.from_blocks(n, blocks)


def sample_block_sizes(table: BellTable, n: int, rng: RngStream, count: int) -> list[list[int]]:
    """Clique sizes of ``count`` exact draws, skipping the label bookkeeping.

    The size sequence has the same law as in sample_cluster_graph; this is the
    fast path for statistics that only need sizes (c, m, largest block).
    """
    sizes = _size_tables(table)
    out = []
    rand = rng.gen.random
    for _ in range(count):
        k = n
        row = []
        while k:
            s = sizes.draw(k, rand())
            row.append(s)
            k -= s
        out.append(row)
    return out


def size_statistics(rows: list[list[int]]) -> np.ndarray:
    """Array of (c, m, max_block) per row of clique sizes."""
    out = np.empty((len(rows), 3), dtype=np.int64)
    for i, row in enumerate(rows):
        out[i, 0] = len(row)
        out[i, 1] = sum(s * (s - 1) // 2 for s in row)
        out[i, 2] = max(row)
    return out


def is_cluster_graph(g: SimpleGraph) -> bool:
    """True iff every closed neighbourhood is a clique (no induced wedge)."""
    adj = g.neighbours()
    for v in range(g.n):
        for u in adj[v]:
            # u's closed neighbourhood must equal v's
            if adj[u] - {v} != adj[v] - {u}:
                return False
    return True


def _triples(n: int) -> np.ndarray:
    pos = {}
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            pos[(i, j)] = k
            k += 1
    return np.array(
        [(pos[(i, j)], pos[(i, l)], pos[(j, l)]) for i in range(n) for j in range(i + 1, n) for l in range(j + 1, n)],
        dtype=np.int64,
    ).reshape(-1, 3)


def rejection_batch(n: int, p: float, rng: RngStream, attempts: int) -> np.ndarray:
    """Draw ``attempts`` G(n, p) graphs and return (c, m) for the cluster graphs among them.

    A graph is a cluster graph iff no vertex triple spans exactly two edges.
    """
    pairs = n * (n - 1) // 2
    bits = rng.gen.random((attempts, pairs)) < p
    if n >= 3:
        tri = _triples(n)
        spans = bits[:, tri[:, 0]].astype(np.int8) + bits[:, tri[:, 1]] + bits[:, tri[:, 2]]
        ok = ~np.any(spans == 2, axis=1)
        bits = bits[ok]
    m = bits.sum(axis=1)
    # in a cluster graph, c = number of vertices with no lower-indexed neighbour
    has_lower = np.zeros((len(bits), n), dtype=bool)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            has_lower[:, j] |= bits[:, k]
            k += 1
    c = n - has_lower.sum(axis=1)
    return np.stack([c, m], axis=1)


def rejection_sample(n: int, p: float, rng: RngStream, max_attempts: int = 1_000_000) -> Partition:
    """Sample G(n, p) until it is a cluster graph; return its components."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(max_attempts):
        bits = rng.gen.random(len(pairs)) < p
        g = SimpleGraph(n, frozenset(e for e, b in zip(pairs, bits) if b))
        if is_cluster_graph(g):
            return g.components()
    raise SamplerExhausted(f"no cluster graph in {max_attempts} draws at n={n}, p={p}")


def acceptance_probability(n: int, p: float, log_bell: float) -> float:
    """(1-p)^C(n,2) B_n(w), the chance a G(n, p) graph is a cluster graph."""
    return math.exp(n * (n - 1) / 2 * math.log1p(-p) + log_bell)
