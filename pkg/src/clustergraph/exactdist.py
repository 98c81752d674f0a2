"""Exact finite-n laws and moments of the clique count C, edge count M and degree D.

Everything reads off a BellTable.  The degree law is closed form; the laws of
C and M come from the Bell recursion with the block count (resp. the edge
count) carried along as an extra index, which costs O(n^3) (resp. O(n^4))
and is meant for moderate n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from clustergraph.bellcore import BellTable, EdgeBias, _pair_exponent, build_bell_table, logsumexp


@dataclass(frozen=True)
class Pmf:
    """Probabilities on support_offset, support_offset + 1, ...

    ``deficit`` is the sum of the raw log-domain probabilities minus one,
    recorded before the defensive renormalisation.
    """

    support_offset: int
    probs: np.ndarray = field(repr=False)
    deficit: float = 0.0

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.support_offset, self.support_offset + len(self.probs))

    def prob(self, k: int) -> float:
        i = k - self.support_offset
        return float(self.probs[i]) if 0 <= i < len(self.probs) else 0.0

    def as_dict(self, drop_zero: bool = True) -> dict[int, float]:
        return {
            int(k): float(p) for k, p in zip(self.support, self.probs) if p > 0 or not drop_zero
        }

    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.dot((self.support - mu) ** 2, self.probs))

    def mode(self) -> int:
        return int(self.support[int(np.argmax(self.probs))])


def _normalised(offset: int, log_probs: np.ndarray) -> Pmf:
    probs = np.exp(log_probs)
    total = float(np.sum(probs))
    return Pmf(offset, probs / total, total - 1.0)


def _check(table: BellTable, n: int, lo: int = 0) -> None:
    if not (lo <= n <= table.n_max):
        raise IndexError(f"n={n} outside {lo}..{table.n_max}")


def degree_log_pmf(table: BellTable, n: int) -> np.ndarray:
    """log P(D = d) for d = 0..n-1, before normalisation."""
    _check(table, n, 1)
    d = np.arange(n)
    return (
        table.log_choose(n - 1, d)
        + _pair_exponent(table.t, d + 1.0)
        + table.log_b[n - d - 1]
        - table.log_b[n]
    )


def degree_pmf(table: BellTable, n: int) -> Pmf:
    """P(D=d) = C(n-1,d) w^C(d+1,2) B_{n-d-1} / B_n, d = 0..n-1.

    D + 1 is the size of the clique holding a uniformly chosen vertex.
    """
    return _normalised(0, degree_log_pmf(table, n))


def clique_size_pmf(table: BellTable, n: int) -> Pmf:
    """Law of S = D + 1."""
    pmf = degree_pmf(table, n)
    return Pmf(1, pmf.probs, pmf.deficit)


def log_prob_single_clique(table: BellTable, n: int) -> float:
    """log P(C = 1) = -log(1 + R/w^C(n,2)), R the weight of all other partitions.

    R comes from the top level of the Bell recursion without its s = n term,
    so the result keeps full relative precision even when P(C = 1) rounds to 1.
    """
    _check(table, n, 1)
    if n == 1:
        return 0.0
    lead = table.t * (n * (n - 1) / 2)
    if lead == -math.inf:
        return -math.inf
    s = np.arange(1, n)
    rest = logsumexp(
        table.log_choose(n - 1, s - 1) + _pair_exponent(table.t, s.astype(float)) + table.log_b[n - s]
    )
    gap = rest - lead
    return -math.log1p(math.exp(gap)) if gap < 30 else -(gap + math.log1p(math.exp(-gap)))


def prob_single_clique(table: BellTable, n: int) -> float:
    """P(C = 1) = w^C(n,2) / B_n(w)."""
    return math.exp(log_prob_single_clique(table, n))


def expected_edges(table: BellTable, n: int) -> float:
    """E[M] from the recursion on the block of the last vertex.

    m_k = sum_s C(k-1,s-1) w^C(s,2) (B_{k-s}/B_k) (C(s,2) + m_{k-s}),  m_0 = 0.
    """
    _check(table, n)
    m = np.zeros(n + 1)
    t = table.t
    for k in range(1, n + 1):
        s = np.arange(1, k + 1)
        logw = table.log_choose(k - 1, s - 1) + _pair_exponent(t, s.astype(float))
        logw = logw + table.log_b[k - s] - table.log_b[k]
        m[k] = float(np.dot(np.exp(logw), s * (s - 1) / 2 + m[k - s]))
    return float(m[n])


def edge_variance(table: BellTable, n: int, h: float = 1e-4) -> float:
    """Var M.

    At w = 1 this is the exact pair-covariance identity
        C(n,2) [r_1 - r_1^2] + (C(n,2)^2 - C(n,2)) [r_2 - r_1^2],
    with r_1 = B_{n-1}/B_n and r_2 = B_{n-2}/B_n (three or four labels forced
    into one or two blocks both leave B_{n-2} completions).
    Elsewhere it is the second central difference of t -> log B_n(e^t) with
    step h, good to roughly 1e-4 relative.
    """
    _check(table, n, 1)
    if n == 1:
        return 0.0
    pairs = n * (n - 1) / 2
    if table.t == 0.0:
        lb = table.log_b
        r1 = math.exp(lb[n - 1] - lb[n])
        r2 = math.exp(lb[n - 2] - lb[n])
        return pairs * (r1 - r1 * r1) + (pairs * pairs - pairs) * (r2 - r1 * r1)
    t = table.t
    up = build_bell_table(n, EdgeBias(t + h)).log_b[n]
    down = build_bell_table(n, EdgeBias(t - h)).log_b[n]
    return float((up - 2 * table.log_b[n] + down) / (h * h))


def expected_clique_count_by_size(table: BellTable, n: int, s: int) -> float:
    """E[number of cliques of size s] = C(n,s) w^C(s,2) B_{n-s} / B_n."""
    _check(table, n, 1)
    if not (1 <= s <= n):
        raise IndexError(f"clique size {s} outside 1..{n}")
    lead = table.t * (s * (s - 1) / 2) if s > 1 else 0.0
    return math.exp(table.log_choose(n, s) + lead + table.log_b[n - s] - table.log_b[n])


def expected_clique_counts(table: BellTable, n: int) -> np.ndarray:
    """Vector of E[C^(s)] for s = 1..n."""
    _check(table, n, 1)
    s = np.arange(1, n + 1)
    logs = table.log_choose(n, s) + _pair_exponent(table.t, s.astype(float))
    return np.exp(logs + table.log_b[n - s] - table.log_b[n])


def expected_cliques(table: BellTable, n: int, shortcut: bool = True) -> float:
    """E[C].  At w = 1 (and n+1 in the table) uses B_{n+1}/B_n - 1."""
    _check(table, n, 1)
    if shortcut and table.t == 0.0 and n + 1 <= table.n_max:
        return math.exp(table.log_b[n + 1] - table.log_b[n]) - 1.0
    return float(np.sum(expected_clique_counts(table, n)))


def edges_pgf_eval(table_w: BellTable, table_uw: BellTable, n: int) -> float:
    """PGF of M at u, namely B_n(uw)/B_n(w), with table_uw built at log(uw)."""
    _check(table_w, n)
    _check(table_uw, n)
    return math.exp(table_uw.log_b[n] - table_w.log_b[n])


def clique_count_pmf(table: BellTable, n: int) -> Pmf:
    """Law of C on 1..n by the block-marked Bell recursion.

    L[k][c] = log sum over partitions of k labels with c blocks of w^m, built as
    L[k][c] = logsum_s C(k-1,s-1) w^C(s,2) L[k-s][c-1].
    """
    _check(table, n, 1)
    t = table.t
    weights = _pair_exponent(t, np.arange(0, n + 1, dtype=float))
    L = np.full((n + 1, n + 1), -np.inf)
    L[0, 0] = 0.0
    for k in range(1, n + 1):
        s = np.arange(1, k + 1)
        base = table.log_choose(k - 1, s - 1) + weights[s]
        for c in range(1, k + 1):
            L[k, c] = logsumexp(base + L[k - s, c - 1])
    return _normalised(1, L[n, 1:] - table.log_b[n])


def edge_count_pmf(table: BellTable, n: int) -> Pmf:
    """Law of M on 0..C(n,2) from the Bell recursion with the edge count carried.

    N[k][m] = number of partitions of k labels with m intra-block pairs, kept as
    floats in log space so that the weight w^m can be applied at the end.
    """
    _check(table, n, 1)
    top = n * (n - 1) // 2
    N = np.full((n + 1, top + 1), -np.inf)
    N[0, 0] = 0.0
    for k in range(1, n + 1):
        kt = k * (k - 1) // 2
        for s in range(1, k + 1):
            shift = s * (s - 1) // 2
            lc = float(table.log_choose(k - 1, s - 1))
            prev = N[k - s, : kt - shift + 1] + lc
            cur = N[k, shift : kt + 1]
            N[k, shift : kt + 1] = np.logaddexp(cur, prev)
    m = np.arange(top + 1, dtype=float)
    return _normalised(0, N[n] + _edge_weight(table.t, m) - table.log_b[n])


def _edge_weight(t: float, m: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        out = t * m
    out[m == 0] = 0.0
    return out
