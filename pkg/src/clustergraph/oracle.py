"""Ground truth that never touches the Bell recursion.

Set partitions are walked as restricted growth strings.  The statistic laws
tally every partition by its block-size profile; the Bell polynomial
coefficients use the multinomial count n!/(prod s! prod mult!) of each
profile instead, which is checked against the walk.  All
arithmetic on coefficients is in Python integers or Fractions.  Meant for n
up to about 13.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from clustergraph.bellcore import EdgeBias

MAX_ENUMERATION_N = 13
MAX_PMF_N = 11


@dataclass(frozen=True)
class Partition:
    """A set partition of {0..n-1}; equivalently a cluster graph.

    Blocks are stored as sorted tuples, ordered by their smallest label, so two
    equal partitions compare equal.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen = [x for b in self.blocks for x in b]
        if any(len(b) == 0 for b in self.blocks):
            raise ValueError("empty block")
        if sorted(seen) != list(range(self.n)):
            raise ValueError("blocks must be disjoint and cover 0..n-1")

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> "Partition":
        canon = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
        return cls(n, tuple(canon))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(v)
        return cls.from_blocks(len(labels), list(groups.values()))

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    @property
    def c(self) -> int:
        return len(self.blocks)

    @property
    def m(self) -> int:
        return sum(s * (s - 1) // 2 for s in self.sizes)

    def labels(self) -> list[int]:
        out = [0] * self.n
        for i, b in enumerate(self.blocks):
            for v in b:
                out[v] = i
        return out


def _check_n(n: int, hi: int) -> None:
    if not (1 <= n <= hi):
        raise ValueError(f"n={n} outside the enumeration guard 1..{hi}")


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """All restricted growth strings of length n in lexicographic order.

    a[0] = 0 and a[i] <= 1 + max(a[:i]).  Yields the same list object mutated
    in place; copy it if you keep it.
    """
    if n == 0:
        yield []
        return
    a = [0] * n
    top = [0] * n  # top[i] = max(a[:i+1])
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] > top[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        top[i] = max(top[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            top[j] = top[i]


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Every set partition of {0..n-1} exactly once, restricted-growth order."""
    _check_n(n, MAX_ENUMERATION_N)
    for rgs in restricted_growth_strings(n):
        yield Partition.from_labels(rgs)


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Nonincreasing positive tuples summing to n."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _size_profiles(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Multiset of block sizes -> number of set partitions having it.

    Counted in closed form, n! / (prod s! * prod multiplicity!), which agrees
    with brute-force tallying (size_profiles_by_enumeration) and is
    independent of the Bell recursion.
    """
    out = []
    for sizes in integer_partitions(n):
        denom = 1
        for s in sizes:
            denom *= math.factorial(s)
        for k in Counter(sizes).values():
            denom *= math.factorial(k)
        out.append((tuple(sorted(sizes)), math.factorial(n) // denom))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def size_profiles_by_enumeration(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Same table as _size_profiles, by visiting every set partition."""
    _check_n(n, MAX_ENUMERATION_N)
    counts: Counter = Counter()
    for rgs in restricted_growth_strings(n):
        counts[tuple(sorted(Counter(rgs).values()))] += 1
    return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class BellPolynomial:
    """Exact integer coefficients of B_n(w) indexed by edge count."""

    n: int
    coeff: dict[int, int]

    def coefficient_list(self) -> list[int]:
        top = self.n * (self.n - 1) // 2
        return [self.coeff.get(m, 0) for m in range(top + 1)]

    def evaluate(self, w: int | Fraction) -> int | Fraction:
        """Exact value at an integer or rational w."""
        return sum(c * Fraction(w) ** m for m, c in self.coeff.items())

    def log_evaluate(self, w: float) -> float:
        """log B_n(w) for float w, summed with exact integer coefficients."""
        if w == 0:
            return 0.0
        lw = math.log(w)
        terms = [math.log(c) + m * lw for m, c in self.coeff.items()]
        peak = max(terms)
        return peak + math.log(math.fsum(math.exp(x - peak) for x in terms))


def bell_polynomial(n: int) -> BellPolynomial:
    """Count partitions of {0..n-1} by their number of intra-block pairs."""
    _check_n(n, MAX_ENUMERATION_N)
    coeff: Counter = Counter()
    for sizes, count in _size_profiles(n):
        coeff[sum(s * (s - 1) // 2 for s in sizes)] += count
    return BellPolynomial(n, dict(sorted(coeff.items())))


def exact_statistic_pmf(n: int, bias: EdgeBias, statistic: str) -> dict[int, float]:
    """Law of the clique count, edge count or uniform-vertex degree by enumeration.

    Each partition G carries weight w**m(G); the degree law averages the
    indicator of (block size - 1) over the n vertices.
    """
    _check_n(n, MAX_PMF_N)
    if statistic not in ("cliques", "edges", "degree"):
        raise ValueError(f"unknown statistic {statistic!r}")
    t = bias.t
    raw: dict[int, list[float]] = {}
    logs = []
    for sizes, count in size_profiles_by_enumeration(n):
        m = sum(s * (s - 1) // 2 for s in sizes)
        lw = math.log(count) + (m * t if m else 0.0)
        logs.append(lw)
        if statistic == "cliques":
            raw.setdefault(len(sizes), []).append(lw)
        elif statistic == "edges":
            raw.setdefault(m, []).append(lw)
        else:
            for s, k in Counter(sizes).items():
                raw.setdefault(s - 1, []).append(lw + math.log(s * k / n))
    peak = max(logs)
    total = math.fsum(math.exp(x - peak) for x in logs)
    return {
        key: math.fsum(math.exp(x - peak) for x in vals) / total
        for key, vals in sorted(raw.items())
    }
