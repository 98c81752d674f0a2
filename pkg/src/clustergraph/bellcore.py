"""Log-domain generalised Bell polynomials B_n(w).

B_n(w) sums w**m over all set partitions of n labels, m being the number of
intra-block pairs.  It satisfies

    B_n(w) = sum_{s=1}^{n} C(n-1, s-1) w**C(s,2) B_{n-s}(w),    B_0 = 1,

obtained by conditioning on the block of the last label.  Every summand is
nonnegative, so evaluating the recursion with log-sum-exp is stable; this
matters because B_n(1) leaves double range near n = 220.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class CapacityError(ArithmeticError):
    """A log-domain quantity left the finite double range."""


@dataclass(frozen=True)
class LogValue:
    """A nonnegative number stored as its natural log (-inf encodes zero)."""

    logval: float

    def __add__(self, other: "LogValue") -> "LogValue":
        a, b = self.logval, other.logval
        if a < b:
            a, b = b, a
        if b == -math.inf:
            return LogValue(a)
        return LogValue(a + math.log1p(math.exp(b - a)))

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.logval + other.logval)

    def __float__(self) -> float:
        return math.exp(self.logval)

    @classmethod
    def of(cls, x: float) -> "LogValue":
        if x < 0:
            raise ValueError("LogValue holds nonnegative numbers only")
        return cls(math.log(x) if x > 0 else -math.inf)


class StreamingLogSumExp:
    """One-pass accumulator for log(sum(exp(x_i))).

    Keeps the running maximum and the sum rescaled to it, so the terms never
    need to be stored.
    """

    def __init__(self) -> None:
        self.peak = -math.inf
        self.scaled = 0.0

    def push(self, x: float) -> None:
        if x == -math.inf:
            return
        if x <= self.peak:
            self.scaled += math.exp(x - self.peak)
        else:
            self.scaled = self.scaled * math.exp(self.peak - x) + 1.0
            self.peak = x

    @property
    def value(self) -> float:
        if self.peak == -math.inf:
            return -math.inf
        return self.peak + math.log(self.scaled)


def logsumexp(x: np.ndarray) -> float:
    """log(sum(exp(x))) over a 1-d array; -inf entries are ignored."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return -math.inf
    peak = float(np.max(x))
    if peak == -math.inf:
        return -math.inf
    if peak == math.inf:
        raise CapacityError("infinite term inside log-sum-exp")
    return peak + math.log(float(np.sum(np.exp(x - peak))))


@dataclass(frozen=True)
class EdgeBias:
    """Edge bias in the three equivalent parametrisations.

    ``t = log w = log(p/(1-p))``.  ``t = -inf`` is the empty-graph limit p = 0;
    p = 1 (t = +inf) is rejected.
    """

    t: float

    def __post_init__(self) -> None:
        if math.isnan(self.t) or self.t == math.inf:
            raise ValueError(f"edge bias t={self.t} is not allowed (p must be < 1)")

    @classmethod
    def from_t(cls, t: float) -> "EdgeBias":
        return cls(float(t))

    @classmethod
    def from_w(cls, w: float) -> "EdgeBias":
        if not (w >= 0) or math.isinf(w):
            raise ValueError(f"w must be finite and nonnegative, got {w}")
        return cls(math.log(w) if w > 0 else -math.inf)

    @classmethod
    def from_p(cls, p: float) -> "EdgeBias":
        if not (0 <= p < 1):
            raise ValueError(f"p must lie in [0, 1), got {p}")
        if p == 0:
            return cls(-math.inf)
        return cls(math.log(p) - math.log1p(-p))

    @property
    def w(self) -> float:
        return math.exp(self.t)

    @property
    def p(self) -> float:
        if self.t >= 0:
            return 1.0 / (1.0 + math.exp(-self.t))
        e = math.exp(self.t)
        return e / (1.0 + e)


def log_binomial(n: int, k: int) -> float:
    """log C(n, k), with -inf outside 0 <= k <= n."""
    if k < 0 or k > n or n < 0:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_factorials(n: int) -> np.ndarray:
    """Array of log k! for k = 0..n."""
    out = np.zeros(n + 1)
    if n >= 1:
        out[1:] = np.cumsum(np.log(np.arange(1, n + 1, dtype=float)))
    return out


def _pair_exponent(t: float, sizes: np.ndarray) -> np.ndarray:
    """t * C(s, 2), with the convention 0 * (-inf) = 0 for singletons."""
    pairs = sizes * (sizes - 1) / 2.0
    with np.errstate(invalid="ignore", over="ignore"):
        out = t * pairs
    out[pairs == 0] = 0.0
    return out


@dataclass(frozen=True)
class BellTable:
    """log B_k(e^t) for k = 0..n_max at a fixed edge bias."""

    n_max: int
    bias: EdgeBias
    log_b: np.ndarray = field(repr=False)
    log_fact: np.ndarray = field(repr=False)

    @property
    def t(self) -> float:
        return self.bias.t

    def log_bell(self, n: int) -> float:
        self._check(n)
        return float(self.log_b[n])

    def log_choose(self, n: int, k: np.ndarray | int) -> np.ndarray | float:
        """log C(n, k) from the cached factorial table (k must lie in 0..n)."""
        return self.log_fact[n] - self.log_fact[k] - self.log_fact[n - np.asarray(k)]

    def _check(self, n: int) -> None:
        if not (0 <= n <= self.n_max):
            raise IndexError(f"n={n} outside table range 0..{self.n_max}")


def build_bell_table(n_max: int, bias: EdgeBias) -> BellTable:
    """Evaluate the Bell recursion up to n_max in O(n_max^2) time.

    Raises CapacityError if any log B_k overflows; a silent infinity would
    poison every ratio computed downstream.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    t = bias.t
    lf = log_factorials(n_max)
    log_b = np.zeros(n_max + 1)
    sizes = np.arange(1, n_max + 1, dtype=float)
    weights = _pair_exponent(t, sizes)
    if not np.all(np.isfinite(weights[1:])) and t != -math.inf:
        raise CapacityError(f"t*C(s,2) overflows for t={t}, n_max={n_max}")
    for n in range(1, n_max + 1):
        s = np.arange(1, n + 1)
        terms = lf[n - 1] - lf[s - 1] - lf[n - s] + weights[: n] + log_b[n - s]
        if t == -math.inf:
            terms = terms[:1]
        value = logsumexp(terms)
        if not math.isfinite(value):
            raise CapacityError(f"log B_{n} is not finite at t={t}")
        log_b[n] = value
    log_b.setflags(write=False)
    lf.setflags(write=False)
    return BellTable(n_max=n_max, bias=bias, log_b=log_b, log_fact=lf)


def log_bell_ratio(table: BellTable, n: int, s: int) -> float:
    """log(B_{n-s} / B_n) at the table's bias."""
    if not (0 <= s <= n):
        raise IndexError(f"need 0 <= s <= n, got s={s}, n={n}")
    table._check(n)
    return float(table.log_b[n - s] - table.log_b[n])


def bell_polynomial_coefficients(n: int) -> list[int]:
    """Exact integer coefficients of B_n(w), index = edge count.

    Same recursion as build_bell_table, carried out on integer polynomials.
    Cost grows like n^4, so keep n modest (a few dozen).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    polys: list[list[int]] = [[1]]
    for k in range(1, n + 1):
        out = [0] * (k * (k - 1) // 2 + 1)
        for s in range(1, k + 1):
            shift = s * (s - 1) // 2
            c = math.comb(k - 1, s - 1)
            for m, a in enumerate(polys[k - s]):
                out[m + shift] += c * a
        polys.append(out)
    return polys[n]
