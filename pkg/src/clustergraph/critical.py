"""The critical sequence p_n(q): the bias at which P(single clique) = q.

With g(t) = C(n,2) t - log B_n(e^t) we have P(C = 1) = e^g(t) and
g'(t) = C(n,2) - E[M] > 0, so the equation g(t) = log q has one root.
It is found by Newton steps kept inside a bisection bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from clustergraph.bellcore import EdgeBias, build_bell_table
from clustergraph.exactdist import expected_edges

MAX_ITER = 200


class ConvergenceError(ArithmeticError):
    """Root finder gave up; ``bracket`` is the last interval known to hold the root."""

    def __init__(self, message: str, bracket: tuple[float, float]) -> None:
        super().__init__(message)
        self.bracket = bracket


@dataclass(frozen=True)
class CriticalResult:
    n: int
    q: float
    t_star: float
    p_star: float
    iterations: int
    residual: float


def p_of_t(t: float) -> float:
    """Inverse of t = log(p/(1-p))."""
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def _log_bell(n: int, t: float) -> float:
    return float(build_bell_table(n, EdgeBias(t)).log_b[n])


def solve_critical(n: int, q: float = 0.5, tol: float = 1e-10) -> CriticalResult:
    """Solve C(n,2) t - log B_n(e^t) = log q for t.

    Newton starts at t_0 = (log B_n(1) + log q)/C(n,2), the lower bound that
    holds whenever the root is nonnegative, and the bracket's upper end is
    log n!/C(n,2) + 1.  Either end is widened if it fails to bracket (which
    only happens for q below 1/B_n).  A Newton step leaving the bracket is
    replaced by bisection.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not (0 < q < 1):
        raise ValueError("q must lie in (0, 1)")
    pairs = n * (n - 1) / 2
    log_q = math.log(q)

    def f_and_slope(t: float) -> tuple[float, float]:
        table = build_bell_table(n, EdgeBias(t))
        return pairs * t - table.log_b[n] - log_q, pairs - expected_edges(table, n)

    t0 = (_log_bell(n, 0.0) + log_q) / pairs
    lo, hi = t0, math.lgamma(n + 1) / pairs + 1.0
    f_lo = f_and_slope(lo)[0]
    while f_lo > 0:
        lo -= max(1.0, abs(lo))
        f_lo = f_and_slope(lo)[0]
    f_hi = f_and_slope(hi)[0]
    while f_hi < 0:
        hi += max(1.0, abs(hi))
        f_hi = f_and_slope(hi)[0]

    t = t0 if lo == t0 else 0.5 * (lo + hi)
    for it in range(1, MAX_ITER + 1):
        f, slope = f_and_slope(t)
        f = float(f)
        if abs(f) < tol:
            return CriticalResult(n, q, float(t), p_of_t(t), it, float(abs(f)))
        if f < 0:
            lo = t
        else:
            hi = t
        step = t - f / slope if slope > 0 else math.nan
        t = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4 * math.ulp(max(abs(lo), abs(hi))):
            f = f_and_slope(t)[0]
            if abs(f) < tol:
                return CriticalResult(n, q, float(t), p_of_t(t), it, float(abs(f)))
            break
    raise ConvergenceError(f"no root to {tol} for n={n}, q={q}", (lo, hi))


def critical_bounds(n: int) -> tuple[float, float]:
    """(p_L, p_U) = (p(2(log n - log log n - 1)/n), p(2(log n - 1)/n))."""
    if n < 3:
        raise ValueError("bounds need n >= 3")
    ln = math.log(n)
    return p_of_t(2 * (ln - math.log(ln) - 1) / n), p_of_t(2 * (ln - 1) / n)


def solve_t_prime(n: int, tol: float = 1e-10) -> float:
    """Root of B_n(e^t) = n!, by bisection on [0, log n!/C(n,2)]."""
    if n < 2:
        raise ValueError("need n >= 2")
    target = math.lgamma(n + 1)
    lo, hi = 0.0, target / (n * (n - 1) / 2)
    g_lo = _log_bell(n, lo) - target
    if abs(g_lo) < tol:
        return lo
    mid = hi
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        g = _log_bell(n, mid) - target
        if abs(g) < tol or mid in (lo, hi):
            return mid
        if g < 0:
            lo = mid
        else:
            hi = mid
    return mid
