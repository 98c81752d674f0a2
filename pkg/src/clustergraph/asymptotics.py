"""Closed-form asymptotic predictions for every regime.

Critical regime (w = 1): Lambert W and the c_r = C_r(1, W(n)) calculus.
Subcritical regime (w < 1): the saddle point tau, the bounded functions
E_{w,r} and their periodic limits e_{w,l}.  Supercritical regime (w > 1): the
expansion of P(complete graph) in powers of w^-n.  Sparse regime: the
golden-ratio limit and the exponents of P(D = d').
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from clustergraph.bellcore import EdgeBias, build_bell_table, logsumexp
from clustergraph.exactdist import degree_pmf

DIRECT_TAIL = 1e-18
FOURIER_TAIL = 1e-18
SERIES_TAIL = 1e-16


# ---------------------------------------------------------------- Lambert W


def lambert_w(x: float) -> float:
    """Principal branch of W on [0, inf) by Halley iteration."""
    if x < 0 or math.isnan(x):
        raise ValueError(f"lambert_w needs x >= 0, got {x}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return math.inf
    w = math.log1p(x) if x < math.e else math.log(x) - math.log(math.log(x))
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        denom = ew * (w + 1) - (w + 2) * f / (2 * w + 2)
        step = f / denom
        w -= step
        if abs(step) <= 4e-16 * abs(w):
            break
    return w


# ------------------------------------------------------- c_r polynomials


@lru_cache(maxsize=None)
def cr_polynomial(r: int) -> tuple[int, ...]:
    """Coefficients (ascending) of P_r with P_1 = z and P_{r+1} = z P_r + z P_r'."""
    if r < 1:
        raise ValueError("P_r is defined for r >= 1")
    coeffs = [0, 1]
    for _ in range(r - 1):
        nxt = [0] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            nxt[k + 1] += a  # z * P
            if k:
                nxt[k] += k * a  # z * P'
        coeffs = nxt
    return tuple(coeffs)


def c_r(n: float, r: int) -> float:
    """C_r(1, W(n)) = P_r(W) e^W for r >= 1, and e^W - 1 for r = 0.

    Uses e^W = n/W, so c_1 = n up to rounding.
    """
    if r > 8:
        raise ValueError("c_r is supported for r <= 8")
    W = lambert_w(n)
    log_eW = math.log(n) - math.log(W)
    if r == 0:
        return math.expm1(W)
    poly = sum(a * W**k for k, a in enumerate(cr_polynomial(r)))
    return math.exp(math.log(poly) + log_eW)


@dataclass(frozen=True)
class RegimeMoments:
    """Predicted mean and variance of one statistic.

    ``other_*`` hold the companion form (the displayed leading terms, or for
    the degree the size-biased saddle-point form).  ``refined_mean`` is the
    saddle-point estimate of log B_n with its Gaussian prefactor kept,
    differentiated along the tilt; it carries the O(1) term the other forms
    drop.
    """

    regime: str
    mean: float
    variance: float
    other_mean: float = math.nan
    other_variance: float = math.nan
    refined_mean: float = math.nan


def critical_edge_moments(n: int) -> RegimeMoments:
    """Edge count at p = 1/2: mean (c_2 - c_1)/2 and variance (c_2 c_4 - c_3^2)/(4 c_2)."""
    if n < 2:
        raise ValueError("need n >= 2")
    c1, c2, c3, c4 = (c_r(n, r) for r in (1, 2, 3, 4))
    W = lambert_w(n)
    return RegimeMoments(
        "critical",
        (c2 - c1) / 2,
        (c2 * c4 - c3 * c3) / (4 * c2),
        n * W / 2,
        n * W * W / 4,
    )


def bell_asymptotic(n: int) -> float:
    """Saddle-point estimate of log(B_n / n!) at w = 1, with r = W(n+1).

    B_n/n! ~ exp(e^r - 1) / (r^n sqrt(2 pi r (r+1) e^r)); the e^r belongs under
    the square root (it is the saddle-point variance r(r+1)e^r).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    r = lambert_w(n + 1)
    return math.expm1(r) - n * math.log(r) - 0.5 * math.log(2 * math.pi * r * (r + 1)) - r / 2


# --------------------------------------------------------- theta-type sums


def _log_scale(w: float) -> float:
    if not (0 < w < 1):
        raise ValueError(f"w must lie in (0, 1), got {w}")
    return -math.log(w)


def _csum(terms: list[complex]) -> complex:
    return complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))


def _theta_direct(w: float, ell: int, tau: float, theta: float) -> complex:
    L = _log_scale(w)
    peak = math.sqrt(ell / L)
    k0 = round(tau)
    terms: list[complex] = []
    mass = 0.0
    for direction in (1, -1):
        k = k0 if direction == 1 else k0 - 1
        while True:
            t = k - tau
            mag = abs(t) ** ell * math.exp(-L * t * t / 2)
            terms.append(t**ell * math.exp(-L * t * t / 2) * cmath.exp(1j * t * theta))
            mass += mag
            if abs(t) > peak + 1 and mag < DIRECT_TAIL * mass:
                break
            k += direction
    return _csum(terms)


def _theta_fourier(w: float, ell: int, tau: float, theta: float) -> complex:
    L = _log_scale(w)
    rootL = math.sqrt(L)
    # Gaussian factor exp(-(2 pi s + theta)^2 / (2L)) below FOURIER_TAIL
    reach = math.sqrt(-2 * L * math.log(FOURIER_TAIL)) / (2 * math.pi)
    centre = -theta / (2 * math.pi)
    s_lo, s_hi = math.floor(centre - reach) - 1, math.ceil(centre + reach) + 1
    terms = []
    for s in range(s_lo, s_hi + 1):
        xi = 2 * math.pi * s + theta
        gauss = math.exp(-xi * xi / (2 * L))
        if gauss < FOURIER_TAIL:
            continue
        inner = sum(
            math.comb(ell, 2 * j)
            * math.factorial(2 * j)
            / (2**j * math.factorial(j))
            * (1j * xi / rootL) ** (ell - 2 * j)
            for j in range(ell // 2 + 1)
        )
        terms.append(gauss * inner * cmath.exp(2j * math.pi * s * tau))
    return math.sqrt(2 * math.pi / L ** (ell + 1)) * _csum(terms)


def e_w_ell(w: float, ell: int, tau: float, theta: float = 0.0, method: str = "fourier") -> complex:
    """e_{w,l}(tau, theta) = sum over t with t + tau integer of t^l w^(t^2/2) e^(i t theta).

    ``direct`` sums the lattice series outward from t near 0; ``fourier`` uses
    its Poisson-summation dual, which converges like exp(-2 pi^2 s^2 / log(1/w)).
    """
    if method == "direct":
        return _theta_direct(w, ell, tau, theta)
    if method == "fourier":
        return _theta_fourier(w, ell, tau, theta)
    raise ValueError(f"unknown method {method!r}")


def theta_epsilon(w: float) -> float:
    """exp(-2 pi^2 / log(1/w)), the size of the first Fourier harmonic."""
    return math.exp(-2 * math.pi**2 / _log_scale(w))


def E_w_r(w: float, r: int, tau: float, theta: float = 0.0) -> complex:
    """E_{w,r}(tau, theta), the bounded factor in C_r(w, tau (1/w)^(tau - 1/2)).

    Summed in the equivalent form
        e^-tau sum_{k>=1} (k/tau)^r e^(i(k-tau)theta) w^((k-tau)^2/2) tau^k sqrt(2 pi tau)/k!,
    with logs of each term to avoid overflow.
    """
    L = _log_scale(w)
    if tau <= 0:
        raise ValueError("tau must be positive")
    lt = math.log(tau)
    base = -tau + 0.5 * math.log(2 * math.pi * tau)

    def logterm(k: int) -> float:
        return base + r * (math.log(k) - lt) - L * (k - tau) ** 2 / 2 + k * lt - math.lgamma(k + 1)

    k0 = max(1, round(tau))
    terms = []
    top = logterm(k0)
    for direction in (1, -1):
        k = k0 if direction == 1 else k0 - 1
        while k >= 1:
            lg = logterm(k)
            top = max(top, lg)
            terms.append(cmath.exp(lg + 1j * (k - tau) * theta))
            if abs(k - tau) > 2 and lg < top + math.log(DIRECT_TAIL):
                break
            k += direction
    return _csum(terms)


def expansion_coefficients(r: float) -> list[list[float]]:
    """a_{k,l}(r) for k = 0, 1, 2 (rows have 2k + 1 entries).

    Row k = 2 was re-derived by series expansion; its l = 1 entry is
    1/8 - r/12.
    """
    return [
        [1.0],
        [-1 / 12, r - 0.5, -0.5],
        [1 / 288, 1 / 8 - r / 12, r * r / 2 - r + 5 / 12, 5 / 12 - r / 2, 1 / 8],
    ]


def E_w_r_expansion(w: float, r: int, tau: float, theta: float = 0.0, K: int = 3) -> complex:
    """sum_{k<K} tau^-k sum_l a_{k,l}(r) e_{w,l}(tau, theta)."""
    if not (1 <= K <= 3):
        raise ValueError("K must be 1, 2 or 3")
    rows = expansion_coefficients(r)
    e = [e_w_ell(w, ell, tau, theta) for ell in range(2 * K - 1)]
    return sum(tau**-k * sum(a * e[ell] for ell, a in enumerate(rows[k])) for k in range(K))


# ------------------------------------------------------------ saddle point


def log_C_r(w: float, gamma: float, r: int) -> float:
    """log C_r(w, e^gamma) = log sum_{k>=1} k^r w^C(k,2) e^(gamma k) / k!, tail below 1e-16."""
    L = _log_scale(w)
    size = 64
    while True:
        k = np.arange(1, size + 1, dtype=float)
        logs = r * np.log(k) - L * k * (k - 1) / 2 + gamma * k - np.array([math.lgamma(x + 1) for x in k])
        peak = int(np.argmax(logs))
        if peak < size - 1 and logs[-1] < logs[peak] + math.log(SERIES_TAIL) - 5:
            return logsumexp(logs)
        size *= 2


@dataclass(frozen=True)
class SaddlePoint:
    w: float
    n: float
    s: float
    gamma: float
    tau: float


def _solve_gamma(w: float, log_target: float) -> float:
    """gamma with log C_1(w, e^gamma) = log_target, by bisection."""
    hi = log_target  # C_1 >= e^gamma, so log C_1(log_target) >= log_target
    lo = log_target - 1.0
    while log_C_r(w, lo, 1) > log_target:
        lo -= 2 * (hi - lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if log_C_r(w, mid, 1) < log_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def tau_of_n(w: float, n: float, s: float = 0.0) -> SaddlePoint:
    """Solve C_1(w, e^gamma) = n e^-s for gamma, then
    tau = W(log(1/w) e^gamma / sqrt(w)) / log(1/w), so that tau (1/w)^(tau-1/2) = e^gamma.
    """
    L = _log_scale(w)
    if n < 2:
        raise ValueError("need n >= 2")
    gamma = _solve_gamma(w, math.log(n) - s)
    tau = lambert_w(math.exp(math.log(L) + 0.5 * L + gamma)) / L
    return SaddlePoint(w, n, s, gamma, tau)


def _saddle_log_coefficient(w: float, n: float, clique_tilt: float, edge_tilt: float) -> float:
    """log(n! [z^n] exp(e^a C(w e^b, z))) - log n! up to a constant, by the saddle point.

    a = clique_tilt, b = edge_tilt.  Keeps the Gaussian factor
    -1/2 log(e^a C_2) at the saddle e^a C_1(w e^b, zeta) = n.
    """
    wb = w * math.exp(edge_tilt)
    g = _solve_gamma(wb, math.log(n) - clique_tilt)
    return (
        math.exp(clique_tilt + log_C_r(wb, g, 0))
        - n * g
        - 0.5 * (clique_tilt + log_C_r(wb, g, 2))
    )


def refined_means(w: float, n: float, h: float = 1e-4) -> tuple[float, float]:
    """(E[C], E[M]) from the tilt derivatives of the saddle-point estimate."""
    f = _saddle_log_coefficient
    mean_c = (f(w, n, h, 0.0) - f(w, n, -h, 0.0)) / (2 * h)
    mean_m = (f(w, n, 0.0, h) - f(w, n, 0.0, -h)) / (2 * h)
    return mean_c, mean_m


def tau_residual(sp: SaddlePoint) -> float:
    """|C_1(w, tau (1/w)^(tau-1/2)) - n e^-s| / n."""
    L = _log_scale(sp.w)
    gamma = math.log(sp.tau) + (sp.tau - 0.5) * L
    return abs(math.exp(log_C_r(sp.w, gamma, 1)) - sp.n * math.exp(-sp.s)) / sp.n


def tau_rough(w: float, n: float) -> float:
    """sqrt(2 log n / log(1/w)) - 1/log(1/w), the leading behaviour of tau."""
    L = _log_scale(w)
    return math.sqrt(2 * math.log(n) / L) - 1 / L


def _E_real(w: float, tau: float, rs) -> list[float]:
    return [E_w_r(w, r, tau).real for r in rs]


def _e_real(w: float, tau: float, ells) -> list[float]:
    return [e_w_ell(w, ell, tau).real for ell in ells]


def subcritical_clique_moments(w: float, n: float) -> RegimeMoments:
    """Clique count for w < 1.

    mean = (n/tau) E_0/E_1 (this is C(w, e^gamma)); variance is the leading
    (n/tau^3)(e_0 e_2 - e_1^2)/e_0^2.  The companion pair is
    n sqrt(log(1/w) / (2 log n)) and (n/tau)(E_0/E_1 - E_1/E_2).
    """
    tau = tau_of_n(w, n).tau
    E0, E1, E2 = _E_real(w, tau, (0, 1, 2))
    e0, e1, e2 = _e_real(w, tau, (0, 1, 2))
    L = _log_scale(w)
    return RegimeMoments(
        "subcritical-cliques",
        n / tau * E0 / E1,
        n / tau**3 * (e0 * e2 - e1 * e1) / (e0 * e0),
        n * math.sqrt(L / (2 * math.log(n))),
        n / tau * (E0 / E1 - E1 / E2),
        refined_means(w, n)[0],
    )


def subcritical_edge_moments(w: float, n: float) -> RegimeMoments:
    """Edge count for w < 1.

    mean = (C_2 - C_1)/2 = (n/2)(tau E_2/E_1 - 1), variance = (C_2 C_4 - C_3^2)/(4 C_2),
    all at the saddle point with C_1 = n.  The companion pair is the leading
    n sqrt(log n / (2 log(1/w))) and (n tau / 4)(e_0 e_2 - e_1^2)/e_0^2.  In
    C_2 C_4 - C_3^2 the orders tau^0 and tau^-1 cancel, so the variance grows
    like n tau, i.e. n sqrt(log n).
    """
    tau = tau_of_n(w, n).tau
    E1, E2, E3, E4 = _E_real(w, tau, (1, 2, 3, 4))
    e0, e1, e2 = _e_real(w, tau, (0, 1, 2))
    L = _log_scale(w)
    ln = math.log(n)
    return RegimeMoments(
        "subcritical-edges",
        n / 2 * (tau * E2 / E1 - 1),
        n * tau**3 * (E2 * E4 - E3 * E3) / (4 * E1 * E2),
        n * math.sqrt(ln / (2 * L)),
        n * tau / 4 * (e0 * e2 - e1 * e1) / (e0 * e0),
        refined_means(w, n)[1],
    )


def subcritical_degree_moments(w: float, n: float) -> RegimeMoments:
    """Degree of a uniform vertex for w < 1.

    mean = tau - 1 + e_1/e_0, variance = e_2/e_0 - (e_1/e_0)^2.  The companion
    pair is the size-biased saddle-point law: C_2/C_1 - 1 and
    C_3/C_1 - (C_2/C_1)^2.  Since the degrees sum to 2M, the refined mean
    is 2 E[M] / n.
    """
    tau = tau_of_n(w, n).tau
    e0, e1, e2 = _e_real(w, tau, (0, 1, 2))
    E1, E2, E3 = _E_real(w, tau, (1, 2, 3))
    return RegimeMoments(
        "subcritical-degree",
        tau - 1 + e1 / e0,
        e2 / e0 - (e1 / e0) ** 2,
        tau * E2 / E1 - 1,
        tau * tau * (E3 / E1 - (E2 / E1) ** 2),
        2 * refined_means(w, n)[1] / n,
    )


def discrete_gaussian_pmf(w: float, lam: float, d: int) -> float:
    """P(X = d) = w^((d - lam)^2/2) / e_{w,0}(lam, 0) on the integers."""
    if not (0 <= lam < 1):
        raise ValueError("lambda must lie in [0, 1)")
    L = _log_scale(w)
    norm = e_w_ell(w, 0, lam, 0.0, method="direct").real
    return math.exp(-L * (d - lam) ** 2 / 2) / norm


# -------------------------------------------------- critical degree limit


def poisson_tv(n: int) -> float:
    """Total variation between the degree law at p = 1/2 and Poisson(W(n))."""
    if n < 2:
        raise ValueError("need n >= 2")
    pmf = degree_pmf(build_bell_table(n, EdgeBias(0.0)), n).probs
    lam = lambert_w(n)
    d = np.arange(n, dtype=float)
    logq = d * math.log(lam) - lam - np.array([math.lgamma(x + 1) for x in d])
    q = np.exp(logq)
    outside = max(0.0, 1.0 - math.fsum(q))
    return 0.5 * (math.fsum(np.abs(pmf - q)) + outside)


# ------------------------------------------------------------ sparse regime


def sparse_degree_limit(lam: float) -> tuple[float, float]:
    """Limit (P(D=0), P(D=1)) when p ~ lam/n; golden-ratio reciprocal at lam = 1."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    p0 = 2 / (math.sqrt(4 * lam + 1) + 1)  # (sqrt(4 lam + 1) - 1)/(2 lam), without the cancellation
    return p0, 1 - p0


def sparse_exponent(d: int, d_prime: int) -> float:
    """Exponent a in P(D = d') = n^(-a + o(1)) when p = n^(-2/(d+1)^2)."""
    return ((d_prime - d) / (d + 1)) ** 2


# ------------------------------------------------------ supercritical regime


def supercritical_terms(w: float, n: int) -> list[float]:
    """[P_1(n), P_2(n)] of the w^-n expansion of P(complete graph)."""
    return [-w * n, w * w / 2 * ((w * w + w) * n + (2 - w - w * w) * n * n)]


def supercritical_complete_prob(w: float, n: int, order: int = 2) -> float:
    """1 + sum_{m=1}^{order-1} w^(-m n) P_m(n)."""
    if w <= 1:
        raise ValueError("supercritical expansion needs w > 1")
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    terms = supercritical_terms(w, n)
    return 1.0 + sum(w ** (-(m + 1) * n) * terms[m] for m in range(order - 1))


def exact_complete_prob_gap(w: int | Fraction, n: int) -> Fraction:
    """1 - w^C(n,2)/B_n(w) in exact rational arithmetic."""
    from clustergraph.bellcore import bell_polynomial_coefficients

    coeffs = bell_polynomial_coefficients(n)
    w = Fraction(w)
    total = sum(c * w**m for m, c in enumerate(coeffs))
    return 1 - w ** (n * (n - 1) // 2) / total
