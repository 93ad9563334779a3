"""Closed-form calculators for the analytical error and threshold bounds.

Everything here is a pure function of the model parameters.  Natural
logarithms are used wherever a bound involves exp(-x); the achievability
region axes are log-base-n ratios and therefore base-independent.
Asymptotic conditions are reported as finite-n ratios with configurable
constants (default 1), never enforced inside the aligner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import DegreeSequence
from .models import ProbVector


@dataclass(frozen=True)
class BoundInputs:
    """Parameter bundle for the calculators below.

    Only n and p are always required; h, eta, and k are validated by the
    operations that use them.
    """

    n: int
    p: ProbVector
    h: int | None = None
    eta: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")

    def rho(self) -> float:
        return rho(self.p)

    def h_threshold(self, slack: float) -> int:
        return h_threshold(self.n, self.p, slack)

    def region_check(self, c1: float = 1.0, c2: float = 1.0):
        return theorem_region_check(self.n, self.p, self.h, c1, c2)


def q0_q1(p: ProbVector) -> tuple[float, float]:
    """Per-anchor probabilities of the signature-distance gap moving
    toward (q0) or against (q1) the true match."""
    q0 = p.p00 * p.p1s + p.p11 * p.p0s
    q1 = p.p10 * p.p0s + p.p01 * p.p1s
    return q0, q1


def rho(p: ProbVector) -> float:
    """Correlation strength sqrt(q0) - sqrt(q1).

    Controls the per-pair misalignment bound 2*exp(-h*rho^2); negative
    for anti-correlated parameter vectors.
    """
    q0, q1 = q0_q1(p)
    return math.sqrt(q0) - math.sqrt(q1)


def misalignment_bound(p: ProbVector, h: int) -> float:
    """Upper bound on the probability that either of two vertices is at
    least as close to the other's signature as to its own."""
    return 2.0 * math.exp(-h * rho(p) ** 2)


def _noise_fractions(p: ProbVector) -> tuple[float, float]:
    if p.p1s <= 0.0 or p.p0s <= 0.0:
        raise ValueError("both marginals must be positive")
    return p.p10 / p.p1s, p.p01 / p.p0s


def phi_eps(n: int, p: ProbVector, d_u: float, dbar_v: float) -> tuple[float, float]:
    """Degree-drift scale phi and contraction eps for a vertex pair.

    phi = d_u*p10/p1* + dbar_v*p01/p0* is the expected number of edges
    lost by the higher-degree vertex plus gained by the lower-degree one
    when moving between the graphs; eps = p01/p0* + p10/p1*.
    """
    a, b = _noise_fractions(p)
    return d_u * a + dbar_v * b, a + b


def min_gap_for_tail(p: ProbVector, d_u: float, dbar_v: float, k: int, eta: float) -> float:
    """Degree gap sufficient for P[order-k inversion in the second graph] <= e^-eta."""
    a, b = _noise_fractions(p)
    phi = d_u * a + dbar_v * b
    eps = a + b
    if eps >= 1.0:
        raise ValueError("noise fractions too large: eps >= 1")
    return (k + 4.0 * max(eta, math.sqrt(phi * eta))) / (1.0 - eps)


@dataclass(frozen=True)
class AnchorFailureReport:
    """Outcome of the top-of-sequence gap condition check."""

    bound: float
    s: int
    required_gap: float
    holds: bool
    violated: tuple[int, ...]


def anchor_failure_bound(
    n: int,
    p: ProbVector,
    h: int,
    eta: float,
    k: int,
    delta_a: DegreeSequence | np.ndarray,
) -> AnchorFailureReport:
    """Failure probability bound for rank-matching the top h degrees.

    Checks the per-index gap condition on the first s entries of the
    first graph's degree sequence, with phi evaluated at the observed
    maximum degree and complementary degree n.  When every gap holds,
    the anchor lists of the two graphs coincide (and keep order-k
    separation) except with probability at most the returned bound;
    violated 1-based indices are flagged otherwise.
    """
    degrees = delta_a.degrees if isinstance(delta_a, DegreeSequence) else np.asarray(delta_a, dtype=np.int64)
    s = math.ceil(h + math.log(n / h) / eta + 1)
    if s > n:
        raise ValueError(f"s = {s} exceeds n = {n}")
    if degrees.size < s + 1:
        raise ValueError(f"need at least s+1 = {s + 1} leading degrees, got {degrees.size}")
    required = min_gap_for_tail(p, float(degrees[0]), float(n), k, eta)
    gaps = degrees[:s] - degrees[1 : s + 1]
    violated = tuple(int(i) for i in np.nonzero(gaps < required)[0] + 1)
    x = math.exp(-eta)
    bound = 1.0 - (1.0 - (2 * h + 1) * x) / (1.0 - x)
    return AnchorFailureReport(bound, s, required, not violated, violated)


def max_degree_bound(n: int, p_edge: float, eps: float) -> float:
    """High-probability cap p*n*(1+eps) on the maximum degree of ER(n, p)."""
    return p_edge * n * (1.0 + eps)


def bollobas_gap(n: int, p_edge: float, h: int, c: float) -> float:
    """Typical spacing scale of the top-h degree gaps in ER(n, p)."""
    if not 0.0 < p_edge < 1.0:
        raise ValueError("edge probability must lie strictly between 0 and 1")
    if h >= n:
        raise ValueError("h must be smaller than n")
    return c / h**2 * math.sqrt(n * p_edge * (1.0 - p_edge) / math.log(n))


def h_threshold(n: int, p: ProbVector, slack: float) -> int:
    """Signature length above which whole-graph matching succeeds:
    ceil((2*ln n + slack) / rho^2)."""
    r = rho(p)
    if r <= 0.0:
        raise ValueError("rho <= 0: alignment impossible by this bound")
    return math.ceil((2.0 * math.log(n) + slack) / r**2)


def default_anchor_count(n: int, p: ProbVector) -> int:
    """Default h: ceil(2*ln(n)/rho^2) clamped to [8, n//4]."""
    r = rho(p)
    if r <= 0.0:
        raise ValueError("rho <= 0: no usable default anchor count")
    raw = math.ceil(2.0 * math.log(n) / r**2)
    hi = max(1, n // 4)
    return min(max(raw, 8), hi)


@dataclass(frozen=True)
class ConditionReport:
    name: str
    ratio: float
    ok: bool


def theorem_region_check(
    n: int,
    p: ProbVector,
    h: int | None = None,
    c1: float = 1.0,
    c2: float = 1.0,
) -> tuple[ConditionReport, ...]:
    """Finite-n surrogates for the recovery conditions, as pass/fail ratios.

    Conditions: density p11 >= c1 * ln(n)^{7/5} / n^{1/5}; noise
    p01+p10 <= c2 * p11^5 / ln(n)^6; and the anchor-phase condition
    max{(ln h)^2, n(p01+p10) ln h} <= n p11^2 / (h^4 ln(n) p1*).
    Each ratio is left-hand side over right-hand side; ok means <= 1.
    """
    ln = math.log(n)
    inf = math.inf

    r1 = (c1 * ln**1.4 / n**0.2) / p.p11 if p.p11 > 0 else inf
    noise = p.p01 + p.p10
    rhs2 = c2 * p.p11**5 / ln**6
    r2 = noise / rhs2 if rhs2 > 0 else (0.0 if noise == 0.0 else inf)

    if h is None:
        try:
            h = default_anchor_count(n, p)
        except ValueError:
            h = None
    if h is None or h < 2 or p.p11 <= 0 or p.p1s <= 0:
        r3 = inf
    else:
        lhs = max(math.log(h) ** 2, n * noise * math.log(h))
        rhs3 = n * p.p11**2 / (h**4 * ln * p.p1s)
        r3 = lhs / rhs3 if rhs3 > 0 else inf

    return (
        ConditionReport("density p11", r1, r1 <= 1.0),
        ConditionReport("noise p01+p10", r2, r2 <= 1.0),
        ConditionReport("anchor separation", r3, r3 <= 1.0),
    )


@dataclass(frozen=True)
class RegionPoint:
    """Achievability-map coordinates: x = log p01 / log n, y = log p11 / log n."""

    x: float
    y: float


def in_region_a(pt: RegionPoint) -> bool:
    """Isomorphism regime: no edge differences, dense enough to label."""
    return pt.x <= -2.0 and pt.y >= -0.2


def in_region_b(pt: RegionPoint) -> bool:
    """Adversarial edge-change regime beyond the isomorphism strip."""
    return pt.x >= -2.0 and (9.0 / 7.0) * pt.x <= pt.y - 17.0 / 7.0


def in_region_c(pt: RegionPoint) -> bool:
    """Random-model regime for this algorithm: y >= -1/5 and x <= 5y."""
    return pt.y >= -0.2 and pt.x <= 5.0 * pt.y


def in_region_d(pt: RegionPoint) -> bool:
    """Information-theoretic achievability: y >= -1 and 2x <= y."""
    return pt.y >= -1.0 and 2.0 * pt.x <= pt.y


def fig1_region(pt: RegionPoint) -> str:
    """Classify a point by the innermost nested region containing it.

    The finite-n surrogate drops o(1) terms; returns one of
    "A", "B", "C", "D", "outside".
    """
    if in_region_a(pt):
        return "A"
    if in_region_b(pt):
        return "B"
    if in_region_c(pt):
        return "C"
    if in_region_d(pt):
        return "D"
    return "outside"


def pgf_beta(p: ProbVector, d_u_prime: int, d_v_prime: int, n: int, z: float) -> float:
    """Generating function E[z^beta] of the cross-graph degree gap.

    beta is the degree gap in the second graph between two vertices whose
    degrees in the first graph (with their shared pair excluded) are
    d_u_prime and d_v_prime.  The four factors are the PGFs of the
    independent binomial edge-loss/gain counts.
    """
    if z <= 0.0:
        raise ValueError("z must be positive")
    a, b = _noise_fractions(p)
    alpha = d_u_prime - d_v_prime
    cu = n - 2 - d_u_prime
    cv = n - 2 - d_v_prime
    return (
        z**alpha
        * (1.0 + a * (z - 1.0)) ** d_v_prime
        * (1.0 + b * (z - 1.0)) ** cu
        * (1.0 + a * (1.0 / z - 1.0)) ** d_u_prime
        * (1.0 + b * (1.0 / z - 1.0)) ** cv
    )


def pgf_gamma(p: ProbVector, h: int, z: float) -> float:
    """Generating function E[z^gamma] of the relative signature distance.

    gamma is the Hamming-distance margin separating a vertex's true match
    from an impostor; each of the h anchors contributes an i.i.d. step in
    {-1, 0, +1} with probabilities (q1, 1-q0-q1, q0).
    """
    if z <= 0.0:
        raise ValueError("z must be positive")
    q0, q1 = q0_q1(p)
    bracket = 1.0 + q0 * (z - 1.0) + q1 * (1.0 / z - 1.0)
    if bracket <= 0.0:
        raise ValueError("bracket is non-positive at this z")
    return bracket**h


def degree_inversion_frequency(
    p: ProbVector,
    d_u_prime: int,
    d_v_prime: int,
    n: int,
    k: int,
    trials: int,
    seed,
) -> float:
    """Monte Carlo frequency of a cross-graph order-k degree inversion.

    Samples the exact conditional law of the second-graph degree gap:
    beta = alpha - e_a_u + e_a_v + e_b_u - e_b_v with the four counts
    independent binomials.  Companion experiment for min_gap_for_tail.
    """
    a, b = _noise_fractions(p)
    rng = np.random.Generator(np.random.PCG64(seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)))
    alpha = d_u_prime - d_v_prime
    e_a_u = rng.binomial(d_u_prime, a, trials)
    e_a_v = rng.binomial(d_v_prime, a, trials)
    e_b_u = rng.binomial(n - 2 - d_u_prime, b, trials)
    e_b_v = rng.binomial(n - 2 - d_v_prime, b, trials)
    beta = alpha - e_a_u + e_a_v + e_b_u - e_b_v
    return float(np.count_nonzero(beta <= k)) / trials
