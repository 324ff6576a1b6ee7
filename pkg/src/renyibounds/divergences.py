"""Order-alpha divergences with the 1/(alpha (alpha - 1)) normalization.

For probability measures nu, theta and alpha outside {0, 1},

    R_alpha(nu || theta)
        = 1/(alpha (alpha - 1)) * log int_{nu' theta' > 0} (nu'/theta')^alpha d theta,

set to +inf when alpha > 1 and nu is not absolutely continuous with
respect to theta, and extended to alpha < 0 through the skew identity
R_alpha(nu || theta) = R_{1-alpha}(theta || nu). With this scaling the
divergence is nonnegative for every admissible alpha, tends to the
Kullback-Leibler divergence as alpha -> 1, and alpha * R_alpha is
nondecreasing in alpha.

The discrete evaluation works on the shared labelled support of two
FiniteMeasure objects and stays in the log domain, so orders in the
hundreds are fine. Gaussian and Poisson marginals get closed-form and
series evaluations used by the application studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import FiniteMeasure, logsumexp

__all__ = [
    "GaussianParams",
    "PoissonParams",
    "DivergenceBudget",
    "renyi_discrete",
    "kl_discrete",
    "renyi_gaussian",
    "renyi_poisson",
    "renyi_product_average",
    "renyi_bm_drift",
]

_ALPHA_EXCLUSION = 1e-8


def check_alpha(alpha: float) -> float:
    """Reject orders within 1e-8 of the removable points 0 and 1."""
    a = float(alpha)
    if not math.isfinite(a):
        raise ValueError("alpha must be finite")
    if min(abs(a), abs(a - 1.0)) <= _ALPHA_EXCLUSION:
        raise ValueError("alpha must stay away from 0 and 1 (use the KL limit instead)")
    return a


@dataclass(frozen=True)
class GaussianParams:
    mean: float
    variance: float

    def __post_init__(self) -> None:
        m, v = float(self.mean), float(self.variance)
        if not (math.isfinite(m) and math.isfinite(v) and v > 0.0):
            raise ValueError("Gaussian needs a finite mean and a positive finite variance")
        object.__setattr__(self, "mean", m)
        object.__setattr__(self, "variance", v)


@dataclass(frozen=True)
class PoissonParams:
    rate: float

    def __post_init__(self) -> None:
        r = float(self.rate)
        if not (math.isfinite(r) and r > 0.0):
            raise ValueError("Poisson rate must be positive and finite")
        object.__setattr__(self, "rate", r)


@dataclass(frozen=True)
class DivergenceBudget:
    """Budgets d1 >= R_alpha(theta || nu) and d2 >= R_{alpha-1}(nu || theta)."""

    d1: float
    d2: float

    def __post_init__(self) -> None:
        for name, v in (("d1", float(self.d1)), ("d2", float(self.d2))):
            if math.isnan(v) or v < 0.0:
                raise ValueError(f"budget {name} must be nonnegative (inf allowed)")
        object.__setattr__(self, "d1", float(self.d1))
        object.__setattr__(self, "d2", float(self.d2))


def renyi_log_integral_rows(log_num: np.ndarray, log_den: np.ndarray, alpha: float) -> np.ndarray:
    """Row-wise log int (num'/den')^alpha d den on a shared finite support.

    log_num and log_den broadcast against each other; the last axis runs
    over atoms. Atoms with zero mass under both measures are dropped.
    The remaining -inf arithmetic encodes the support conventions on its
    own: a numerator atom outside the denominator support drives the sum
    to +inf when alpha > 1, the joint-support restriction happens
    automatically when 0 < alpha < 1, and for alpha < 0 the roles of the
    two measures swap exactly as in the skew identity.
    """
    ln = np.asarray(log_num, dtype=float)
    lt = np.asarray(log_den, dtype=float)
    with np.errstate(invalid="ignore"):
        w = alpha * ln + (1.0 - alpha) * lt
    both_zero = np.isneginf(ln) & np.isneginf(lt)
    if np.any(both_zero):
        w = np.where(both_zero, -math.inf, w)
    return logsumexp(w, axis=-1)


def _shared_support(nu: FiniteMeasure, theta: FiniteMeasure) -> None:
    if nu.labels != theta.labels:
        raise ValueError("measures must live on the same labelled support")


def renyi_discrete(nu: FiniteMeasure, theta: FiniteMeasure, alpha: float) -> float:
    """R_alpha(nu || theta) on a shared finite support.

    Returns +inf when alpha > 1 and nu charges an atom theta does not,
    and when 0 < alpha < 1 and the measures are mutually singular.
    """
    alpha = check_alpha(alpha)
    _shared_support(nu, theta)
    if alpha < 0.0:
        return renyi_discrete(theta, nu, 1.0 - alpha)
    s = float(renyi_log_integral_rows(nu.log_weights, theta.log_weights, alpha))
    denom = alpha * (alpha - 1.0)
    if s == -math.inf:
        # only reachable for 0 < alpha < 1: empty joint support
        return math.inf
    return s / denom


def kl_discrete(nu: FiniteMeasure, theta: FiniteMeasure) -> float:
    """Kullback-Leibler divergence, the alpha -> 1 limit of R_alpha."""
    _shared_support(nu, theta)
    mask = nu.support_mask()
    if np.any(np.isneginf(theta.log_weights[mask])):
        return math.inf
    diff = nu.log_weights[mask] - theta.log_weights[mask]
    return float(np.sum(np.exp(nu.log_weights[mask]) * diff))


def renyi_gaussian(theta1: GaussianParams, nu1: GaussianParams, alpha: float) -> float:
    """Closed form R_alpha(theta1 || nu1) for scalar Gaussians.

    With s1^2 the numerator variance, s2^2 the denominator variance and
    s_alpha^2 = alpha s2^2 + (1 - alpha) s1^2,

        R_alpha = (1/alpha) log(s2/s1)
                + 1/(2 alpha (alpha - 1)) log(s2^2 / s_alpha^2)
                + (m1 - m2)^2 / (2 s_alpha^2),

    valid while s_alpha^2 > 0 and +inf otherwise.
    """
    alpha = check_alpha(alpha)
    v1, v2 = theta1.variance, nu1.variance
    va = alpha * v2 + (1.0 - alpha) * v1
    if va <= 0.0:
        return math.inf
    dm = theta1.mean - nu1.mean
    return (
        0.5 * math.log(v2 / v1) / alpha
        + 0.5 * math.log(v2 / va) / (alpha * (alpha - 1.0))
        + dm * dm / (2.0 * va)
    )


def renyi_poisson(theta1: PoissonParams, nu1: PoissonParams, alpha: float) -> float:
    """R_alpha(theta1 || nu1) for Poisson marginals by direct summation.

    The series over the support is summed in the log domain until the
    terms are negligible; both measures have full support on the
    nonnegative integers, so every real order outside {0, 1} is fine.
    """
    alpha = check_alpha(alpha)
    l1, l2 = theta1.rate, nu1.rate
    log_tilted = alpha * math.log(l1) + (1.0 - alpha) * math.log(l2)
    tilted = math.exp(log_tilted)
    kmax = int(math.ceil(tilted + 40.0 * math.sqrt(tilted + 1.0) + 60.0))
    k = np.arange(kmax + 1, dtype=float)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, kmax + 1, dtype=float)))))
    w = -(alpha * l1 + (1.0 - alpha) * l2) + k * log_tilted - log_fact
    return float(logsumexp(w)) / (alpha * (alpha - 1.0))


def renyi_product_average(marginal_divergences) -> float:
    """Per-coordinate average of marginal divergences of a product.

    Divergences are additive over independent coordinates, so the
    normalized divergence of an n-fold product is the plain average of
    the marginal values; any infinite coordinate makes the result +inf.
    """
    vals = np.asarray(list(marginal_divergences), dtype=float)
    if vals.size == 0:
        raise ValueError("need at least one marginal divergence")
    if np.any(np.isnan(vals)) or np.any(vals < 0.0):
        raise ValueError("marginal divergences must be nonnegative")
    return float(np.mean(vals))


def renyi_bm_drift(mu: float) -> float:
    """Path divergence budget mu^2/2 for unit-time Brownian drift mu.

    By the Girsanov likelihood ratio the divergence between the drifted
    and driftless Wiener measures on a unit horizon equals mu^2/2 at
    every admissible order and in both argument orders. For a state
    dependent drift bounded by |mu| the same value is an upper bound, so
    it doubles as a certified budget for bounded-drift diffusions.
    """
    mu = float(mu)
    if not math.isfinite(mu):
        raise ValueError("drift must be finite")
    return 0.5 * mu * mu
