"""Scalar special functions and small numerical routines.

Everything downstream that needs erfc, log I0, a one dimensional
minimizer, or an endpoint-singular convolution goes through this module,
so the implementations here are deliberately self contained: series plus
continued fraction for the error function, series plus asymptotic
expansion for the Bessel term, golden section search, and a composite
Simpson rule on square-root-substituted grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Bracket",
    "ConvergenceError",
    "ConvolveResult",
    "erfc",
    "log_erfc",
    "log_bessel_i0",
    "minimize_scalar",
    "convolve_at",
]

_SQRT_PI = 1.7724538509055160273
_EPS = 2.220446049250313e-16
_FPMIN = 1e-300

# Branch point between the error-function power series and the continued
# fraction. The continued fraction for the upper incomplete gamma needs
# z = x*x comfortably above a + 1 = 1.5; at x = 1.25, z = 1.5625.
_ERFC_SPLIT = 1.25


class ConvergenceError(RuntimeError):
    """An iterative routine failed to reach its tolerance."""


@dataclass(frozen=True)
class Bracket:
    """Closed search interval [lo, hi] for scalar minimization."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bracket endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"bracket must satisfy lo < hi, got [{self.lo}, {self.hi}]")


def _erf_small(x: float) -> float:
    # erf(x) = P(1/2, x^2) via the regularized lower incomplete gamma
    # series. All terms are positive, so there is no cancellation.
    z = x * x
    ap = 0.5
    total = 2.0  # 1/a
    term = 2.0
    for _ in range(500):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            # x e^{-z} / sqrt(pi); only ever called with 0 < x < _ERFC_SPLIT,
            # where this form neither overflows nor loses digits (and unlike
            # the log form it survives x*x underflowing to zero).
            return total * x * math.exp(-z) / _SQRT_PI
    raise ConvergenceError("erf series did not converge")


def _erfc_cf_factor(x: float) -> float:
    # Modified Lentz evaluation of the continued fraction h with
    # Q(1/2, x^2) = x * exp(-x^2) * h / sqrt(pi). Requires x >= _ERFC_SPLIT.
    z = x * x
    a = 0.5
    b = z + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delt = d * c
        h *= delt
        if abs(delt - 1.0) < _EPS:
            return h
    raise ConvergenceError("erfc continued fraction did not converge")


def erfc(x: float) -> float:
    """Complementary error function, (2/sqrt(pi)) * int_x^inf exp(-v^2) dv.

    Relative accuracy is a few ulp over the range used by the bound
    studies (|x| up to roughly 25; beyond that use log_erfc).
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("erfc: nan argument")
    if x == 0.0:
        return 1.0
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x < _ERFC_SPLIT:
        return 1.0 - _erf_small(x)
    return x * math.exp(-x * x) * _erfc_cf_factor(x) / _SQRT_PI


def log_erfc(x: float) -> float:
    """log(erfc(x)) without underflow for large positive x.

    For x >= 1.25 the continued fraction gives the scaled value
    exp(x^2) * erfc(x) directly, so the logarithm stays finite out to
    arbitrarily large arguments. Needed by the drifted level-crossing
    probability, where exp(2*mu*K) * erfc(...) must be formed in the
    log domain.
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("log_erfc: nan argument")
    if x < _ERFC_SPLIT:
        return math.log(erfc(x))
    return -x * x + math.log(x * _erfc_cf_factor(x) / _SQRT_PI)


def log_bessel_i0(x: float) -> float:
    """log I0(x) for x >= 0, in the log domain throughout.

    Power series below x = 15, asymptotic expansion above. At the
    crossover both branches are accurate to well under 1e-10 relative,
    and the asymptotic form never exponentiates x, so arguments in the
    hundreds (large order times large rate) are safe.
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("log_bessel_i0: nan argument")
    if x < 0.0:
        raise ValueError("log_bessel_i0: negative argument")
    if x == 0.0:
        return 0.0
    if x <= 15.0:
        q = 0.25 * x * x
        term = 1.0
        total = 1.0
        for k in range(1, 200):
            term *= q / (k * k)
            total += term
            if term < total * _EPS:
                break
        return math.log(total)
    # I0(x) ~ exp(x)/sqrt(2 pi x) * sum_k u_k, u_0 = 1,
    # u_{k+1} = u_k * (2k+1)^2 / (8 (k+1) x). Truncate at the smallest term.
    total = 1.0
    term = 1.0
    for k in range(0, 40):
        nxt = term * (2 * k + 1) ** 2 / (8.0 * (k + 1) * x)
        if nxt >= term or nxt < total * _EPS:
            break
        term = nxt
        total += term
    return x - 0.5 * math.log(2.0 * math.pi * x) + math.log(total)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def _golden(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    n = max(1, int(math.ceil(math.log(tol / h) / math.log(_INVPHI)))) if h > tol else 1
    for _ in range(min(n, 400)):
        if math.isnan(fc) or math.isnan(fd):
            raise ConvergenceError("objective returned nan")
        if fc < fd:
            b, d, fd = d, c, fc
            h *= _INVPHI
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= _INVPHI
            d = a + _INVPHI * h
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def minimize_scalar(
    f: Callable[[float], float],
    bracket: Bracket = Bracket(1e-6, 50.0),
    tol: float = 1e-8,
    max_expansions: int = 40,
    expand_right: bool = True,
) -> tuple[float, float]:
    """Golden-section minimum of a unimodal scalar function.

    Returns (argmin, value). The objective may return +inf inside the
    bracket. By default, if the minimizer lands against the right edge
    the bracket is expanded (hi grows fourfold) and the search restarts,
    so rate optimizations whose natural scale exceeds the default
    interval are still found; ConvergenceError is raised if expansion
    never frees the minimizer from the edge. With expand_right=False the
    bracket is treated as a hard constraint and an edge minimum is a
    valid answer.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    lo, hi = bracket.lo, bracket.hi
    if not expand_right:
        return _golden(f, lo, hi, tol)
    for _ in range(max_expansions):
        xm, fm = _golden(f, lo, hi, tol)
        if xm < hi - 10.0 * tol:
            return xm, fm
        hi = lo + 4.0 * (hi - lo)
    raise ConvergenceError("minimizer pinned to the right bracket edge after expansion")


@dataclass(frozen=True)
class ConvolveResult:
    """Value of the convolution plus the last refinement change."""

    value: float
    error_estimate: float
    panels: int


# Offset used for the u = 0 node of the transformed integrand. The
# substitution maps an integrable 1/sqrt(s) endpoint singularity of the
# factors to a finite limit of 2u * f(u^2) * g(t - u^2); evaluating at
# u = 1e-150 realizes that limit to full precision without special
# casing the factor functions (1/sqrt(1e-300) is still representable).
_TINY_U = 1e-150


def _simpson_half(h: Callable[[float], float], upper: float, panels: int) -> float:
    if panels % 2 == 1:
        panels += 1
    step = upper / panels
    total = h(_TINY_U) + h(upper)
    for j in range(1, panels):
        w = 4.0 if j % 2 == 1 else 2.0
        total += w * h(j * step)
    return total * step / 3.0


def convolve_at(
    f: Callable[[float], float],
    g: Callable[[float], float],
    t: float,
    panels: int = 64,
    rel_tol: float = 1e-8,
    max_doublings: int = 16,
) -> ConvolveResult:
    """Evaluate (f * g)(t) = int_0^t f(s) g(t - s) ds at a single point.

    Both factors may blow up like an inverse square root at s = 0. The
    integral is split at t/2 and each half is mapped by s = u^2
    (respectively t - s = v^2), which turns the worst admissible
    endpoint behaviour into a bounded smooth integrand. Composite
    Simpson panels are then doubled until two successive estimates agree
    to rel_tol; the last change is reported as the error estimate.
    """
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise ValueError("convolution point t must be positive and finite")
    if panels < 2:
        raise ValueError("panels must be at least 2")
    u_max = math.sqrt(0.5 * t)

    def left(u: float) -> float:
        s = u * u
        return 2.0 * u * f(s) * g(t - s)

    def right(v: float) -> float:
        s = v * v
        return 2.0 * v * f(t - s) * g(s)

    n = panels
    prev = None
    prev_err = None
    for _ in range(max_doublings):
        val = _simpson_half(left, u_max, n) + _simpson_half(right, u_max, n)
        if prev is not None:
            err = abs(val - prev)
            if err <= rel_tol * max(abs(val), 1e-12):
                return ConvolveResult(value=val, error_estimate=err, panels=n)
            if prev_err is not None and err > 1.05 * prev_err:
                raise ConvergenceError("panel refinement stopped shrinking the change")
            prev_err = err
        prev = val
        n *= 2
    raise ConvergenceError("convolution did not reach the requested tolerance")
