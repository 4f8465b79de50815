"""Closed-form reference quantities for the fluctuation limits.

Poisson kernels on the disc, the limiting pointwise variance

    v^2_t(sigma) = log( (1 - e^{-2(sigma+t)}) / (1 - e^{-2 sigma}) ),

the two-time covariance pair

    c_{s,t}(sigma, alpha)    = Re log( (1 - e^{-2 sigma - (t+s) + i alpha})
                                     / (1 - e^{-2 sigma - (t-s) + i alpha}) ),
    chat_{s,t}(sigma, alpha) = Im log( same ratio ),

the small-scale two-point correlation pair (1/(1+alpha^2), alpha/(1+alpha^2)),
and the mode variances 1/|k| of the stationary log-correlated field.  All
functions are pure and accept numpy arrays where a float is documented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conformal import DomainError

__all__ = [
    "poisson_kernel",
    "conjugate_kernel",
    "fluctuation_variance",
    "variance_partial_sum",
    "variance_series_tail_bound",
    "CovarianceSpec",
    "covariance_same",
    "covariance_cross",
    "local_correlation",
    "fgf_mode_variance",
]


def poisson_kernel(r, theta):
    """P_r(theta) = Re((1 + r e^{i theta}) / (1 - r e^{i theta})), 0 <= r < 1.

    Strictly positive, with unit mean over the circle.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r >= 1.0):
        raise DomainError("poisson_kernel: requires 0 <= r < 1")
    theta = np.asarray(theta, dtype=float)
    den = 1.0 - 2.0 * r * np.cos(theta) + r * r
    out = (1.0 - r * r) / den
    return float(out) if out.ndim == 0 else out


def conjugate_kernel(r, theta):
    """Q_r(theta) = Im((1 + r e^{i theta}) / (1 - r e^{i theta})); odd in theta."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r >= 1.0):
        raise DomainError("conjugate_kernel: requires 0 <= r < 1")
    theta = np.asarray(theta, dtype=float)
    den = 1.0 - 2.0 * r * np.cos(theta) + r * r
    out = 2.0 * r * np.sin(theta) / den
    return float(out) if out.ndim == 0 else out


def fluctuation_variance(t: float, sigma: float) -> float:
    """Limiting variance v^2_t(sigma) of each fluctuation-field component.

    Nonnegative, increasing in t, decreasing in sigma; at t = infinity it
    equals -log(1 - e^{-2 sigma}).
    """
    if t < 0.0:
        raise DomainError("fluctuation_variance: requires t >= 0")
    if sigma <= 0.0:
        raise DomainError("fluctuation_variance: requires sigma > 0")
    return math.log1p(-math.exp(-2.0 * (sigma + t))) - math.log1p(-math.exp(-2.0 * sigma))


def variance_partial_sum(t: float, sigma: float, terms: int) -> float:
    """Fourier partial sum sum_{k<=terms} e^{-2 k sigma} (1 - e^{-2 k t}) / k."""
    if terms < 1:
        raise DomainError("variance_partial_sum: requires terms >= 1")
    k = np.arange(1, terms + 1, dtype=float)
    return float(np.sum(np.exp(-2.0 * k * sigma) * (1.0 - np.exp(-2.0 * k * t)) / k))


def variance_series_tail_bound(sigma: float, terms: int) -> float:
    """Geometric bound on the variance series tail beyond ``terms`` modes."""
    return math.exp(-2.0 * (terms + 1) * sigma) / ((terms + 1) * (1.0 - math.exp(-2.0 * sigma)))


@dataclass(frozen=True)
class CovarianceSpec:
    """Arguments of the two-time covariance pair: 0 <= s <= t, sigma > 0."""

    s: float
    t: float
    sigma: float
    alpha: float

    def __post_init__(self):
        if not (0.0 <= self.s <= self.t):
            raise DomainError("CovarianceSpec: requires 0 <= s <= t")
        if self.sigma <= 0.0:
            raise DomainError("CovarianceSpec: requires sigma > 0")


def _log_ratio(spec: CovarianceSpec) -> complex:
    phase = complex(math.cos(spec.alpha), math.sin(spec.alpha))
    num = 1.0 - math.exp(-2.0 * spec.sigma - (spec.t + spec.s)) * phase
    den = 1.0 - math.exp(-2.0 * spec.sigma - (spec.t - spec.s)) * phase
    # Both factors have positive real part, so principal logs need no branch care.
    return np.log(complex(num)) - np.log(complex(den))


def covariance_same(spec: CovarianceSpec) -> float:
    """Re-Re (= Im-Im) covariance of the field at times (t, s), angle gap alpha.

    At s = t and alpha = 0 this reduces to ``fluctuation_variance(t, sigma)``.
    """
    return _log_ratio(spec).real


def covariance_cross(spec: CovarianceSpec) -> float:
    """Re-Im covariance of the field at times (t, s), angle gap alpha; odd in alpha."""
    return _log_ratio(spec).imag


def local_correlation(alpha: float) -> tuple[float, float]:
    """Small-scale two-point correlation pair (1/(1+a^2), a/(1+a^2)).

    ``alpha`` is the ratio of angular separation to twice the radial
    distance; ``math.inf`` is the distinguished fully-decorrelated value,
    returning (0, 0).
    """
    if alpha == math.inf:
        return (0.0, 0.0)
    if not (alpha >= 0.0):
        raise DomainError("local_correlation: requires alpha >= 0 or math.inf")
    return (1.0 / (1.0 + alpha * alpha), alpha / (1.0 + alpha * alpha))


def fgf_mode_variance(k: int) -> float:
    """Stationary variance 1/|k| of Fourier mode k of the boundary field."""
    if k == 0:
        raise DomainError("fgf_mode_variance: requires k != 0")
    return 1.0 / abs(k)
