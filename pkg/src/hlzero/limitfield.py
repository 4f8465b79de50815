"""Spectral simulation of the limiting fluctuation field.

The limit field is driven by independent Ornstein-Uhlenbeck pairs, one per
Fourier frequency k >= 1:

    dA_k = -k A_k dt + sqrt(2) dW,   A_k(0) = 0,

and likewise B_k; the stationary law of each is N(0, 1/k).  Trajectories use
the exact transition of the OU semigroup (no discretisation bias):

    A_k(t + dt) = e^{-k dt} A_k(t) + g sqrt((1 - e^{-2 k dt}) / k),
    g standard normal.

The holomorphic field at r e^{i a}, r > 1, is the truncated series

    F(t, r e^{i a}) = sum_{k=1..K} r^{-k} (A_k(t) + i B_k(t)) e^{-i k a},

whose geometric tail gives an attached truncation bound.  The e^{-i k a}
orientation is the one whose cross-covariance between real and imaginary
parts at two angles matches ``theory.covariance_cross`` (and hence the
discrete model); the opposite orientation flips that sign.

Boundary data is kept as one-sided coefficients c_k = (A_k + i B_k)/sqrt(2);
smoothing the folded boundary series with the kernel of radius 1/r
reproduces the field exactly at finite truncation (see
``poisson_extension``).  As t -> infinity the coefficients converge to the
log-correlated stationary law E|c_k|^2 = 1/k, sampled directly by
``stationary_field``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import derive_rng, derive_seed
from .conformal import DomainError

__all__ = [
    "OUState",
    "BoundaryCoefficients",
    "FieldValue",
    "ou_init",
    "ou_step",
    "evaluate_field",
    "boundary_coefficients",
    "poisson_extension",
    "stationary_field",
    "transition_residuals",
    "default_mode_count",
    "simulate_field_ensemble",
]

# Stationary bound on E(|A_k| + |B_k|), attained at k = 1: 2 sqrt(2/pi).
_AMPLITUDE_BOUND = 2.0 * math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class OUState:
    """Truncated mode state (A_k, B_k), k = 1..modes, at time t.

    ``steps`` counts transitions taken since ``ou_init``; together with
    ``seed`` it determines the noise of the next transition, so trajectories
    are reproducible and independent of evaluation order.
    """

    modes: int
    t: float
    a: np.ndarray
    b: np.ndarray
    seed: int
    steps: int = 0

    def __post_init__(self):
        for name in ("a", "b"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            if arr.shape != (self.modes,):
                raise DomainError(f"OUState: {name} must have shape ({self.modes},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def ou_init(modes: int, seed: int) -> OUState:
    """Zero state at t = 0 with ``modes`` >= 1 mode pairs."""
    if modes < 1:
        raise DomainError("ou_init: modes must be >= 1")
    return OUState(modes=modes, t=0.0, a=np.zeros(modes), b=np.zeros(modes), seed=seed)


def ou_step(state: OUState, dt: float) -> OUState:
    """Advance every mode by dt using the exact transition law."""
    if dt <= 0.0:
        raise DomainError("ou_step: dt must be > 0")
    k = np.arange(1, state.modes + 1, dtype=float)
    decay = np.exp(-k * dt)
    sd = np.sqrt((1.0 - decay * decay) / k)
    g = derive_rng(state.seed, "ou-step", state.steps).standard_normal((2, state.modes))
    return OUState(
        modes=state.modes,
        t=state.t + dt,
        a=decay * state.a + sd * g[0],
        b=decay * state.b + sd * g[1],
        seed=state.seed,
        steps=state.steps + 1,
    )


@dataclass(frozen=True)
class FieldValue:
    """Truncated field value with its geometric-tail truncation bound."""

    value: complex
    truncation_bound: float


def evaluate_field(state: OUState, r: float, a: float) -> FieldValue:
    """Evaluate the truncated field at r e^{i a}, r > 1.

    The truncation bound is r^{-(K+1)} / (1 - 1/r) * max_k(|A_k| + |B_k|).
    """
    if r <= 1.0:
        raise DomainError("evaluate_field: requires r > 1 (boundary data lives in coefficients)")
    k = np.arange(1, state.modes + 1, dtype=float)
    coeff = (state.a + 1j * state.b) * np.exp(-1j * k * a) * r**-k
    amp = np.abs(state.a) + np.abs(state.b)
    bound = r ** -(state.modes + 1) / (1.0 - 1.0 / r) * float(amp.max(initial=0.0))
    return FieldValue(value=complex(coeff.sum()), truncation_bound=bound)


@dataclass(frozen=True)
class BoundaryCoefficients:
    """One-sided boundary Fourier data c_k = (A_k + i B_k)/sqrt(2), k = 1..K."""

    coefficients: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.coefficients, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)

    @property
    def modes(self) -> int:
        return self.coefficients.shape[0]


def boundary_coefficients(state: OUState) -> BoundaryCoefficients:
    """Boundary data of the current state: c_k = (A_k + i B_k)/sqrt(2)."""
    return BoundaryCoefficients((state.a + 1j * state.b) / math.sqrt(2.0))


def poisson_extension(coeffs: BoundaryCoefficients, r: float, a: float) -> complex:
    """Kernel-smooth the folded boundary series out to radius r > 1.

    The stored one-sided coefficients carry half the two-sided mode variance;
    the sqrt(2) fold restores full amplitude, so this reproduces
    ``evaluate_field`` exactly at finite truncation:

        sum_k sqrt(2) c_k r^{-k} e^{-i k a}.
    """
    if r <= 1.0:
        raise DomainError("poisson_extension: requires r > 1")
    k = np.arange(1, coeffs.modes + 1, dtype=float)
    return complex(np.sum(math.sqrt(2.0) * coeffs.coefficients * r**-k * np.exp(-1j * k * a)))


def stationary_field(modes: int, seed: int) -> BoundaryCoefficients:
    """Sample the stationary log-correlated boundary field at truncation K.

    Coefficients are (g_k + i g'_k) / sqrt(2 k) for independent standard
    normals, so E|c_k|^2 = 1/k.
    """
    if modes < 1:
        raise DomainError("stationary_field: modes must be >= 1")
    g = derive_rng(seed, "fgf").standard_normal((2, modes))
    k = np.arange(1, modes + 1, dtype=float)
    return BoundaryCoefficients((g[0] + 1j * g[1]) / np.sqrt(2.0 * k))


def transition_residuals(before: OUState, after: OUState, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Standardised one-step residuals of each mode, for both components.

    (A_k(t+dt) - e^{-k dt} A_k(t)) / sqrt((1 - e^{-2 k dt})/k) is standard
    normal under the exact transition, independently per mode and component.
    """
    if dt <= 0.0:
        raise DomainError("transition_residuals: dt must be > 0")
    if before.modes != after.modes:
        raise DomainError("transition_residuals: mode counts differ")
    k = np.arange(1, before.modes + 1, dtype=float)
    decay = np.exp(-k * dt)
    sd = np.sqrt((1.0 - decay * decay) / k)
    return (after.a - decay * before.a) / sd, (after.b - decay * before.b) / sd


def default_mode_count(r_min: float, tol: float = 1e-6) -> int:
    """Smallest K whose truncation bound at radius r_min falls below tol.

    Uses the stationary amplitude bound E(|A_k| + |B_k|) <= 2 sqrt(2/pi); the
    tail of the field series at radius r is geometric with ratio 1/r.
    """
    if r_min <= 1.0:
        raise DomainError("default_mode_count: requires r_min > 1")
    k = 1
    while r_min ** -(k + 1) / (1.0 - 1.0 / r_min) * _AMPLITUDE_BOUND >= tol:
        k += 1
    return k


def simulate_field_ensemble(
    modes: int,
    grid: tuple[tuple[float, float, float], ...],
    runs: int,
    master_seed: int,
) -> np.ndarray:
    """Field values over independent trajectories on an observation grid.

    ``grid`` holds (t, sigma, a) triples; each run evolves one trajectory
    through the sorted distinct times (exact transitions) and evaluates the
    field at r = e^{sigma}.  Returns a complex array of shape (runs, len(grid)).
    Per-run seeds derive from (master_seed, run index), so results are
    independent of execution order.
    """
    if runs < 1:
        raise DomainError("simulate_field_ensemble: runs must be >= 1")
    if not grid:
        raise DomainError("simulate_field_ensemble: grid must be nonempty")
    times = sorted({t for t, _, _ in grid})
    if times[0] < 0.0:
        raise DomainError("simulate_field_ensemble: times must be >= 0")
    out = np.empty((runs, len(grid)), dtype=complex)
    for i in range(runs):
        state = ou_init(modes, derive_seed(master_seed, "limit-run", i))
        by_time: dict[float, OUState] = {}
        if times[0] == 0.0:
            by_time[0.0] = state
        prev = 0.0
        for t in times:
            if t > prev:
                state = ou_step(state, t - prev)
                prev = t
            by_time[t] = state
        for j, (t, sigma, a) in enumerate(grid):
            out[i, j] = evaluate_field(by_time[t], math.exp(sigma), a).value
    return out
