"""HL(0) cluster growth and evaluation of the composed maps.

A cluster of n particles is encoded by its particle geometry and the i.i.d.
attachment angles Theta_1..Theta_n, each uniform on [-pi, pi).  The grown
cluster acts on exterior points through

    Phi_k = F_1 o F_2 o ... o F_k          (innermost map F_k),
    Gamma_k = Phi_k^{-1} = G_k o ... o G_1,

where F_j(z) = e^{i Theta_j} F(e^{-i Theta_j} z) attaches a particle at
angle Theta_j.  ``log_cluster_map`` accumulates log(Phi_k(z)/z) as the sum of
per-step increments with arguments in [-pi, pi), which fixes the branch that
tends to k*c at infinity.

Growth is deterministic given (seed, config): angles come from a Philox
counter-based stream (see ``_rng``).  ClusterState is immutable; evaluations
are read-only and safe to run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._rng import derive_rng
from .conformal import (
    DomainError,
    ParticleParams,
    _arg_halfopen,
    _as_points,
    _f_apply,
    _g_apply,
    _require_exterior,
    _scalar_like,
    delta_from_capacity,
    make_particle,
)

__all__ = [
    "Regime",
    "GrowthConfig",
    "ClusterState",
    "PointInsideClusterError",
    "GoodEventParams",
    "GoodEventReport",
    "grow",
    "cluster_map",
    "log_cluster_map",
    "inverse_cluster_map",
    "trace_boundary",
    "default_sample_points",
    "good_event_check",
    "floor_index",
]

# Radial offset used when tracing boundary curves; keeps evaluation off the
# slit-tip branch points on |z| = 1.
DEFAULT_BOUNDARY_ETA = 1e-8


class PointInsideClusterError(DomainError):
    """An inverse-map orbit entered the cluster (unit disc or a particle)."""


class Regime(str, Enum):
    """Capacity scaling: ``unit`` pins n*c = 1; ``fixed_t`` takes c as given."""

    FIXED_T = "fixed_t"
    UNIT = "unit"


@dataclass(frozen=True)
class GrowthConfig:
    """Specification of one cluster: size, particle scale, seed, regime.

    In the ``unit`` regime the capacity is pinned to exactly 1/n and neither
    ``delta`` nor ``capacity`` may be supplied; in the ``fixed_t`` regime
    exactly one of them must be.
    """

    n: int
    seed: int
    delta: float | None = None
    capacity: float | None = None
    regime: Regime = Regime.UNIT

    def __post_init__(self):
        if int(self.n) < 1:
            raise DomainError(f"GrowthConfig: n must be >= 1; got {self.n!r}")
        if self.regime == Regime.UNIT:
            if self.delta is not None or self.capacity is not None:
                raise DomainError(
                    "GrowthConfig: unit regime derives capacity = 1/n; "
                    "delta/capacity must not be supplied"
                )
        else:
            if (self.delta is None) == (self.capacity is None):
                raise DomainError(
                    "GrowthConfig: fixed_t regime requires exactly one of delta, capacity"
                )

    def resolve_particle(self) -> ParticleParams:
        """Resolve the particle, inverting c(delta) when capacity is pinned."""
        if self.regime == Regime.UNIT:
            return make_particle(delta_from_capacity(1.0 / self.n))
        if self.delta is not None:
            return make_particle(self.delta)
        return make_particle(delta_from_capacity(self.capacity))


@dataclass(frozen=True)
class ClusterState:
    """Immutable grown cluster: particle, attachment angles, seed."""

    particle: ParticleParams
    angles: np.ndarray
    seed: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.angles, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "angles", arr)

    @property
    def n(self) -> int:
        return self.angles.shape[0]

    @property
    def capacity(self) -> float:
        return self.particle.capacity


def grow(config: GrowthConfig) -> ClusterState:
    """Grow a cluster: draw n i.i.d. Uniform[-pi, pi) attachment angles.

    The same (seed, config) always yields bitwise-identical angles.
    """
    particle = config.resolve_particle()
    rng = derive_rng(config.seed, "angles")
    angles = rng.uniform(-math.pi, math.pi, size=config.n)
    return ClusterState(particle=particle, angles=angles, seed=config.seed)


def floor_index(n: int, t: float) -> int:
    """floor(n*t) with a one-ulp guard against 0.9999... artefacts."""
    return int(math.floor(n * t + 1e-9))


def _check_k(cluster: ClusterState, k: int) -> int:
    k = int(k)
    if not (0 <= k <= cluster.n):
        raise DomainError(f"k must lie in [0, {cluster.n}]; got {k}")
    return k


def cluster_map(cluster: ClusterState, k: int, z):
    """Evaluate Phi_k(z) = F_1(F_2(...F_k(z)...)); k = 0 is the identity.

    Cost is k map applications; ``z`` may be a scalar or an array of points.
    """
    k = _check_k(cluster, k)
    arr = _as_points(z, where="cluster_map")
    _require_exterior(arr, where="cluster_map")
    gamma = cluster.particle.gamma
    phases = np.exp(1j * cluster.angles[:k])
    out = np.array(arr, dtype=complex, copy=True)
    for j in range(k - 1, -1, -1):
        ph = phases[j]
        out = ph * _f_apply(gamma, out / ph)
    return _scalar_like(z, out)


def log_cluster_map(cluster: ClusterState, k: int, z):
    """Evaluate log(Phi_k(z)/z) as the telescoping sum of per-step increments.

    Each increment log(F(e^{-i Theta_j} Z_j) / (e^{-i Theta_j} Z_j)) takes its
    argument in [-pi, pi); the real part of every increment is positive.
    Satisfies exp(result) * z = cluster_map(cluster, k, z) up to rounding.
    """
    k = _check_k(cluster, k)
    arr = _as_points(z, where="log_cluster_map")
    _require_exterior(arr, where="log_cluster_map")
    gamma = cluster.particle.gamma
    phases = np.exp(1j * cluster.angles[:k])
    cur = np.array(arr, dtype=complex, copy=True)
    total = np.zeros_like(cur)
    for j in range(k - 1, -1, -1):
        zeta = cur / phases[j]
        w = _f_apply(gamma, zeta)
        ratio = w / zeta
        total += np.log(np.abs(ratio)) + 1j * _arg_halfopen(ratio)
        cur = phases[j] * w
    return _scalar_like(z, total)


def _inside_particle(zeta: np.ndarray, r: float) -> np.ndarray:
    return np.abs(zeta - 1.0) <= r * np.abs(zeta + 1.0)


def inverse_cluster_map(cluster: ClusterState, k: int, w):
    """Evaluate Gamma_k(w) = G_k(...G_1(w)...), mapping the cluster out.

    Every intermediate point must stay outside the closed unit disc and off
    the corresponding particle; otherwise the point is inside the cluster
    and ``PointInsideClusterError`` is raised.
    """
    k = _check_k(cluster, k)
    arr = _as_points(w, where="inverse_cluster_map")
    gamma = cluster.particle.gamma
    r = cluster.particle.r
    phases = np.exp(1j * cluster.angles[:k])
    out = np.array(arr, dtype=complex, copy=True)
    for j in range(k):
        zeta = out / phases[j]
        if np.any(np.abs(zeta) <= 1.0) or np.any(_inside_particle(zeta, r)):
            raise PointInsideClusterError(
                f"inverse_cluster_map: point entered the cluster at step {j + 1}"
            )
        out = phases[j] * _g_apply(gamma, zeta)
    return _scalar_like(w, out)


def trace_boundary(
    cluster: ClusterState,
    k: int,
    m_points: int = 4096,
    eta: float = DEFAULT_BOUNDARY_ETA,
) -> np.ndarray:
    """Trace the cluster boundary: Phi_k(e^{i theta_j + eta}) on an angle grid.

    Returns a closed polyline (last vertex joins the first) of ``m_points``
    vertices, all of modulus > 1.  ``eta`` is the radial offset keeping the
    evaluation off the unit circle.
    """
    if m_points < 16:
        raise DomainError("trace_boundary: m_points must be >= 16")
    if eta <= 0.0:
        raise DomainError("trace_boundary: eta must be > 0")
    theta = np.linspace(-math.pi, math.pi, m_points, endpoint=False)
    pts = np.exp(eta + 1j * theta)
    return cluster_map(cluster, k, pts)


@dataclass(frozen=True)
class GoodEventParams:
    """Tolerance epsilon and horizon m of the uniform-scaling event."""

    epsilon: float
    m: int

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise DomainError("GoodEventParams: epsilon must be > 0")
        if self.m < 1:
            raise DomainError("GoodEventParams: m must be >= 1")

    @classmethod
    def from_delta(cls, delta: float) -> "GoodEventParams":
        """Defaults m = floor(delta^-6), epsilon = delta^{2/3} log(1/delta)."""
        if not (0.0 < delta < 1.0):
            raise DomainError("GoodEventParams.from_delta: requires 0 < delta < 1")
        return cls(epsilon=delta ** (2.0 / 3.0) * math.log(1.0 / delta), m=int(delta**-6))


def default_sample_points(epsilon: float, count: int = 32) -> np.ndarray:
    """Default surrogate point set: ``count`` points split over two circles.

    The circles are |z| = e^{5 eps} and |z| = max(2, e^{5 eps}); whenever
    e^{5 eps} >= 2 the nominal |z| = 2 layer is lifted onto the admissible
    circle, keeping every point inside the event's quantification range.
    """
    if count < 2:
        raise DomainError("default_sample_points: count must be >= 2")
    inner = math.exp(5.0 * epsilon)
    outer = max(2.0, inner)
    half = count // 2
    ang_inner = np.linspace(-math.pi, math.pi, half, endpoint=False)
    ang_outer = np.linspace(-math.pi, math.pi, count - half, endpoint=False) + math.pi / count
    return np.concatenate([inner * np.exp(1j * ang_inner), outer * np.exp(1j * ang_outer)])


@dataclass(frozen=True)
class GoodEventReport:
    """Outcome of the scaling check: overall verdict plus per-point margins.

    Margins are min over n of (threshold - deviation); a negative margin
    identifies the failing clause.  ``first_failure`` holds the earliest
    failing step per point, or -1.
    """

    passed: bool
    points: np.ndarray
    forward_margin: np.ndarray
    inverse_margin: np.ndarray
    first_failure: np.ndarray
    epsilon: float
    steps_checked: int

    def __bool__(self) -> bool:
        return self.passed


def good_event_check(
    cluster: ClusterState,
    k: int,
    params: GoodEventParams,
    sample_points,
) -> GoodEventReport:
    """Check the uniform-scaling event up to step k on a finite point set.

    For every n <= min(k, m) the two clauses are tested:

    * forward:  |e^{-c n} Phi_n(z) - z| < eps e^{6 eps} at each sample point
      (all of which must satisfy |z| >= e^{5 eps});
    * inverse:  |e^{c n} Gamma_n(w) - w| < eps e^{5 eps + c n} at the fixed
      admissible points w = z * e^{c k' - eps} (k' = min(k, m)), whose moduli
      exceed e^{c n + 4 eps} for every n checked.

    This is a Monte Carlo surrogate over the supplied points, not a proof
    over all z.  k = 0 passes trivially.
    """
    k = _check_k(cluster, k)
    eps = params.epsilon
    pts = np.atleast_1d(np.asarray(sample_points, dtype=complex))
    if np.any(np.abs(pts) < math.exp(5.0 * eps) * (1.0 - 1e-12)):
        raise DomainError("good_event_check: sample points must satisfy |z| >= e^{5 eps}")
    kk = min(k, params.m)
    c = cluster.capacity
    gamma = cluster.particle.gamma
    r = cluster.particle.r
    npts = pts.shape[0]
    if kk == 0:
        zeros = np.zeros(npts)
        return GoodEventReport(
            passed=True,
            points=pts,
            forward_margin=zeros,
            inverse_margin=zeros,
            first_failure=np.full(npts, -1, dtype=int),
            epsilon=eps,
            steps_checked=0,
        )

    phases = np.exp(1j * cluster.angles[:kk])

    # Forward clause: row n-1 of V carries the orbit of Phi_n; sweeping j
    # downward applies F_j to every row with n >= j, so each row finishes as
    # Phi_n(sample points).  Total work is O(k^2 * points), vectorised per
    # sweep step; scratch buffers keep the inner loop allocation-free.
    V = np.empty((kk, npts), dtype=complex)
    scr_b = np.empty(kk * npts, dtype=complex)
    scr_d = np.empty(kk * npts, dtype=complex)
    scr_t = np.empty(kk * npts, dtype=complex)
    four_g2 = 4.0 * gamma * gamma
    half_inv_g = 0.5 / gamma
    for j in range(kk, 0, -1):
        V[j - 1] = pts
        v = V[j - 1 :].reshape(-1)
        m = v.shape[0]
        ph = phases[j - 1]
        np.multiply(v, ph.conjugate(), out=v)
        b = scr_b[:m]
        np.add(v, 1.0, out=b)
        d = scr_d[:m]
        np.multiply(b, b, out=d)
        t = scr_t[:m]
        np.multiply(v, four_g2, out=t)
        np.subtract(d, t, out=d)
        np.sqrt(d, out=d)
        np.negative(d, out=d, where=b.real * d.real + b.imag * d.imag < 0.0)
        np.add(b, d, out=b)
        np.multiply(b, half_inv_g, out=b)
        np.multiply(b, ph, out=v)
    n_idx = np.arange(1, kk + 1)
    scale = np.exp(-c * n_idx)[:, None]
    fwd_dev = np.abs(scale * V - pts[None, :])
    fwd_thr = eps * math.exp(6.0 * eps)
    fwd_ok = fwd_dev < fwd_thr
    forward_margin = (fwd_thr - fwd_dev).min(axis=0)

    # Inverse clause on the fixed admissible points, via the incremental
    # orbit Gamma_n(w) = G_n(Gamma_{n-1}(w)).
    w = pts * math.exp(c * kk - eps)
    inv_dev = np.empty((kk, npts))
    cur = w.copy()
    alive = np.ones(npts, dtype=bool)
    for n in range(1, kk + 1):
        ph = phases[n - 1]
        zeta = cur / ph
        bad = (np.abs(zeta) <= 1.0) | _inside_particle(zeta, r)
        if np.any(bad & alive):
            alive &= ~bad
        cur = np.where(alive, ph * _g_apply(gamma, np.where(alive, zeta, 2.0)), cur)
        inv_dev[n - 1] = np.where(alive, np.abs(math.exp(c * n) * cur - w), np.inf)
    inv_thr = (eps * np.exp(5.0 * eps + c * n_idx))[:, None]
    inv_ok = inv_dev < inv_thr
    inverse_margin = (inv_thr - inv_dev).min(axis=0)

    ok = fwd_ok & inv_ok
    first_failure = np.where(ok.all(axis=0), -1, np.argmin(ok, axis=0) + 1)
    return GoodEventReport(
        passed=bool(ok.all()),
        points=pts,
        forward_margin=forward_margin,
        inverse_margin=inverse_margin,
        first_failure=first_failure,
        epsilon=eps,
        steps_checked=kk,
    )
