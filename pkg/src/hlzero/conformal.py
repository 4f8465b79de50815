"""Exterior conformal maps for the canonical one-parameter particle family.

The particle attached at the point 1 is the disc-like region

    P = { z : |z - 1| <= r |z + 1| } \\ closed unit disc,   r = delta / (2 - delta),

whose tip sits at (1 + r)/(1 - r) = 1/(1 - delta).  The exterior map that
removes the particle has the closed rational form

    G(z) = z (gamma z - 1) / (z - gamma),   gamma = (1 - r^2) / (1 + r^2),

a conformal isomorphism from the complement of (unit disc + particle) onto
{|z| > 1} with G(z) ~ gamma z at infinity.  Its inverse F = G^{-1} attaches
the particle; F(z) = e^c z + O(1) with logarithmic capacity c = -log(gamma).
F is evaluated by solving the quadratic obtained from G(w) = z,

    gamma w^2 - (1 + z) w + gamma z = 0,

whose two roots multiply to z; for |z| > 1 one root has modulus > |z| and the
other lies inside the unit disc, so the branch of F is the larger-modulus
root.  All functions accept complex scalars or numpy arrays of points and are
pure (safe to call concurrently).

Evaluation is restricted to |z| > 1; boundary values are approached through
a small radial offset (see ``cluster.trace_boundary``).  All arithmetic is in
64-bit binary floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "DomainError",
    "SingularityError",
    "BranchSelectionError",
    "ParticleParams",
    "DistortionRow",
    "DistortionReport",
    "make_particle",
    "delta_from_capacity",
    "inverse_particle_map",
    "particle_map",
    "rotated_particle_map",
    "log_increment",
    "distortion_report",
    "MAX_DELTA",
    "MAX_CAPACITY",
    "CAPACITY_BOUND_DELTA_MAX",
]

# Construction validity window: delta < 1/2 keeps r < 1/3 and gamma well
# inside (0, 1).
MAX_DELTA = 0.5
# Largest capacity reachable within the delta window, c(1/2) = log(5/4).
MAX_CAPACITY = math.log(1.25)
# The two-sided capacity bound delta^2/6 <= c <= 3 delta^2/4 holds below this.
CAPACITY_BOUND_DELTA_MAX = 0.36

# Roots of the forward quadratic straddle the unit circle on valid input; a
# relative modulus gap below this threshold means the branch choice is
# ill-posed and indicates an invalid evaluation point.
_BRANCH_GAP_RTOL = 1e-9


class DomainError(ValueError):
    """Input outside the domain of a map or constructor."""


class SingularityError(DomainError):
    """Evaluation at (or numerically at) a pole of a map."""


class BranchSelectionError(RuntimeError):
    """The two inverse-map roots cannot be told apart; never raised on valid input."""


@dataclass(frozen=True)
class ParticleParams:
    """Geometry of one particle: diameter scale and derived map constants.

    Attributes
    ----------
    delta : float
        Particle diameter scale, in (0, 1/2).
    r : float
        Apollonius ratio delta / (2 - delta).
    gamma : float
        Map coefficient (1 - r^2) / (1 + r^2), in (0, 1).
    capacity : float
        Logarithmic capacity c = -log(gamma).
    """

    delta: float
    r: float
    gamma: float
    capacity: float

    @property
    def tip(self) -> float:
        """Outermost particle point on the real axis, 1/(1 - delta)."""
        return (1.0 + self.r) / (1.0 - self.r)


def make_particle(delta: float) -> ParticleParams:
    """Build the particle parameters for a given diameter scale.

    Parameters
    ----------
    delta : float
        Diameter scale; must lie in the open interval (0, 1/2).

    Returns
    -------
    ParticleParams

    Raises
    ------
    DomainError
        If ``delta`` is outside (0, 1/2).
    """
    delta = float(delta)
    if not (0.0 < delta < MAX_DELTA) or not math.isfinite(delta):
        raise DomainError(f"delta must lie in (0, {MAX_DELTA}); got {delta!r}")
    r = delta / (2.0 - delta)
    r2 = r * r
    gamma = (1.0 - r2) / (1.0 + r2)
    # c = log((1+r^2)/(1-r^2)); log1p keeps full precision for small r.
    capacity = math.log1p(r2) - math.log1p(-r2)
    return ParticleParams(delta=delta, r=r, gamma=gamma, capacity=capacity)


def _capacity_of_delta(delta: float) -> float:
    r2 = (delta / (2.0 - delta)) ** 2
    return math.log1p(r2) - math.log1p(-r2)


def delta_from_capacity(capacity: float) -> float:
    """Invert the strictly increasing map delta -> c(delta).

    Bracketed root find followed by Newton polish; the residual
    ``|c(delta) - capacity|`` lands within a few ulps of ``capacity``.

    Raises
    ------
    DomainError
        If ``capacity`` is outside (0, log(5/4)).
    """
    capacity = float(capacity)
    if not (0.0 < capacity < MAX_CAPACITY) or not math.isfinite(capacity):
        raise DomainError(f"capacity must lie in (0, {MAX_CAPACITY:.6f}); got {capacity!r}")
    lo = 1e-12
    hi = MAX_DELTA - 1e-12
    delta = brentq(lambda d: _capacity_of_delta(d) - capacity, lo, hi, xtol=1e-15, rtol=8.9e-16)
    # Newton polish: dc/ddelta = 4 r / (1 - r^4) * 2 / (2 - delta)^2.
    for _ in range(3):
        r = delta / (2.0 - delta)
        dc = (4.0 * r / (1.0 - r**4)) * (2.0 / (2.0 - delta) ** 2)
        step = (_capacity_of_delta(delta) - capacity) / dc
        if delta - step <= 0.0 or delta - step >= MAX_DELTA:
            break
        delta -= step
    return delta


def _as_points(z, *, where: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{where}: non-finite evaluation point")
    return arr


def _require_exterior(arr: np.ndarray, *, where: str) -> None:
    if np.any(np.abs(arr) <= 1.0):
        raise DomainError(f"{where}: requires |z| > 1")


def _scalar_like(z, out: np.ndarray):
    if np.ndim(z) == 0:
        return complex(out.flat[0])
    return out


def inverse_particle_map(p: ParticleParams, z) -> complex | np.ndarray:
    """Evaluate G(z) = z (gamma z - 1) / (z - gamma), removing the particle.

    Parameters
    ----------
    p : ParticleParams
    z : complex or ndarray
        Points with |z| > 1, outside the particle (caller responsibility).

    Returns
    -------
    complex or ndarray
        G(z); satisfies |G(z)| < |z| and G(z)/z -> gamma at infinity.

    Raises
    ------
    DomainError
        If any point has |z| <= 1.
    SingularityError
        If any point coincides with the pole at gamma (unreachable when
        |z| > 1; kept as a defensive check).
    """
    arr = _as_points(z, where="inverse_particle_map")
    if np.any(np.abs(arr - p.gamma) < 1e-15):
        raise SingularityError("inverse_particle_map: evaluation at the pole z = gamma")
    _require_exterior(arr, where="inverse_particle_map")
    return _scalar_like(z, _g_apply(p.gamma, arr))


def _g_apply(gamma: float, arr: np.ndarray) -> np.ndarray:
    return arr * (gamma * arr - 1.0) / (arr - gamma)


def _f_apply(gamma: float, arr: np.ndarray) -> np.ndarray:
    """Larger-modulus root of gamma w^2 - (1+z) w + gamma z = 0 (no checks).

    With the square root aligned against cancellation, |b + s|^2 exceeds
    |b|^2 + |s|^2 >= 4 gamma^2 |z| (reverse triangle inequality on the
    discriminant), so (b + s) / (2 gamma) is always the larger-modulus root
    and no comparison with the cofactor root is needed.
    """
    b = 1.0 + arr
    s = np.sqrt(b * b - (4.0 * gamma * gamma) * arr)
    flip = b.real * s.real + b.imag * s.imag < 0.0
    np.negative(s, out=s, where=flip)
    s += b
    s /= 2.0 * gamma
    return s


def _f_scalar(gamma: float, z: complex) -> complex:
    """Scalar-path twin of ``_f_apply`` in cmath, for composition loops."""
    b = 1.0 + z
    s = cmath.sqrt(b * b - (4.0 * gamma * gamma) * z)
    if b.real * s.real + b.imag * s.imag < 0.0:
        s = -s
    return (b + s) / (2.0 * gamma)


def particle_map(p: ParticleParams, z) -> complex | np.ndarray:
    """Evaluate F = G^{-1}, attaching the particle.

    The result is the root w of gamma w^2 - (1+z) w + gamma z = 0 with
    |w| > |z|; it satisfies G(F(z)) = z and F(z)/z -> e^c at infinity.

    Raises
    ------
    DomainError
        If any point has |z| <= 1.
    BranchSelectionError
        If the two roots have nearly equal modulus (relative gap below
        1e-9).  This cannot happen for |z| > 1 and is tested never to fire.
    """
    arr = _as_points(z, where="particle_map")
    _require_exterior(arr, where="particle_map")
    b = 1.0 + arr
    disc = b * b - (4.0 * p.gamma * p.gamma) * arr
    s = np.sqrt(disc)
    s = np.where(np.real(np.conj(b) * s) >= 0.0, s, -s)
    q = b + s
    w_big = q / (2.0 * p.gamma)
    w_small = (2.0 * arr) / q
    big = np.abs(w_big)
    small = np.abs(w_small)
    flip = small > big
    if np.any(flip):
        w_big = np.where(flip, w_small, w_big)
        big, small = np.maximum(big, small), np.minimum(big, small)
    if np.any((big - small) < _BRANCH_GAP_RTOL * big):
        raise BranchSelectionError(
            "particle_map: root moduli indistinguishable; evaluation point is invalid"
        )
    return _scalar_like(z, w_big)


def rotated_particle_map(p: ParticleParams, theta: float, z) -> complex | np.ndarray:
    """Evaluate e^{i theta} F(e^{-i theta} z): the particle attached at e^{i theta}."""
    phase = complex(math.cos(theta), math.sin(theta))
    arr = _as_points(z, where="rotated_particle_map")
    _require_exterior(arr, where="rotated_particle_map")
    out = phase * _f_apply(p.gamma, arr / phase)
    return _scalar_like(z, out)


def _arg_halfopen(w: np.ndarray) -> np.ndarray:
    """Argument in [-pi, pi): numpy's (-pi, pi] with +pi folded to -pi."""
    a = np.angle(w)
    return np.where(a == np.pi, -np.pi, a)


def log_increment(p: ParticleParams, z) -> complex | np.ndarray:
    """Evaluate log(F(z)/z) with argument taken in [-pi, pi).

    The real part log|F(z)/z| is strictly positive, and the value tends to
    the capacity c as |z| grows.
    """
    arr = _as_points(z, where="log_increment")
    _require_exterior(arr, where="log_increment")
    ratio = _f_apply(p.gamma, arr) / arr
    out = np.log(np.abs(ratio)) + 1j * _arg_halfopen(ratio)
    return _scalar_like(z, out)


@dataclass(frozen=True)
class DistortionRow:
    """Observed distortion ratios at one evaluation point.

    ``linear_ratio`` is |F(z) - e^c z| (|z|-1) / (c |z|) and ``log_ratio`` is
    |log(F(z)/z) - c (z+1)/(z-1)| (|z|-1)^3 / (c^{3/2} |z|^2); both should be
    bounded uniformly in z and delta, with an unknown absolute constant.
    """

    z: complex
    linear_ratio: float
    log_ratio: float
    outside_guaranteed_regime: bool


@dataclass(frozen=True)
class DistortionReport:
    particle: ParticleParams
    rows: tuple[DistortionRow, ...]

    @property
    def max_linear_ratio(self) -> float:
        return max(row.linear_ratio for row in self.rows)

    @property
    def max_log_ratio(self) -> float:
        return max(row.log_ratio for row in self.rows)


def distortion_report(p: ParticleParams, z_grid) -> DistortionReport:
    """Tabulate the two distortion ratios over a grid of points.

    Points with |z - 1| <= 2 delta are flagged ``outside_guaranteed_regime``:
    the bounds the ratios normalise against require that much clearance from
    the attachment point.

    Raises
    ------
    DomainError
        If any grid point has |z| <= 1.
    """
    arr = _as_points(np.atleast_1d(np.asarray(z_grid, dtype=complex)), where="distortion_report")
    _require_exterior(arr, where="distortion_report")
    c = p.capacity
    fz = _f_apply(p.gamma, arr)
    mod = np.abs(arr)
    lin = np.abs(fz - math.exp(c) * arr) * (mod - 1.0) / (c * mod)
    log_gap = np.abs(
        (np.log(np.abs(fz / arr)) + 1j * _arg_halfopen(fz / arr)) - c * (arr + 1.0) / (arr - 1.0)
    )
    logr = log_gap * (mod - 1.0) ** 3 / (c**1.5 * mod**2)
    flagged = np.abs(arr - 1.0) <= 2.0 * p.delta
    rows = tuple(
        DistortionRow(
            z=complex(zz),
            linear_ratio=float(a),
            log_ratio=float(b),
            outside_guaranteed_regime=bool(fl),
        )
        for zz, a, b, fl in zip(arr, lin, logr, flagged)
    )
    return DistortionReport(particle=p, rows=rows)
