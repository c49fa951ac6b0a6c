"""Integrability classification of Pfaff equations theta = 0.

The three normal forms (d mu, lambda d mu, d phi + lambda d mu) are
decided pointwise from |d theta| and the Frobenius 3-form theta ^ d theta,
sampled over a user box with a deterministic low-discrepancy sequence.
Magnitudes are normalized per sample (|d theta| by |theta|, the Frobenius
coefficient by |theta|^2) so the verdict is invariant under constant
rescaling of theta.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .calculus import as_point, exterior_derivative
from .errors import DegeneratePfaffianError, ValidationError

DEGENERACY_TOL = 1e-12
DEFAULT_TOL = 1e-8


class NormalForm(enum.Enum):
    CLOSED = "closed"                       # d theta = 0, theta = d mu
    INTEGRATING_FACTOR = "integrating_factor"  # theta ^ d theta = 0, theta = lambda d mu
    NON_INTEGRABLE = "non_integrable"       # theta = d phi + lambda d mu


@dataclass(frozen=True)
class IntegrabilityClass:
    kind: NormalForm
    max_dtheta: float
    max_frobenius: float
    max_frobenius_raw: float
    per_sample_dtheta: np.ndarray = field(repr=False, default=None)
    per_sample_frobenius: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class RegionSampler:
    """Axis-aligned box sampler with a deterministic Halton sequence."""

    lower: tuple
    upper: tuple
    count: int = 100
    seed: int = 0

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != (3,) or hi.shape != (3,):
            raise ValidationError("region bounds must each have 3 coordinates")
        if not np.all(hi > lo):
            raise ValidationError(f"degenerate region box: lower={lo}, upper={hi}")
        if self.count < 1:
            raise ValidationError(f"sample count must be >= 1, got {self.count}")

    def points(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        unit = qmc.Halton(d=3, scramble=True, seed=self.seed).random(self.count)
        return lo + unit * (hi - lo)


def frobenius_coefficient(theta, p):
    """Volume coefficient of theta ^ d theta at p.

    Vanishes identically iff the Pfaff equation is completely integrable
    near p (Frobenius's theorem).
    """
    p = as_point(p)
    comps = theta.components_at(p)
    if np.linalg.norm(comps) <= DEGENERACY_TOL:
        raise DegeneratePfaffianError(f"Pfaffian vanishes at point {tuple(p)}")
    return float(comps @ exterior_derivative(theta, p).components)


def classify(theta, region, tol=DEFAULT_TOL):
    """Decide the normal form of theta = 0 over the sampled region."""
    points = region.points()
    dtheta_mag = np.empty(len(points))
    frobenius = np.empty(len(points))
    frobenius_raw = np.empty(len(points))
    for k, p in enumerate(points):
        comps = theta.components_at(p)
        norm = np.linalg.norm(comps)
        if norm <= DEGENERACY_TOL:
            raise DegeneratePfaffianError(
                f"Pfaffian vanishes at sample point {tuple(p)}"
            )
        d = exterior_derivative(theta, p).components
        dtheta_mag[k] = np.linalg.norm(d) / norm
        frobenius_raw[k] = comps @ d
        frobenius[k] = frobenius_raw[k] / norm**2
    max_d = float(np.max(dtheta_mag))
    max_f = float(np.max(np.abs(frobenius)))
    max_f_raw = float(np.max(np.abs(frobenius_raw)))
    if max_d <= tol:
        kind = NormalForm.CLOSED
    elif max_f <= tol:
        kind = NormalForm.INTEGRATING_FACTOR
    else:
        kind = NormalForm.NON_INTEGRABLE
    return IntegrabilityClass(kind, max_d, max_f, max_f_raw, dtheta_mag, frobenius)


def constraint_residual(theta, curve):
    """Max normalized |theta(tangent)| over the samples of a path.

    ``curve`` provides ``points`` (n, 3) and ``velocities`` (n, 3); an
    integral curve of theta = 0 returns a residual at the integration
    tolerance.
    """
    points = np.asarray(curve.points, dtype=float)
    velocities = np.asarray(curve.velocities, dtype=float)
    if len(points) < 2:
        raise ValidationError("constraint residual needs >= 2 path samples")
    if not np.all(np.isfinite(velocities)):
        raise ValidationError("path velocities must be finite")
    worst = 0.0
    for p, v in zip(points, velocities):
        comps = theta.components_at(p)
        denom = np.linalg.norm(comps) * np.linalg.norm(v) + 1e-30
        worst = max(worst, abs(comps @ v) / denom)
    return worst
