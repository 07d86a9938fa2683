"""The combined sparsity/rank penalty and its proximal machinery.

The per-element penalty with strengths (mu, lam) is

    mu - max(sqrt(mu) - |x|, 0)^2 + lam*|x|

summed over vector entries, or over singular values in the matrix case.
The first part is flat for |x| >= sqrt(mu), so large entries carry no
extra cost beyond the small l1 slope lam.  mu = 0 reduces the penalty to
lam*||x||_1 (nuclear norm for matrices); lam = 0 leaves the pure flat-top
penalty.

Also provided: the exact minimizer set of the unit-strength shrinkage
subproblem, the subdifferential of the convexified penalty used by the
stationarity certificate, and a brute-force grid oracle for the quadratic
envelope (test-only, O(n^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParameterError
from .numerics import as_matrix, svd


@dataclass(frozen=True)
class RegParams:
    """Penalty strength pair: flat-top energy mu and l1 weight lam."""

    mu: float
    lam: float

    def __post_init__(self):
        if not np.isfinite(self.mu) or self.mu < 0:
            raise ParameterError(f"mu must be finite and non-negative, got {self.mu}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ParameterError(f"lam must be finite and non-negative, got {self.lam}")

    @property
    def root(self) -> float:
        """sqrt(mu), the magnitude below which the flat-top part is active."""
        return math.sqrt(self.mu)


def _check_prox_strength(rho: float) -> float:
    # the closed-form prox needs rho > 1 strictly; at rho = 1 the flat-top
    # curvature cancels the quadratic and the minimizer becomes set-valued
    # (see separable_argmin_set)
    if not np.isfinite(rho) or rho <= 1.0:
        raise ParameterError(f"prox strength rho must exceed 1, got {rho}")
    return float(rho)


def reg_value_scalar(x: float, p: RegParams) -> float:
    """Penalty value at a scalar; lies in [0, mu + lam*|x|]."""
    ax = abs(x)
    return p.mu - max(p.root - ax, 0.0) ** 2 + p.lam * ax


def reg_value_vec(x, p: RegParams) -> float:
    """Sum of the scalar penalty over vector entries."""
    ax = np.abs(np.asarray(x, dtype=float))
    return float(np.sum(p.mu - np.maximum(p.root - ax, 0.0) ** 2 + p.lam * ax))


def reg_value_mat(x, p: RegParams) -> float:
    """Penalty applied to the singular values: lam*||X||_* plus flat-top terms."""
    return reg_value_vec(svd(as_matrix(x)).sigma, p)


def soft_threshold(y, t):
    """sign(y) * max(|y| - t, 0); works on scalars and arrays."""
    if np.any(np.asarray(t) < 0):
        raise ParameterError(f"threshold must be non-negative, got {t}")
    return np.sign(y) * np.maximum(np.abs(y) - t, 0.0)


def prox_scalar(y: float, p: RegParams, rho: float) -> float:
    """Minimizer of (1/rho)*reg_value_scalar(x, p) + (x - y)^2 for rho > 1.

    Computed by soft thresholding at lam/(2*rho) followed by the flat-top
    prox: values at or above sqrt(mu) pass through, values at or below
    sqrt(mu)/rho collapse to zero, and the strip in between is expanded by
    the factor rho/(rho - 1) toward sqrt(mu).  Continuous and odd in y,
    non-decreasing in y.
    """
    rho = _check_prox_strength(rho)
    z = float(soft_threshold(y, p.lam / (2.0 * rho)))
    az = abs(z)
    if az >= p.root:
        return z
    if az * rho <= p.root:
        return 0.0
    return math.copysign((rho * az - p.root) / (rho - 1.0), z)


def prox_vec(y, p: RegParams, rho: float) -> np.ndarray:
    """Entrywise prox_scalar."""
    rho = _check_prox_strength(rho)
    z = soft_threshold(np.asarray(y, dtype=float), p.lam / (2.0 * rho))
    az = np.abs(z)
    mid = np.sign(z) * (rho * az - p.root) / (rho - 1.0)
    return np.where(az >= p.root, z, np.where(az * rho <= p.root, 0.0, mid))


def prox_mat(y, p: RegParams, rho: float) -> np.ndarray:
    """Matrix prox: applies prox_vec to the singular values of y."""
    u, sigma, vt = svd(as_matrix(y))
    return (u * prox_vec(sigma, p, rho)) @ vt


@dataclass(frozen=True)
class ArgminSet:
    """Minimizer set of reg_value_scalar(., p) + (. - z)^2 for a given z.

    kind is 'singleton', 'interval', or 'zero'; the set is the closed
    interval [lo, hi] (a point when lo == hi).  The interval case arises
    only at the tie |z| = sqrt(mu) + lam/2.
    """

    kind: str
    lo: float
    hi: float

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def preferred(self) -> float:
        """Single representative; ties resolve to 0, the sparser choice."""
        return self.lo if self.kind == "singleton" else 0.0


def separable_argmin_set(z: float, p: RegParams) -> ArgminSet:
    """Exact minimizer set of the unit-strength shrinkage subproblem.

    |z| above sqrt(mu) + lam/2 shrinks by lam/2; below, the minimizer is 0;
    exactly at the threshold every point of [0, sqrt(mu)]*sign(z) ties.
    """
    if not np.isfinite(z):
        raise ParameterError(f"z must be finite, got {z}")
    t = p.root + p.lam / 2.0
    az = abs(z)
    if az > t:
        v = z - math.copysign(p.lam / 2.0, z)
        return ArgminSet("singleton", v, v)
    if az == t and az > 0:
        lo, hi = (0.0, p.root) if z > 0 else (-p.root, 0.0)
        return ArgminSet("interval", lo, hi)
    return ArgminSet("zero", 0.0, 0.0)


class SubdiffInterval(NamedTuple):
    """Closed interval [lo, hi]; a singleton when lo == hi."""

    lo: float
    hi: float

    def contains(self, v: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= v <= self.hi + tol

    def signed_distance(self, v: float) -> float:
        """0 inside; positive above hi, negative below lo, by that amount."""
        if v > self.hi:
            return v - self.hi
        if v < self.lo:
            return v - self.lo
        return 0.0


def subdiff_convexified(x: float, p: RegParams) -> SubdiffInterval:
    """Subdifferential at x of reg_value_scalar(., p) + x^2, which is convex.

    Singleton {2x + lam*sign(x)} for |x| >= sqrt(mu), singleton
    {(2*sqrt(mu) + lam)*sign(x)} on the inner strip, and the full interval
    [-(2*sqrt(mu) + lam), 2*sqrt(mu) + lam] at 0.  The two singleton
    branches agree at |x| = sqrt(mu).
    """
    if not np.isfinite(x):
        raise ParameterError(f"x must be finite, got {x}")
    if x == 0.0:
        b = 2.0 * p.root + p.lam
        return SubdiffInterval(-b, b)
    if abs(x) >= p.root:
        v = 2.0 * x + math.copysign(p.lam, x)
    else:
        v = math.copysign(2.0 * p.root + p.lam, x)
    return SubdiffInterval(v, v)


def quadratic_envelope_grid(grid, values, gamma: float, chunk: int = 1024) -> np.ndarray:
    """Quadratic envelope of a sampled 1-D function by exhaustive search.

    Applies T(f)(x) = sup_y [-f(y) - (gamma/2)*(x - y)^2] twice over the
    given grid points.  The double transform equals the quadratic envelope
    wherever the inner maximizers fall inside the grid, so callers should
    tabulate f on a grid padded beyond the region they compare on.  Cost is
    O(n^2); this is a test oracle, not a production path.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.size == 0:
        raise ParameterError("grid must be non-empty")
    if grid.shape != values.shape or grid.ndim != 1:
        raise ParameterError("grid and values must be 1-D arrays of equal length")
    if not np.isfinite(gamma) or gamma <= 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if grid.size > 1:
        steps = np.diff(grid)
        h = steps[0]
        if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(abs(h), 1.0):
            raise ParameterError("grid must be uniformly increasing")
        if abs(grid[0] + grid[-1]) > 1e-9 * max(abs(grid[-1]), 1.0):
            raise ParameterError("grid must be symmetric about 0")
    first = _neg_moreau(grid, values, gamma, chunk)
    return _neg_moreau(grid, first, gamma, chunk)


def _neg_moreau(grid, values, gamma, chunk):
    # sup_y [-f(y) - (gamma/2)(x-y)^2] == -min_y [f(y) + (gamma/2)(x-y)^2]
    out = np.empty_like(values)
    for i in range(0, grid.size, chunk):
        x = grid[i : i + chunk, None]
        out[i : i + chunk] = -np.min(
            values[None, :] + 0.5 * gamma * (x - grid[None, :]) ** 2, axis=1
        )
    return out
