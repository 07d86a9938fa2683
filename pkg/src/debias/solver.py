"""ADMM solvers for the penalized recovery objectives, plus certificates.

The vector objective is  reg_value_vec(x, p) + ||A x - b||^2  and the
matrix analogue penalizes the singular values of the wide reshape of the
non-rigid structure matrix.  Both are optimized by the same two-block
splitting: a prox half-step on the penalized copy, a cached regularized
least-squares half-step on the data-fit copy, and a running dual update.

Certificates: a first-order stationarity check with per-coordinate
margins, oracle-solution construction and its sufficient conditions, an
exact restricted-isometry constant by support enumeration, and the
support-separation predicate for pairs of stationary points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import CapacityError, ParameterError
from .numerics import as_matrix, as_vector, make_ls_cache, svd
from .regularizer import (
    RegParams,
    prox_mat,
    prox_vec,
    reg_value_mat,
    reg_value_vec,
    subdiff_convexified,
)

# plateau window: termination requires the objective range over this many
# trailing iterations to stay within objective_tol
_PLATEAU = 6


@dataclass(frozen=True)
class VectorProblem:
    """Dense measurement matrix and observation vector."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_matrix(self.a, "a"))
        object.__setattr__(self, "b", as_vector(self.b, "b"))
        if self.a.shape[0] != self.b.shape[0]:
            raise ParameterError(
                f"a has {self.a.shape[0]} rows but b has length {self.b.shape[0]}"
            )

    @property
    def n(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True)
class NrsfmProblem:
    """Block-diagonal orthographic camera operator and 2D track matrix.

    r is 2F-by-3F with 2-by-3 blocks of orthonormal rows down the diagonal
    and exact zeros elsewhere; m holds the stacked image coordinates, one
    column per tracked point.
    """

    r: np.ndarray
    m: np.ndarray
    frames: int
    points: int
    block_tol: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "r", as_matrix(self.r, "r"))
        object.__setattr__(self, "m", as_matrix(self.m, "m"))
        f, pts = self.frames, self.points
        if f < 1 or pts < 1:
            raise ParameterError("frames and points must be positive")
        if self.r.shape != (2 * f, 3 * f):
            raise ParameterError(
                f"camera operator must be {2 * f}x{3 * f}, got {self.r.shape}"
            )
        if self.m.shape != (2 * f, pts):
            raise ParameterError(
                f"measurements must be {2 * f}x{pts}, got {self.m.shape}"
            )
        mask = np.ones_like(self.r, dtype=bool)
        for i in range(f):
            mask[2 * i : 2 * i + 2, 3 * i : 3 * i + 3] = False
        if np.any(self.r[mask] != 0.0):
            raise ParameterError("camera operator has nonzero entries off the blocks")
        for i in range(f):
            blk = self.camera(i)
            err = np.max(np.abs(blk @ blk.T - np.eye(2)))
            if err > self.block_tol:
                raise ParameterError(
                    f"camera block {i} is not orthonormal (error {err:.3g})"
                )

    def camera(self, i: int) -> np.ndarray:
        return self.r[2 * i : 2 * i + 2, 3 * i : 3 * i + 3]

    @classmethod
    def from_cameras(cls, cameras, m, block_tol: float = 1e-8) -> "NrsfmProblem":
        """Assemble the block-diagonal operator from a list of 2x3 blocks."""
        f = len(cameras)
        r = np.zeros((2 * f, 3 * f))
        for i, cam in enumerate(cameras):
            r[2 * i : 2 * i + 2, 3 * i : 3 * i + 3] = as_matrix(cam, f"camera {i}")
        m = as_matrix(m, "m")
        return cls(r, m, f, m.shape[1], block_tol)


@dataclass(frozen=True)
class AdmmSettings:
    rho: float = 2.0
    max_iters: int = 2000
    primal_tol: float = 1e-8
    objective_tol: float = 1e-10

    def __post_init__(self):
        if not np.isfinite(self.rho) or self.rho <= 1.0:
            raise ParameterError(f"rho must exceed 1, got {self.rho}")
        if self.max_iters < 1:
            raise ParameterError("max_iters must be at least 1")
        if self.primal_tol <= 0 or self.objective_tol <= 0:
            raise ParameterError("tolerances must be positive")


@dataclass(frozen=True)
class AdmmResult:
    """Solver output: x is the penalized copy, y the data-fit copy.

    objective recomputes as reg_value(x) + ||A y - b||^2 and
    primal_residual as ||x - y||.  The traces hold one entry per iteration.
    """

    x: np.ndarray
    y: np.ndarray
    objective: float
    primal_residual: float
    iterations: int
    terminated_by: str
    objective_trace: np.ndarray = field(repr=False, default=None)
    primal_residual_trace: np.ndarray = field(repr=False, default=None)

    @property
    def converged(self) -> bool:
        return self.terminated_by == "tolerance"


def objective_vec(prob: VectorProblem, x, p: RegParams) -> float:
    """reg_value_vec(x, p) + ||A x - b||^2."""
    x = as_vector(x, "x")
    if x.shape[0] != prob.n:
        raise ParameterError(f"x has length {x.shape[0]}, expected {prob.n}")
    r = prob.a @ x - prob.b
    return reg_value_vec(x, p) + float(r @ r)


def least_squares_init(prob: VectorProblem) -> np.ndarray:
    """Minimum-norm least-squares solution of ||A x - b||, the usual warm start."""
    return np.linalg.lstsq(prob.a, prob.b, rcond=None)[0]


def _check_solver_params(p: RegParams):
    if p.mu == 0.0 and p.lam == 0.0:
        raise ParameterError("mu and lam cannot both be zero in a solver call")


def admm_vector(
    prob: VectorProblem,
    p: RegParams,
    settings: AdmmSettings = AdmmSettings(),
    x0=None,
) -> AdmmResult:
    """Minimize reg_value_vec(x, p) + ||A x - b||^2 by two-block splitting.

    Iterates
        x <- prox_vec(y - eta, p, rho)
        y <- (rho I + A^T A)^-1 (rho (x + eta) + A^T b)
        eta <- eta + x - y
    from y = x0, eta = 0, and stops once ||x - y|| <= primal_tol with the
    objective flat within objective_tol over the trailing window, or at
    max_iters.  The objective is nonconvex for mu > 0, so the limit depends
    on x0; use stationarity_check to certify it.
    """
    _check_solver_params(p)
    x0 = np.zeros(prob.n) if x0 is None else as_vector(x0, "x0")
    if x0.shape[0] != prob.n:
        raise ParameterError(f"x0 has length {x0.shape[0]}, expected {prob.n}")
    cache = make_ls_cache(prob.a, settings.rho)
    atb = prob.a.T @ prob.b

    y = x0.copy()
    eta = np.zeros(prob.n)
    x = x0.copy()
    objs, primals = [], []
    terminated = "max_iters"
    iters = settings.max_iters
    for t in range(1, settings.max_iters + 1):
        x = prox_vec(y - eta, p, settings.rho)
        y = cache.solve(settings.rho * (x + eta) + atb)
        eta += x - y
        resid = prob.a @ y - prob.b
        primal = float(np.linalg.norm(x - y))
        obj = reg_value_vec(x, p) + float(resid @ resid)
        objs.append(obj)
        primals.append(primal)
        if (
            primal <= settings.primal_tol
            and len(objs) >= _PLATEAU
            and max(objs[-_PLATEAU:]) - min(objs[-_PLATEAU:]) <= settings.objective_tol
        ):
            terminated = "tolerance"
            iters = t
            break
    return AdmmResult(
        x=x,
        y=y,
        objective=objs[-1],
        primal_residual=primals[-1],
        iterations=iters,
        terminated_by=terminated,
        objective_trace=np.asarray(objs),
        primal_residual_trace=np.asarray(primals),
    )


def reshape_to_modes(x, frames: int) -> np.ndarray:
    """Rearrange a (3F x m) coordinate stack into the (F x 3m) layout whose
    rank counts deformation modes.  A pure index permutation, so norms are
    preserved exactly."""
    x = as_matrix(x, "x")
    if x.shape[0] != 3 * frames:
        raise ParameterError(f"expected {3 * frames} rows, got {x.shape[0]}")
    return x.reshape(frames, 3 * x.shape[1])


def reshape_to_coords(x_modes, points: int) -> np.ndarray:
    """Inverse of reshape_to_modes."""
    x_modes = as_matrix(x_modes, "x_modes")
    if x_modes.shape[1] != 3 * points:
        raise ParameterError(f"expected {3 * points} columns, got {x_modes.shape[1]}")
    return x_modes.reshape(-1, points)


def admm_matrix_nrsfm(
    prob: NrsfmProblem,
    p: RegParams,
    settings: AdmmSettings = AdmmSettings(),
    x0=None,
) -> AdmmResult:
    """Minimize reg_value_mat(wide(X), p) + ||R X - M||_F^2 over 3F-by-m X.

    Same splitting as admm_vector; the prox acts on the singular values of
    the wide reshape and the data-fit solve exploits the block-diagonal
    structure of R^T R, reducing to one 3x3 Cholesky solve per frame.
    """
    _check_solver_params(p)
    f, m = prob.frames, prob.points
    x0 = np.zeros((3 * f, m)) if x0 is None else as_matrix(x0, "x0")
    if x0.shape != (3 * f, m):
        raise ParameterError(f"x0 must be {3 * f}x{m}, got {x0.shape}")

    cams = [prob.camera(i) for i in range(f)]
    factors = [
        cho_factor(settings.rho * np.eye(3) + cam.T @ cam, lower=True) for cam in cams
    ]
    rtm = np.vstack([cams[i].T @ prob.m[2 * i : 2 * i + 2] for i in range(f)])

    y = x0.copy()
    eta = np.zeros_like(y)
    x = x0.copy()
    objs, primals = [], []
    terminated = "max_iters"
    iters = settings.max_iters
    for t in range(1, settings.max_iters + 1):
        x = reshape_to_coords(
            prox_mat(reshape_to_modes(y - eta, f), p, settings.rho), m
        )
        rhs = settings.rho * (x + eta) + rtm
        for i in range(f):
            y[3 * i : 3 * i + 3] = cho_solve(factors[i], rhs[3 * i : 3 * i + 3])
        eta += x - y
        resid = np.vstack([cams[i] @ y[3 * i : 3 * i + 3] for i in range(f)]) - prob.m
        primal = float(np.linalg.norm(x - y))
        obj = reg_value_mat(reshape_to_modes(x, f), p) + float(np.sum(resid * resid))
        objs.append(obj)
        primals.append(primal)
        if (
            primal <= settings.primal_tol
            and len(objs) >= _PLATEAU
            and max(objs[-_PLATEAU:]) - min(objs[-_PLATEAU:]) <= settings.objective_tol
        ):
            terminated = "tolerance"
            iters = t
            break
    return AdmmResult(
        x=x,
        y=y,
        objective=objs[-1],
        primal_residual=primals[-1],
        iterations=iters,
        terminated_by=terminated,
        objective_trace=np.asarray(objs),
        primal_residual_trace=np.asarray(primals),
    )


def forbidden_band(p: RegParams, delta_k: float) -> tuple:
    """|z| interval on which the separation guarantee's growth bound fails:
    [(1-d)*sqrt(mu) + lam/2, sqrt(mu)/(1-d) + lam/2]."""
    if not np.isfinite(delta_k) or not 0.0 <= delta_k < 1.0:
        raise ParameterError(f"delta_k must lie in [0, 1), got {delta_k}")
    half = p.lam / 2.0
    return ((1.0 - delta_k) * p.root + half, p.root / (1.0 - delta_k) + half)


@dataclass(frozen=True)
class StationarityReport:
    """Per-coordinate first-order evidence for a candidate solution.

    z is the pulled-back point (I - A^T A) x + A^T b; x is stationary iff
    2 z_i lies in the convexified subdifferential at x_i for every i.
    per_coordinate_margin holds the signed distance of 2 z_i from that
    interval (0 when inside), and forbidden_band_hits lists coordinates
    whose |z_i| falls in the band where separation cannot be certified.
    """

    is_stationary: bool
    z: np.ndarray
    per_coordinate_margin: np.ndarray
    forbidden_band_hits: list
    tolerance: float
    delta_k: Optional[float] = None


def stationarity_check(
    prob: VectorProblem,
    x,
    p: RegParams,
    tol: float = 1e-6,
    delta_k: Optional[float] = None,
) -> StationarityReport:
    """First-order certificate for the vector objective at x."""
    x = as_vector(x, "x")
    if x.shape[0] != prob.n:
        raise ParameterError(f"x has length {x.shape[0]}, expected {prob.n}")
    if tol <= 0:
        raise ParameterError("tol must be positive")
    z = x - prob.a.T @ (prob.a @ x - prob.b)
    margins = np.array(
        [subdiff_convexified(xi, p).signed_distance(2.0 * zi) for xi, zi in zip(x, z)]
    )
    hits = []
    if delta_k is not None:
        lo, hi = forbidden_band(p, delta_k)
        hits = [int(i) for i in np.flatnonzero((np.abs(z) >= lo) & (np.abs(z) <= hi))]
    return StationarityReport(
        is_stationary=bool(np.all(np.abs(margins) <= tol)),
        z=z,
        per_coordinate_margin=margins,
        forbidden_band_hits=hits,
        tolerance=tol,
        delta_k=delta_k,
    )


def _as_support(support, n: int) -> np.ndarray:
    idx = np.unique(np.asarray(list(support), dtype=int)) if len(list(support)) else np.array([], dtype=int)
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise ParameterError(f"support indices must lie in [0, {n})")
    return idx


def oracle_solution(
    prob: VectorProblem, support, lam: float, settings: AdmmSettings = AdmmSettings()
) -> np.ndarray:
    """Best fit restricted to a support: minimizes lam*||x||_1 + ||A x - b||^2
    over vectors vanishing off the support.

    lam = 0 is plain least squares over the support columns (the zero
    vector when the support is empty).  lam > 0 reuses the ADMM machinery
    on the restricted columns with the flat-top part switched off.
    """
    if not np.isfinite(lam) or lam < 0:
        raise ParameterError(f"lam must be finite and non-negative, got {lam}")
    idx = _as_support(support, prob.n)
    x = np.zeros(prob.n)
    if idx.size == 0:
        return x
    a_s = prob.a[:, idx]
    ls = np.linalg.lstsq(a_s, prob.b, rcond=None)[0]
    if lam == 0.0:
        x[idx] = ls
        return x
    res = admm_vector(VectorProblem(a_s, prob.b), RegParams(0.0, lam), settings, x0=ls)
    x[idx] = res.x
    return x


@dataclass(frozen=True)
class OracleConditionReport:
    """Sufficient conditions for the restricted fit to be stationary in the
    full objective: nonzero support entries clear sqrt(mu), and the
    residual correlates with off-support columns below sqrt(mu)."""

    conditions_hold: bool
    magnitude_ok: bool
    noise_ok: bool
    magnitude_margin: float
    noise_margin: float


def oracle_condition_check(
    prob: VectorProblem, x_s, support, p: RegParams
) -> OracleConditionReport:
    x_s = as_vector(x_s, "x_s")
    if x_s.shape[0] != prob.n:
        raise ParameterError(f"x_s has length {x_s.shape[0]}, expected {prob.n}")
    idx = _as_support(support, prob.n)
    off = np.setdiff1d(np.arange(prob.n), idx)
    if off.size and np.max(np.abs(x_s[off])) > 1e-9:
        raise ParameterError("x_s has nonzero entries off the given support")
    eps = prob.a @ x_s - prob.b
    noise_margin = p.root - (
        float(np.max(np.abs(prob.a[:, off].T @ eps))) if off.size else 0.0
    )
    nz = idx[np.abs(x_s[idx]) > 1e-9] if idx.size else idx
    magnitude_margin = (
        float(np.min(np.abs(x_s[nz])) - p.root) if nz.size else math.inf
    )
    magnitude_ok = magnitude_margin >= 0.0
    noise_ok = noise_margin > 0.0
    return OracleConditionReport(
        conditions_hold=magnitude_ok and noise_ok,
        magnitude_ok=magnitude_ok,
        noise_ok=noise_ok,
        magnitude_margin=magnitude_margin,
        noise_margin=noise_margin,
    )


def rip_delta_bruteforce(a, k: int, max_supports: int = 2_000_000) -> float:
    """Exact restricted-isometry constant by support enumeration.

    Returns the largest deviation from 1 of an eigenvalue of any k-column
    Gram submatrix of A.  Exhaustive, so binomial(n, k) must stay at or
    below max_supports.
    """
    a = as_matrix(a, "a")
    n = a.shape[1]
    if not 1 <= k <= n:
        raise ParameterError(f"k must lie in [1, {n}], got {k}")
    total = math.comb(n, k)
    if total > max_supports:
        raise CapacityError(
            f"enumerating {total} supports exceeds the cap of {max_supports}; "
            "reduce k or the column count"
        )
    gram = a.T @ a
    delta = 0.0
    for s in itertools.combinations(range(n), k):
        w = np.linalg.eigvalsh(gram[np.ix_(s, s)])
        delta = max(delta, w[-1] - 1.0, 1.0 - w[0])
    return delta


def count_differing(x1, x2, tol: float = 1e-9) -> int:
    """Number of coordinates where the two vectors differ beyond tol."""
    x1, x2 = as_vector(x1, "x1"), as_vector(x2, "x2")
    if x1.shape != x2.shape:
        raise ParameterError("vectors must have equal length")
    return int(np.sum(np.abs(x1 - x2) > tol))


def separation_check(x1, x2, k: int, tol: float = 1e-9) -> bool:
    """True iff the vectors differ in more than k coordinates."""
    return count_differing(x1, x2, tol) > k


def support_size(x, tol: float = 1e-9) -> int:
    """Cardinality with entries at or below tol counted as zero."""
    return int(np.sum(np.abs(as_vector(x, "x")) > tol))


def numerical_rank(sigma, rel_tol: float = 1e-6) -> int:
    """Count singular values above rel_tol times the largest one."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0 or np.max(sigma) <= 0.0:
        return 0
    return int(np.sum(sigma > rel_tol * np.max(sigma)))


def matrix_rank_of(x, frames: int, rel_tol: float = 1e-6) -> int:
    """Numerical rank of the wide reshape of a 3F-by-m structure matrix."""
    return numerical_rank(svd(reshape_to_modes(x, frames)).sigma, rel_tol)
