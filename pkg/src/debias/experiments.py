"""Synthetic instance generators, experiment drivers, and metrics.

Three experiment families at desk scale: sparse recovery from random
measurement matrices over a noise sweep, robust 2-D similarity
registration with two competing transform hypotheses, and non-rigid
structure from motion with a low-rank shape basis.  Generators are pure
functions of their seed; drivers fan trials out over a thread pool
(capped by the DEBIAS_THREADS environment variable) and return rows in a
deterministic order regardless of schedule.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DegenerateGeometryError,
    IngestionError,
    ParameterError,
    ParseError,
)
from .numerics import as_matrix, as_vector, projection_complement
from .regularizer import RegParams
from .solver import (
    AdmmSettings,
    NrsfmProblem,
    VectorProblem,
    admm_matrix_nrsfm,
    admm_vector,
    least_squares_init,
    matrix_rank_of,
    oracle_solution,
    support_size,
)

METHOD_ENVELOPE = "envelope"  # lam = 0, flat-top only
METHOD_COMBINED = "combined"  # both terms active
METHOD_L1 = "l1"  # mu = 0; nuclear norm in the matrix case


def _max_workers() -> int:
    raw = os.environ.get("DEBIAS_THREADS", "").strip()
    if raw:
        try:
            k = int(raw)
        except ValueError:
            raise ParameterError(f"DEBIAS_THREADS must be an integer, got {raw!r}") from None
        if k < 1:
            raise ParameterError("DEBIAS_THREADS must be at least 1")
        return k
    return os.cpu_count() or 1


def _map_ordered(fn, items):
    workers = _max_workers()
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class TrialOutcome:
    """One CSV/JSON row of an experiment driver.

    noise_norm holds the sweep's independent variable (the noise level for
    sparse recovery, sqrt(mu) for the rank sweep, 0 for registration).
    cardinality_or_rank is the support size of a vector solution or the
    numerical rank of a matrix solution; for registration it is the number
    of points classified as outliers.  Metrics without a defined value are
    None.
    """

    method: str
    noise_norm: float
    trial: int
    cardinality_or_rank: int
    dist_oracle: Optional[float]
    dist_gt: Optional[float]
    datafit: float
    converged: bool


def sort_outcomes(outcomes) -> list:
    return sorted(outcomes, key=lambda o: (o.method, o.noise_norm, o.trial))


# ---------------------------------------------------------------------------
# sparse recovery from random matrices


@dataclass(frozen=True)
class CsTrialConfig:
    p: int = 100
    n: int = 200
    sparsity: int = 10
    magnitude_range: tuple = (2.0, 4.0)
    noise_norm: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.p < 1 or self.n < 1:
            raise ParameterError("p and n must be positive")
        if not 0 <= self.sparsity <= self.n:
            raise ParameterError("sparsity must lie in [0, n]")
        lo, hi = self.magnitude_range
        if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
            raise ParameterError("magnitude_range must be an ordered finite pair")
        if self.noise_norm < 0:
            raise ParameterError("noise_norm must be non-negative")


def gen_cs_instance(cfg: CsTrialConfig):
    """Draw (problem, ground truth, support) for one trial.

    Columns of A are i.i.d. uniform on the unit sphere (normalized
    Gaussians); the ground truth has cfg.sparsity uniformly chosen support
    entries with magnitudes uniform in magnitude_range and random signs;
    the noise direction is Gaussian, rescaled to exactly cfg.noise_norm.
    """
    rng = np.random.default_rng(cfg.seed)
    a = rng.standard_normal((cfg.p, cfg.n))
    a /= np.linalg.norm(a, axis=0)
    support = np.sort(rng.choice(cfg.n, size=cfg.sparsity, replace=False))
    x_true = np.zeros(cfg.n)
    lo, hi = cfg.magnitude_range
    x_true[support] = rng.uniform(lo, hi, size=cfg.sparsity) * rng.choice(
        [-1.0, 1.0], size=cfg.sparsity
    )
    noise = rng.standard_normal(cfg.p)
    b = a @ x_true
    if cfg.noise_norm > 0:
        b = b + noise * (cfg.noise_norm / np.linalg.norm(noise))
    return VectorProblem(a, b), x_true, support


def l1_weight(n: int, noise_norm: float) -> float:
    """Noise-scaled l1 weight 2*sqrt(2*ln(n))/sqrt(n) * ||noise||."""
    if n < 2:
        raise ParameterError("n must be at least 2")
    return 2.0 * math.sqrt(2.0 * math.log(n)) / math.sqrt(n) * noise_norm


def run_cs_sweep(
    noise_levels,
    trials_per_level: int,
    base_seed: int,
    cfg: CsTrialConfig = CsTrialConfig(),
    settings: AdmmSettings = AdmmSettings(),
    methods=(METHOD_ENVELOPE, METHOD_COMBINED, METHOD_L1),
    mu: float = 1.0,
    combined_scale: float = 1.0 / 6.0,
) -> list:
    """Run the three-method comparison over a noise sweep.

    Per trial: one instance, the least-squares oracle on the true support,
    and each requested method solved from the least-squares warm start.
    The l1 weight is l1_weight(n, level); the combined method uses mu with
    that weight scaled by combined_scale.  A zero l1 weight (noise level 0)
    makes the l1 method degenerate to the unpenalized least-squares fit,
    which is returned directly.  Trial seeds are base_seed plus a global
    trial index, so rows are reproducible and schedule-independent.
    """
    levels = [float(v) for v in noise_levels]
    if any(v < 0 for v in levels):
        raise ParameterError("noise levels must be non-negative")
    if trials_per_level < 1:
        raise ParameterError("trials_per_level must be positive")

    def one(task):
        li, level, trial = task
        from dataclasses import replace

        c = replace(cfg, noise_norm=level, seed=base_seed + li * trials_per_level + trial)
        prob, x_true, support = gen_cs_instance(c)
        x_oracle = oracle_solution(prob, support, 0.0, settings)
        x_ls = least_squares_init(prob)
        lam1 = l1_weight(c.n, level)
        params = {
            METHOD_ENVELOPE: RegParams(mu, 0.0),
            METHOD_COMBINED: RegParams(mu, lam1 * combined_scale),
            METHOD_L1: RegParams(0.0, lam1),
        }
        rows = []
        for method in methods:
            pm = params[method]
            if pm.mu == 0.0 and pm.lam == 0.0:
                x, converged = x_ls, True
            else:
                res = admm_vector(prob, pm, settings, x0=x_ls)
                x, converged = res.x, res.converged
            rows.append(
                TrialOutcome(
                    method=method,
                    noise_norm=level,
                    trial=trial,
                    cardinality_or_rank=support_size(x),
                    dist_oracle=float(np.linalg.norm(x - x_oracle)),
                    dist_gt=float(np.linalg.norm(x - x_true)),
                    datafit=float(np.linalg.norm(prob.a @ x - prob.b)),
                    converged=converged,
                )
            )
        return rows

    tasks = [
        (li, level, t)
        for li, level in enumerate(levels)
        for t in range(trials_per_level)
    ]
    return sort_outcomes(r for rows in _map_ordered(one, tasks) for r in rows)


# ---------------------------------------------------------------------------
# 2-D similarity registration with outliers


@dataclass(frozen=True)
class RegistrationInstance:
    """Model/target point sets; the first inlier_count points follow
    true_transform, the rest follow outlier_transform."""

    model_points: np.ndarray
    target_points: np.ndarray
    inlier_count: int
    true_transform: np.ndarray
    outlier_transform: np.ndarray

    @property
    def n_points(self) -> int:
        return self.model_points.shape[1]


def apply_similarity(params, pts) -> np.ndarray:
    """Apply the scaled rotation plus translation encoded as (a, b, t1, t2)."""
    a, b, t1, t2 = np.asarray(params, dtype=float)
    return np.array([[a, -b], [b, a]]) @ pts + np.array([[t1], [t2]])


def gen_registration_instance(
    seed: int, n_points: int = 100, inlier_count: int = 60
) -> RegistrationInstance:
    """Two-hypothesis synthetic registration data.

    n_points standard-normal 2-D model points; the first inlier_count are
    mapped by one random similarity, the rest by an independent one.  Both
    transforms draw a, b from N(0, 1) and the translation from N(0, 5 I).
    No additive noise; the competing hypothesis is the only corruption.
    """
    if not 0 <= inlier_count <= n_points:
        raise ParameterError("inlier_count must lie in [0, n_points]")
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((2, n_points))

    def draw():
        ab = rng.standard_normal(2)
        t = rng.standard_normal(2) * math.sqrt(5.0)
        return np.array([ab[0], ab[1], t[0], t[1]])

    t_in, t_out = draw(), draw()
    targets = np.empty_like(pts)
    targets[:, :inlier_count] = apply_similarity(t_in, pts[:, :inlier_count])
    targets[:, inlier_count:] = apply_similarity(t_out, pts[:, inlier_count:])
    return RegistrationInstance(pts, targets, inlier_count, t_in, t_out)


def _stack_lsq_system(model_points, target_points):
    """Rows 2i, 2i+1 express point i's residual linearly in (a, b, t1, t2)."""
    pts = as_matrix(model_points, "model_points")
    tgt = as_matrix(target_points, "target_points")
    if pts.shape[0] != 2 or tgt.shape != pts.shape:
        raise ParameterError("point sets must be matching 2-by-N arrays")
    n = pts.shape[1]
    m = np.zeros((2 * n, 4))
    m[0::2, 0] = pts[0]
    m[0::2, 1] = -pts[1]
    m[0::2, 2] = 1.0
    m[1::2, 0] = pts[1]
    m[1::2, 1] = pts[0]
    m[1::2, 3] = 1.0
    v = tgt.T.ravel()
    return m, v


def build_registration_problem(inst: RegistrationInstance):
    """Eliminate the transform to get a sparse-outlier problem.

    Returns (VectorProblem, M, v) with A the projector onto the complement
    of the transform column space and b = A v; A has a 4-dimensional
    nullspace, so rank(A) = 2N - 4.
    """
    m, v = _stack_lsq_system(inst.model_points, inst.target_points)
    a = projection_complement(m)
    return VectorProblem(a, a @ v), m, v


def recover_transform(m, v, x) -> np.ndarray:
    """Closed-form transform given the outlier vector: lstsq of M y = v - x."""
    m = as_matrix(m, "m")
    v, x = as_vector(v, "v"), as_vector(x, "x")
    if v.shape != x.shape or m.shape[0] != v.shape[0]:
        raise ParameterError("shapes of m, v, x are inconsistent")
    y, _, rank, _ = np.linalg.lstsq(m, v - x, rcond=None)
    if rank < m.shape[1]:
        raise DegenerateGeometryError("transform system is rank deficient")
    return y


def classify_outliers(x, n_points: int, tol: float = 1e-9) -> np.ndarray:
    """Point i is an outlier iff either of its two entries of x is nonzero."""
    x = as_vector(x, "x")
    if x.shape[0] != 2 * n_points:
        raise ParameterError(f"x must have length {2 * n_points}, got {x.shape[0]}")
    return np.any(np.abs(x.reshape(n_points, 2)) > tol, axis=1)


def inlier_fit(m, v, x, inlier_count: int) -> float:
    """Registration residual of the recovered transform on the true inliers.

    Equals the norm of (A x - b) restricted to the inlier coordinates
    whenever x vanishes there; unlike that expression it stays informative
    when a run gets stuck near the dense least-squares solution, because
    the compensation x is not credited against the inlier residuals.
    """
    y = recover_transform(m, v, x)
    return float(np.linalg.norm((m @ y - v)[: 2 * inlier_count]))


def registration_oracle(inst: RegistrationInstance, m, v):
    """Outlier vector implied by fitting the transform on the true inliers:
    zero on inlier coordinates, the residual elsewhere."""
    rows = 2 * inst.inlier_count
    y, _, rank, _ = np.linalg.lstsq(m[:rows], v[:rows], rcond=None)
    if rank < m.shape[1]:
        raise DegenerateGeometryError("inlier system is rank deficient")
    x = np.zeros_like(v)
    resid = v - m @ y
    x[rows:] = resid[rows:]
    return x, y


def run_registration_sweep(
    n_instances: int,
    base_seed: int,
    settings: AdmmSettings = AdmmSettings(),
    methods=(METHOD_ENVELOPE, METHOD_COMBINED, METHOD_L1),
    mu: float = 1.0,
    lam_combined: float = 0.5,
    lam_l1: float = 2.0,
    n_points: int = 100,
    inlier_count: int = 60,
) -> list:
    """Registration trials from the least-squares warm start.

    Row fields: cardinality_or_rank is the outlier point count, datafit the
    inlier_fit metric, dist_gt the parameter distance to the inlier
    transform, dist_oracle the distance to the true-support outlier vector.
    """
    if n_instances < 1:
        raise ParameterError("n_instances must be positive")
    params = {
        METHOD_ENVELOPE: RegParams(mu, 0.0),
        METHOD_COMBINED: RegParams(mu, lam_combined),
        METHOD_L1: RegParams(0.0, lam_l1),
    }

    def one(i):
        inst = gen_registration_instance(base_seed + i, n_points, inlier_count)
        prob, m, v = build_registration_problem(inst)
        x_or, _ = registration_oracle(inst, m, v)
        x_ls = least_squares_init(prob)
        rows = []
        for method in methods:
            res = admm_vector(prob, params[method], settings, x0=x_ls)
            y_est = recover_transform(m, v, res.x)
            rows.append(
                TrialOutcome(
                    method=method,
                    noise_norm=0.0,
                    trial=i,
                    cardinality_or_rank=int(
                        np.sum(classify_outliers(res.x, inst.n_points))
                    ),
                    dist_oracle=float(np.linalg.norm(res.x - x_or)),
                    dist_gt=float(np.linalg.norm(y_est - inst.true_transform)),
                    datafit=inlier_fit(m, v, res.x, inst.inlier_count),
                    converged=res.converged,
                )
            )
        return rows

    return sort_outcomes(
        r for rows in _map_ordered(one, range(n_instances)) for r in rows
    )


class RegistrationFit(NamedTuple):
    """Solved registration instance: outlier vector, recovered transform
    parameters, per-point outlier flags, solver result, and the eliminated
    problem it was solved on."""

    x: np.ndarray
    transform: np.ndarray
    outlier_flags: np.ndarray
    result: object
    problem: VectorProblem


def register_correspondences(
    model_points,
    target_points,
    p: RegParams,
    settings: AdmmSettings = AdmmSettings(),
) -> RegistrationFit:
    """Solve one registration instance from given 2-D correspondences."""
    m, v = _stack_lsq_system(model_points, target_points)
    a = projection_complement(m)
    prob = VectorProblem(a, a @ v)
    res = admm_vector(prob, p, settings, x0=least_squares_init(prob))
    y = recover_transform(m, v, res.x)
    flags = classify_outliers(res.x, np.asarray(model_points).shape[1])
    return RegistrationFit(res.x, y, flags, res, prob)


# ---------------------------------------------------------------------------
# non-rigid structure from motion


@dataclass(frozen=True)
class NrsfmInstance:
    """Camera operator and measurements plus optional ground truth."""

    problem: NrsfmProblem
    x_gt: Optional[np.ndarray]
    true_rank: Optional[int]


class NrsfmMetrics(NamedTuple):
    datafit: float
    gt_distance: Optional[float]
    rank: int


def gen_nrsfm_instance(frames: int, points: int, rank: int, seed: int) -> NrsfmInstance:
    """Shape-basis synthetic data: the wide reshape of the structure matrix
    factors as (F x rank) times (rank x 3m) Gaussians; cameras are the top
    two rows of QR-orthonormalized random 3x3 matrices; measurements are
    exact projections (no noise)."""
    if rank < 1 or rank > min(frames, 3 * points):
        raise ParameterError("rank must lie in [1, min(frames, 3*points)]")
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal((frames, rank))
    basis = rng.standard_normal((rank, 3 * points))
    x_gt = (coeff @ basis).reshape(3 * frames, points)
    cameras = []
    for _ in range(frames):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        cameras.append(q[:2])
    problem = NrsfmProblem.from_cameras(cameras, _project(cameras, x_gt))
    return NrsfmInstance(problem, x_gt, rank)


def _project(cameras, x) -> np.ndarray:
    return np.vstack([cameras[i] @ x[3 * i : 3 * i + 3] for i in range(len(cameras))])


def nrsfm_metrics(inst: NrsfmInstance, x) -> NrsfmMetrics:
    """Data fit ||R x - M||_F, ground-truth distance (None without ground
    truth), and the numerical rank of the wide reshape."""
    prob = inst.problem
    x = as_matrix(x, "x")
    if x.shape != (3 * prob.frames, prob.points):
        raise ParameterError(
            f"x must be {3 * prob.frames}x{prob.points}, got {x.shape}"
        )
    datafit = float(np.linalg.norm(prob.r @ x - prob.m))
    gt = None if inst.x_gt is None else float(np.linalg.norm(x - inst.x_gt))
    return NrsfmMetrics(datafit, gt, matrix_rank_of(x, prob.frames))


def run_nrsfm_sweep(
    sqrt_mus,
    n_seeds: int = 10,
    base_seed: int = 0,
    frames: int = 20,
    points: int = 15,
    rank: int = 3,
    lam_combined: float = 5.0,
    settings: AdmmSettings = AdmmSettings(),
    methods=(METHOD_ENVELOPE, METHOD_COMBINED, METHOD_L1),
) -> list:
    """Rank-regularization sweep over sqrt(mu) values.

    The combined method keeps lam_combined fixed; the l1 method is the
    nuclear-norm objective with weight 2*sqrt(mu).  All methods at a given
    seed start from the same random matrix.  Rows reuse the noise_norm
    column for sqrt(mu) and the trial column for the seed index.
    """
    sqrt_mus = [float(s) for s in sqrt_mus]
    if any(s <= 0 for s in sqrt_mus):
        raise ParameterError("sqrt(mu) values must be positive")
    if n_seeds < 1:
        raise ParameterError("n_seeds must be positive")

    def one(si):
        inst = gen_nrsfm_instance(frames, points, rank, base_seed + si)
        x0 = np.random.default_rng((base_seed + si, 17)).standard_normal(
            (3 * frames, points)
        )
        rows = []
        for sq in sqrt_mus:
            params = {
                METHOD_ENVELOPE: RegParams(sq * sq, 0.0),
                METHOD_COMBINED: RegParams(sq * sq, lam_combined),
                METHOD_L1: RegParams(0.0, 2.0 * sq),
            }
            for method in methods:
                res = admm_matrix_nrsfm(inst.problem, params[method], settings, x0=x0)
                met = nrsfm_metrics(inst, res.x)
                rows.append(
                    TrialOutcome(
                        method=method,
                        noise_norm=sq,
                        trial=si,
                        cardinality_or_rank=met.rank,
                        dist_oracle=None,
                        dist_gt=met.gt_distance,
                        datafit=met.datafit,
                        converged=res.converged,
                    )
                )
        return rows

    return sort_outcomes(
        r for rows in _map_ordered(one, range(n_seeds)) for r in rows
    )


# ---------------------------------------------------------------------------
# file ingestion


def write_mocap(path, problem: NrsfmProblem, x_gt=None) -> None:
    """Write the track-file format: header `F m has_gt`, then per frame two
    camera rows of 3 floats, then the 2F x m measurements, then (when
    present) the 3F x m ground truth."""
    lines = [f"{problem.frames} {problem.points} {0 if x_gt is None else 1}"]

    def fmt(row):
        return " ".join(f"{v:.17g}" for v in row)

    for i in range(problem.frames):
        cam = problem.camera(i)
        lines.append(fmt(cam[0]))
        lines.append(fmt(cam[1]))
    lines.extend(fmt(row) for row in problem.m)
    if x_gt is not None:
        x_gt = as_matrix(x_gt, "x_gt")
        if x_gt.shape != (3 * problem.frames, problem.points):
            raise ParameterError("x_gt shape does not match the problem")
        lines.extend(fmt(row) for row in x_gt)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_float_row(line, count, lineno):
    toks = line.split()
    if len(toks) != count:
        raise ParseError(f"expected {count} entries, found {len(toks)}", line=lineno)
    try:
        vals = [float(t) for t in toks]
    except ValueError:
        raise ParseError("unparseable entry", line=lineno) from None
    if not all(np.isfinite(v) for v in vals):
        raise ParseError("non-finite entry", line=lineno)
    return vals


def read_mocap(path) -> NrsfmInstance:
    """Read the track-file format written by :func:`write_mocap`.

    Camera blocks failing orthonormality beyond 1e-6 raise IngestionError
    naming the frame; structural problems raise ParseError with a line
    number.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing 'F m has_gt' header", line=1)
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError("header must be 'F m has_gt'", line=1)
    try:
        frames, points, has_gt = int(head[0]), int(head[1]), int(head[2])
    except ValueError:
        raise ParseError("header must hold three integers", line=1) from None
    if frames < 1 or points < 1 or has_gt not in (0, 1):
        raise ParseError("header values out of range", line=1)
    need = 1 + 2 * frames + 2 * frames + (3 * frames if has_gt else 0)
    if len(lines) < need:
        raise ParseError(
            f"expected at least {need} lines, file ends after {len(lines)}",
            line=len(lines) + 1,
        )
    pos = 1
    cameras = []
    for i in range(frames):
        r0 = _parse_float_row(lines[pos], 3, pos + 1)
        r1 = _parse_float_row(lines[pos + 1], 3, pos + 2)
        cam = np.array([r0, r1])
        err = np.max(np.abs(cam @ cam.T - np.eye(2)))
        if err > 1e-6:
            raise IngestionError(
                f"camera block for frame {i} is not orthonormal (error {err:.3g})"
            )
        cameras.append(cam)
        pos += 2
    meas = np.array(
        [_parse_float_row(lines[pos + j], points, pos + j + 1) for j in range(2 * frames)]
    )
    pos += 2 * frames
    x_gt = None
    if has_gt:
        if len(lines) < pos + 3 * frames:
            raise ParseError("ground-truth section truncated", line=len(lines) + 1)
        x_gt = np.array(
            [
                _parse_float_row(lines[pos + j], points, pos + j + 1)
                for j in range(3 * frames)
            ]
        )
        pos += 3 * frames
    for j in range(pos, len(lines)):
        if lines[j].strip():
            raise ParseError("unexpected extra data", line=j + 1)
    problem = NrsfmProblem.from_cameras(cameras, meas, block_tol=2e-6)
    return NrsfmInstance(problem, x_gt, None)


def write_correspondences(path, model_points, target_points) -> None:
    """Write the correspondence format: a count line, then one
    `p_x p_y q_x q_y` line per match."""
    pts = as_matrix(model_points, "model_points")
    tgt = as_matrix(target_points, "target_points")
    if pts.shape[0] != 2 or tgt.shape != pts.shape:
        raise ParameterError("point sets must be matching 2-by-N arrays")
    with open(path, "w") as fh:
        fh.write(f"{pts.shape[1]}\n")
        for i in range(pts.shape[1]):
            fh.write(
                f"{pts[0, i]:.17g} {pts[1, i]:.17g} {tgt[0, i]:.17g} {tgt[1, i]:.17g}\n"
            )


def read_correspondences(path):
    """Read the correspondence format; returns (model 2xN, target 2xN)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing count header", line=1)
    try:
        n = int(lines[0].split()[0])
    except ValueError:
        raise ParseError("count header must be an integer", line=1) from None
    if n < 1:
        raise ParseError("count must be positive", line=1)
    if len(lines) < 1 + n:
        raise ParseError(
            f"expected {n} correspondence lines, file ends after {len(lines) - 1}",
            line=len(lines) + 1,
        )
    rows = [_parse_float_row(lines[1 + i], 4, i + 2) for i in range(n)]
    arr = np.asarray(rows)
    return arr[:, :2].T.copy(), arr[:, 2:].T.copy()
