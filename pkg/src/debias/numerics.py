"""Dense linear-algebra substrate.

Thin, contract-checked wrappers around numpy/scipy: SVD with a deterministic
sign convention, cached regularized least-squares solves, orthogonal
projectors, and a plain-text matrix file format used by the CLI and tests.
Arrays are float64 and treated as immutable once returned.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DegenerateGeometryError, NumericError, ParameterError, ParseError


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite float64 2-D array, validating shape and entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ParameterError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ParameterError(f"{name} contains non-finite entries")
    return m


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite float64 1-D array; n-by-1 columns are flattened."""
    m = np.asarray(v, dtype=float)
    if m.ndim == 2 and 1 in m.shape:
        m = m.ravel()
    if m.ndim != 1:
        raise ParameterError(f"{name} must be 1-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ParameterError(f"{name} contains non-finite entries")
    return m


class SvdFactors(NamedTuple):
    """Economy SVD factors with sigma sorted non-increasing."""

    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray


def svd(m) -> SvdFactors:
    """Economy SVD with a deterministic sign convention.

    Signs are fixed so the first entry of each left singular vector with
    magnitude above 1e-12 is non-negative, making the factors reproducible
    across runs and platforms.
    """
    m = as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD did not converge on a {m.shape[0]}x{m.shape[1]} matrix"
        ) from exc
    for i in range(s.size):
        col = u[:, i]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            u[:, i] = -col
            vt[i, :] = -vt[i, :]
    return SvdFactors(u, s, vt)


class RegularizedLsCache:
    """Prefactored solver for (rho*I + A^T A) y = c with fixed A and rho.

    rho > 0 makes the system symmetric positive definite, so a single
    Cholesky factorization serves every right-hand side.
    """

    def __init__(self, a, rho: float):
        a = as_matrix(a, "a")
        if not np.isfinite(rho) or rho <= 0:
            raise ParameterError(f"rho must be positive and finite, got {rho}")
        self.rho = float(rho)
        self.n = a.shape[1]
        self._factor = cho_factor(self.rho * np.eye(self.n) + a.T @ a, lower=True)

    def solve(self, c) -> np.ndarray:
        """Solve (rho*I + A^T A) y = c; c may be a vector or a stack of columns."""
        c = np.asarray(c, dtype=float)
        if c.shape[0] != self.n:
            raise ParameterError(
                f"right-hand side has leading dimension {c.shape[0]}, expected {self.n}"
            )
        if not np.all(np.isfinite(c)):
            raise ParameterError("right-hand side contains non-finite entries")
        return cho_solve(self._factor, c)


def make_ls_cache(a, rho: float) -> RegularizedLsCache:
    return RegularizedLsCache(a, rho)


def solve_with_cache(cache: RegularizedLsCache, c) -> np.ndarray:
    return cache.solve(c)


def projection_complement(m) -> np.ndarray:
    """Orthogonal projector onto the complement of the column space of m.

    Equals I - M (M^T M)^-1 M^T, computed from a reduced QR factorization
    for stability and symmetrized so P = P^T holds exactly.  Requires full
    column rank.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if rows < cols:
        raise DegenerateGeometryError(
            f"cannot have full column rank with shape {rows}x{cols}"
        )
    q, r = np.linalg.qr(m)
    diag = np.abs(np.diag(r))
    if cols and diag.min() <= 1e-10 * max(diag.max(), 1.0):
        raise DegenerateGeometryError(f"matrix of shape {rows}x{cols} is rank deficient")
    p = np.eye(rows) - q @ q.T
    return (p + p.T) / 2.0


def write_matrix(path, m) -> None:
    """Write in the text format: a `rows cols` header line, then one
    whitespace-separated row per line at 17 significant digits."""
    m = as_matrix(m)
    with open(path, "w") as fh:
        fh.write(f"{m.shape[0]} {m.shape[1]}\n")
        for row in m:
            fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def read_matrix(path) -> np.ndarray:
    """Read the text format written by :func:`write_matrix`.

    Raises ParseError with the offending 1-based line number on a malformed
    header, wrong entry count, unparseable or non-finite token, or trailing
    garbage.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing '<rows> <cols>' header", line=1)
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError("header must be '<rows> <cols>'", line=1)
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError("header must hold two integers", line=1) from None
    if rows < 0 or cols < 0:
        raise ParseError("dimensions must be non-negative", line=1)
    if len(lines) < 1 + rows:
        raise ParseError(
            f"expected {rows} data lines, file ends after {len(lines) - 1}",
            line=len(lines) + 1,
        )
    out = np.empty((rows, cols))
    for i in range(rows):
        toks = lines[1 + i].split()
        if len(toks) != cols:
            raise ParseError(f"expected {cols} entries, found {len(toks)}", line=i + 2)
        try:
            vals = [float(t) for t in toks]
        except ValueError:
            raise ParseError("unparseable entry", line=i + 2) from None
        if not all(np.isfinite(v) for v in vals):
            raise ParseError("non-finite entry", line=i + 2)
        out[i] = vals
    for j in range(1 + rows, len(lines)):
        if lines[j].strip():
            raise ParseError("unexpected extra data", line=j + 1)
    return out


def write_vector(path, v) -> None:
    """Write a vector as an n-by-1 matrix file."""
    write_matrix(path, as_vector(v).reshape(-1, 1))


def read_vector(path) -> np.ndarray:
    """Read an n-by-1 matrix file as a vector."""
    m = read_matrix(path)
    if m.shape[1] != 1:
        raise ParseError(f"expected an n-by-1 vector file, got {m.shape[0]}x{m.shape[1]}")
    return m.ravel()
