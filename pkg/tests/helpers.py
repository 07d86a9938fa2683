"""Brute-force oracles and small utilities shared by the tests.

These deliberately avoid the library's closed forms: objectives are written
out directly and minimized by exhaustive grid search, so they stay
independent of the code paths they check.
"""

import numpy as np


def penalty_value(x, mu, lam):
    """The combined penalty, written out directly."""
    ax = np.abs(x)
    return mu - np.maximum(np.sqrt(mu) - ax, 0.0) ** 2 + lam * ax


def prox_objective(x, y, mu, lam, rho):
    """(1/rho) * penalty + squared distance, the scalar prox subproblem."""
    return penalty_value(x, mu, lam) / rho + (x - y) ** 2


def grid_prox_argmin(y, mu, lam, rho, radius=None, step=1e-4):
    """Exhaustive minimizer of the scalar prox subproblem on a grid.

    The minimizer magnitude never exceeds |y|, so a grid out to |y| plus
    one step brackets it.
    """
    if radius is None:
        radius = abs(y) + step
    xs = np.arange(-radius, radius + step / 2, step)
    f = prox_objective(xs, y, mu, lam, rho)
    i = int(np.argmin(f))
    return float(xs[i]), float(f[i])


def singular_values_2x2(a, b, c, d):
    """Closed-form singular values of [[a, b], [c, d]] (vectorized)."""
    t = a * a + b * b + c * c + d * d
    det = a * d - b * c
    s = np.sqrt(np.maximum(t * t - 4.0 * det * det, 0.0))
    s1 = np.sqrt((t + s) / 2.0)
    s2 = np.sqrt(np.maximum((t - s) / 2.0, 0.0))
    return s1, s2


def matrix_prox_objective_2x2(a, b, c, d, y, mu, lam, rho):
    """(1/rho) * penalty(singular values) + Frobenius distance to y."""
    s1, s2 = singular_values_2x2(a, b, c, d)
    pen = penalty_value(s1, mu, lam) + penalty_value(s2, mu, lam)
    dist = (a - y[0, 0]) ** 2 + (b - y[0, 1]) ** 2 + (c - y[1, 0]) ** 2 + (d - y[1, 1]) ** 2
    return pen / rho + dist


def grid_matrix_prox_argmin(y, mu, lam, rho, radius, step):
    """Exhaustive minimizer of the 2x2 matrix prox subproblem on a 4-D grid."""
    g = np.arange(-radius, radius + step / 2, step)
    best_f = np.inf
    best = None
    cc, dd = np.meshgrid(g, g, indexing="ij")
    for a in g:
        for b in g:
            f = matrix_prox_objective_2x2(a, b, cc, dd, y, mu, lam, rho)
            i, j = np.unravel_index(np.argmin(f), f.shape)
            if f[i, j] < best_f:
                best_f = float(f[i, j])
                best = np.array([[a, b], [g[i], g[j]]])
    return best, best_f


def random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def subdiff_direct(x, mu, lam):
    """Subdifferential of penalty + x^2, written out directly as (lo, hi)."""
    root = np.sqrt(mu)
    if x == 0:
        return (-(2 * root + lam), 2 * root + lam)
    s = np.sign(x)
    if abs(x) >= root:
        v = 2 * x + lam * s
    else:
        v = (2 * root + lam) * s
    return (v, v)
