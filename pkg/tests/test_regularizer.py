import numpy as np
import pytest

from debias import (
    ParameterError,
    RegParams,
    prox_mat,
    prox_scalar,
    prox_vec,
    quadratic_envelope_grid,
    reg_value_mat,
    reg_value_scalar,
    reg_value_vec,
    separable_argmin_set,
    soft_threshold,
    subdiff_convexified,
    svd,
)
from helpers import (
    grid_matrix_prox_argmin,
    grid_prox_argmin,
    matrix_prox_objective_2x2,
    penalty_value,
    prox_objective,
    random_orthogonal,
    subdiff_direct,
)


class TestRegValue:
    def test_zero(self):
        assert reg_value_scalar(0.0, RegParams(1.0, 0.5)) == 0.0
        assert reg_value_scalar(0.0, RegParams(0.0, 0.0)) == 0.0

    def test_saturated(self):
        assert reg_value_scalar(2.0, RegParams(1.0, 0.0)) == 1.0

    def test_pure_l1(self):
        assert reg_value_scalar(2.0, RegParams(0.0, 0.7)) == pytest.approx(1.4, abs=1e-15)

    def test_vector_sums(self):
        p = RegParams(1.0, 0.0)
        assert reg_value_vec([2.0, 3.0], p) == 2.0
        assert reg_value_vec(np.zeros(5), p) == 0.0
        assert reg_value_vec([0.0, 3.0], p) == 1.0

    def test_mu_zero_reduction_exact(self):
        rng = np.random.default_rng(1)
        x = rng.uniform(-5, 5, size=40)
        lam = 0.73
        assert reg_value_vec(x, RegParams(0.0, lam)) == np.sum(lam * np.abs(x))

    def test_lam_zero_reduction_exact(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(-5, 5, size=40)
        mu = 1.3
        direct = np.sum(mu - np.maximum(np.sqrt(mu) - np.abs(x), 0.0) ** 2)
        assert reg_value_vec(x, RegParams(mu, 0.0)) == direct

    def test_matrix_zero(self):
        assert reg_value_mat(np.zeros((3, 4)), RegParams(1.0, 0.3)) == 0.0

    def test_matrix_diagonal(self):
        assert reg_value_mat(np.diag([2.0, 3.0]), RegParams(1.0, 0.0)) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_matrix_unitary_invariance(self):
        rng = np.random.default_rng(3)
        u = random_orthogonal(2, rng)
        v = random_orthogonal(2, rng)
        m = u @ np.diag([2.0, 3.0]) @ v.T
        assert reg_value_mat(m, RegParams(1.0, 0.0)) == pytest.approx(2.0, abs=1e-10)

    def test_bounds(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            x = rng.uniform(-10, 10)
            p = RegParams(rng.uniform(0, 4), rng.uniform(0, 2))
            v = reg_value_scalar(x, p)
            assert 0.0 <= v <= p.mu + p.lam * abs(x) + 1e-12

    def test_param_validation(self):
        with pytest.raises(ParameterError):
            RegParams(-1.0, 0.0)
        with pytest.raises(ParameterError):
            RegParams(0.0, -0.1)
        with pytest.raises(ParameterError):
            RegParams(np.inf, 0.0)


class TestSoftThreshold:
    def test_values(self):
        assert soft_threshold(2.0, 0.125) == 1.875
        assert soft_threshold(0.1, 0.2) == 0.0
        assert soft_threshold(-1.0, 0.0) == -1.0

    def test_negative_threshold_rejected(self):
        with pytest.raises(ParameterError):
            soft_threshold(1.0, -0.1)


class TestProxScalar:
    # expected values below were frozen from grid_prox_argmin (step 1e-4,
    # then refined by the subproblem's first-order conditions by hand)
    @pytest.mark.parametrize(
        "y,mu,lam,rho,expected",
        [
            (2.0, 1.0, 0.5, 2.0, 1.875),  # passes through above sqrt(mu)
            (0.5, 1.0, 0.0, 2.0, 0.0),  # collapses at the sqrt(mu)/rho breakpoint
            (0.3, 1.0, 0.5, 2.0, 0.0),  # soft threshold then collapse
            (0.7, 1.0, 0.0, 2.0, 0.4),  # interior of the expansion strip
            (-0.7, 1.0, 0.0, 2.0, -0.4),
        ],
    )
    def test_frozen_values(self, y, mu, lam, rho, expected):
        p = RegParams(mu, lam)
        out = prox_scalar(y, p, rho)
        assert out == pytest.approx(expected, abs=1e-12)
        xg, fg = grid_prox_argmin(y, mu, lam, rho)
        assert prox_objective(out, y, mu, lam, rho) <= fg + 1e-9

    def test_grid_oracle_random(self):
        rng = np.random.default_rng(8)
        for _ in range(500):
            y = rng.uniform(-5, 5)
            mu = rng.uniform(0, 4)
            lam = rng.uniform(0, 2)
            rho = rng.uniform(1.01, 5)
            out = prox_scalar(y, RegParams(mu, lam), rho)
            _, fg = grid_prox_argmin(y, mu, lam, rho)
            assert prox_objective(out, y, mu, lam, rho) <= fg + 1e-6

    def test_composition_identity_exact(self):
        rng = np.random.default_rng(9)
        for _ in range(500):
            y = rng.uniform(-5, 5)
            mu = rng.uniform(0, 4)
            lam = rng.uniform(0, 2)
            rho = rng.uniform(1.01, 5)
            z = soft_threshold(y, lam / (2 * rho))
            assert prox_scalar(y, RegParams(mu, lam), rho) == prox_scalar(
                z, RegParams(mu, 0.0), rho
            )

    def test_rho_at_or_below_one_rejected(self):
        p = RegParams(1.0, 0.0)
        for rho in (1.0, 0.5, 0.0, -2.0):
            with pytest.raises(ParameterError):
                prox_scalar(1.0, p, rho)

    def test_identity_when_both_zero(self):
        # mu = lam = 0 is allowed here (solver-level calls reject it)
        assert prox_scalar(1.23, RegParams(0.0, 0.0), 2.0) == 1.23

    def test_continuity_at_breakpoints(self):
        p = RegParams(2.0, 0.6)
        rho = 3.0
        for z_break in (np.sqrt(2.0), np.sqrt(2.0) / rho):
            y_break = z_break + p.lam / (2 * rho)
            h = 1e-9
            lo = prox_scalar(y_break - h, p, rho)
            mid = prox_scalar(y_break, p, rho)
            hi = prox_scalar(y_break + h, p, rho)
            assert abs(hi - mid) < 1e-7 and abs(mid - lo) < 1e-7

    def test_odd_and_monotone(self):
        p = RegParams(1.7, 0.9)
        ys = np.arange(-6.0, 6.0, 1e-3)
        vals = prox_vec(ys, p, 2.5)
        flipped = prox_vec(-ys, p, 2.5)
        assert np.array_equal(vals, -flipped)
        assert np.all(np.diff(vals) >= -1e-12)


class TestProxVec:
    def test_zero_vector(self):
        out = prox_vec(np.zeros(4), RegParams(1.0, 0.5), 2.0)
        assert np.array_equal(out, np.zeros(4))

    def test_entrywise(self):
        out = prox_vec([2.0, 0.7], RegParams(1.0, 0.0), 2.0)
        assert np.allclose(out, [2.0, 0.4], atol=1e-12)

    def test_oddness(self):
        out = prox_vec([-2.0, 0.7], RegParams(1.0, 0.0), 2.0)
        assert np.allclose(out, [-2.0, 0.4], atol=1e-12)


class TestProxMat:
    def test_zero(self):
        out = prox_mat(np.zeros((2, 3)), RegParams(1.0, 0.5), 2.0)
        assert np.array_equal(out, np.zeros((2, 3)))

    def test_diagonal_reduction(self):
        out = prox_mat(np.diag([2.0, 0.7]), RegParams(1.0, 0.0), 2.0)
        assert np.allclose(out, np.diag([2.0, 0.4]), atol=1e-12)

    def test_collapses_small_singular_values(self):
        out = prox_mat(np.diag([2.0, 0.5]), RegParams(1.0, 0.0), 2.0)
        assert np.allclose(out, np.diag([2.0, 0.0]), atol=1e-12)

    def test_matrix_grid_oracle(self):
        # coarse 4-D exhaustive search over 2x2 matrices, step 0.05
        rng = np.random.default_rng(12)
        y = rng.uniform(-1.0, 1.0, size=(2, 2))
        mu, lam, rho = 1.0, 0.5, 2.0
        out = prox_mat(y, RegParams(mu, lam), rho)
        best, best_f = grid_matrix_prox_argmin(y, mu, lam, rho, radius=1.8, step=0.05)
        f_out = matrix_prox_objective_2x2(
            out[0, 0], out[0, 1], out[1, 0], out[1, 1], y, mu, lam, rho
        )
        assert f_out <= best_f + 1e-9
        assert np.max(np.abs(out - best)) <= 0.05 + 1e-9

    def test_unitary_invariance(self):
        rng = np.random.default_rng(13)
        p = RegParams(1.0, 0.5)
        for _ in range(10):
            y = rng.standard_normal((3, 4))
            u = random_orthogonal(3, rng)
            v = random_orthogonal(4, rng)
            lhs = prox_mat(u @ y @ v.T, p, 2.0)
            rhs = u @ prox_mat(y, p, 2.0) @ v.T
            assert np.allclose(
                svd(lhs).sigma, svd(rhs).sigma, atol=1e-10
            )
            assert np.max(np.abs(lhs - rhs)) < 1e-8


class TestSeparableArgminSet:
    def test_above_threshold(self):
        s = separable_argmin_set(2.0, RegParams(1.0, 0.4))
        assert s.kind == "singleton" and s.lo == s.hi == pytest.approx(1.8)

    def test_tie_gives_interval(self):
        s = separable_argmin_set(1.2, RegParams(1.0, 0.4))
        assert s.kind == "interval" and (s.lo, s.hi) == (0.0, 1.0)
        assert s.preferred() == 0.0

    def test_below_threshold(self):
        s = separable_argmin_set(0.5, RegParams(1.0, 0.4))
        assert s.kind == "zero" and s.contains(0.0) and not s.contains(0.1)

    def test_negative_side(self):
        s = separable_argmin_set(-2.0, RegParams(1.0, 0.4))
        assert s.preferred() == pytest.approx(-1.8)
        s = separable_argmin_set(-1.2, RegParams(1.0, 0.4))
        assert (s.lo, s.hi) == (-1.0, 0.0)

    def test_matches_direct_minimization(self):
        rng = np.random.default_rng(14)
        xs = np.arange(-6, 6, 1e-4)
        for _ in range(50):
            z = rng.uniform(-4, 4)
            mu, lam = rng.uniform(0.1, 3), rng.uniform(0, 1.5)
            f = penalty_value(xs, mu, lam) + (xs - z) ** 2
            xg = xs[np.argmin(f)]
            s = separable_argmin_set(z, RegParams(mu, lam))
            assert s.contains(xg, tol=2e-4)


class TestSubdiff:
    def test_outer_branch(self):
        iv = subdiff_convexified(3.0, RegParams(1.0, 0.0))
        assert (iv.lo, iv.hi) == (6.0, 6.0)

    def test_origin_interval(self):
        iv = subdiff_convexified(0.0, RegParams(1.0, 0.4))
        assert (iv.lo, iv.hi) == (-2.4, 2.4)

    def test_inner_branch(self):
        iv = subdiff_convexified(0.5, RegParams(1.0, 0.0))
        assert (iv.lo, iv.hi) == (2.0, 2.0)

    def test_continuity_at_root(self):
        p = RegParams(2.25, 0.3)  # root = 1.5
        inner = subdiff_convexified(1.5 - 1e-12, p)
        outer = subdiff_convexified(1.5, p)
        assert inner.lo == pytest.approx(outer.lo, abs=1e-9)

    def test_signed_distance(self):
        iv = subdiff_convexified(0.0, RegParams(1.0, 0.0))
        assert iv.signed_distance(1.0) == 0.0
        assert iv.signed_distance(2.5) == pytest.approx(0.5)
        assert iv.signed_distance(-2.5) == pytest.approx(-0.5)

    def test_matches_direct_form(self):
        rng = np.random.default_rng(15)
        for _ in range(300):
            x = rng.uniform(-4, 4)
            mu, lam = rng.uniform(0, 3), rng.uniform(0, 2)
            iv = subdiff_convexified(x, RegParams(mu, lam))
            assert (iv.lo, iv.hi) == subdiff_direct(x, mu, lam)

    def test_argmin_membership_biconditional(self):
        # x minimizes penalty(x) + (x - z)^2 iff 2z lies in the
        # subdifferential of penalty(x) + x^2 at x
        tol = 1e-9
        zs = np.linspace(-3.0, 3.0, 41)
        xs = np.linspace(-3.0, 3.0, 41)
        for mu in (0.0, 0.49, 1.0, 2.25):
            for lam in (0.0, 0.4, 1.3):
                p = RegParams(mu, lam)
                t = p.root + lam / 2.0
                for z in zs:
                    if abs(abs(z) - t) < 1e-6:
                        continue
                    s = separable_argmin_set(z, p)
                    cands = set(np.round(xs, 12)) | {
                        0.0,
                        p.root,
                        -p.root,
                        z - np.sign(z) * lam / 2.0,
                    }
                    for x in cands:
                        in_set = s.contains(x, tol)
                        in_subdiff = subdiff_convexified(x, p).contains(2.0 * z, tol)
                        assert in_set == in_subdiff, (z, x, mu, lam)


class TestEnvelopeGrid:
    def test_empty_grid_rejected(self):
        with pytest.raises(ParameterError):
            quadratic_envelope_grid(np.array([]), np.array([]), 2.0)

    def test_asymmetric_grid_rejected(self):
        g = np.arange(-1.0, 2.0, 0.5)
        with pytest.raises(ParameterError):
            quadratic_envelope_grid(g, np.zeros_like(g), 2.0)

    def test_quadratic_fixed_point(self):
        # the transform's maximizers for f = (gamma/2) x^2 sit at 2x, so
        # compare only on the inner half of the grid
        gamma = 2.0
        g = np.arange(-10.0, 10.0 + 1e-12, 0.01)
        f = 0.5 * gamma * g**2
        q = quadratic_envelope_grid(g, f, gamma)
        inner = np.abs(g) <= 5.0
        assert np.max(np.abs(q[inner] - f[inner])) < 1e-3

    def test_flat_top_identity_from_indicator(self):
        mu = 1.0
        g = np.arange(-5.0, 5.0 + 1e-12, 1e-3)
        f = np.where(g != 0.0, mu, 0.0)
        q = quadratic_envelope_grid(g, f, 2.0)
        expected = mu - np.maximum(np.sqrt(mu) - np.abs(g), 0.0) ** 2
        assert np.max(np.abs(q - expected)) < 5e-2

    def test_combined_identity_small(self):
        mu, lam = 1.0, 0.4
        g = np.arange(-5.0, 5.0 + 1e-12, 1e-3)
        f = np.where(g != 0.0, mu, 0.0) + lam * np.abs(g)
        q = quadratic_envelope_grid(g, f, 2.0)
        expected = penalty_value(g, mu, lam)
        assert np.max(np.abs(q - expected)) < 5e-2

    def test_combined_identity_padded_random(self):
        rng = np.random.default_rng(16)
        for _ in range(3):
            mu = rng.uniform(0.2, 4.0)
            lam = rng.uniform(0.0, 2.0)
            g = np.arange(-6.25, 6.25 + 1e-12, 5e-3)
            f = np.where(g != 0.0, mu, 0.0) + lam * np.abs(g)
            q = quadratic_envelope_grid(g, f, 2.0)
            inner = np.abs(g) <= 5.0
            err = np.max(np.abs(q[inner] - penalty_value(g[inner], mu, lam)))
            assert err < 5e-2, (mu, lam, err)
