"""
Tests for the perturbed torus maps
"""
from unittest.mock import patch

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import NonConvergence
from dyncore.bump import BumpKind, BumpProfile, bump_eval
from dyncore.maps import (
    PerturbedMapParams,
    circle_dist,
    epsilon_limit,
    half_lattice_points,
    jacobian_det,
    linear_block,
    linear_eigenvalues,
    orbit,
    perturbed_apply,
    perturbed_diff,
    perturbed_inverse,
    reduce_mod1,
    signed_offset,
)
from dyncore.matrices import DEFAULT_B


def create_params(epsilon=0.1, d=1, direction=(1, 1)):
    """Create and return map parameters with a smooth bump"""
    bump = BumpProfile(epsilon=epsilon, d=d)
    return PerturbedMapParams(bump=bump, direction=direction)


def random_points(count, seed=0):
    return np.random.default_rng(seed).random((count, 4))


def finite_difference_jacobian(params, p, step=1e-6):
    columns = []
    for axis in range(4):
        offset = np.zeros(4)
        offset[axis] = step
        forward = perturbed_apply(params, p + offset)
        backward = perturbed_apply(params, p - offset)
        columns.append(signed_offset(forward, backward) / (2 * step))
    return np.column_stack(columns)


class ReductionTests(SimpleTestCase):
    """Test the mod 1 representative and circle distance"""

    def test_half_open_and_idempotent(self):
        """Test reduction lands in [0, 1) and is idempotent"""
        values = np.array([-1.0, -0.25, 0.0, 1.0, 2.75, 1 - 1e-17])
        reduced = reduce_mod1(values)
        self.assertTrue(np.all((reduced >= 0) & (reduced < 1)))
        np.testing.assert_array_equal(reduce_mod1(reduced), reduced)
        np.testing.assert_array_equal(reduced[:4], [0.0, 0.75, 0.0, 0.0])

    def test_circle_distance(self):
        """Test distances wrap around the circle"""
        self.assertAlmostEqual(float(circle_dist(0.95, 0.05)), 0.1)
        self.assertAlmostEqual(float(circle_dist(0.3, 0.3)), 0.0)


class PerturbedApplyTests(SimpleTestCase):
    """Test the perturbed automorphism and its differential"""

    def test_linear_fixed_point(self):
        """Test eps = 0 fixes the origin"""
        params = create_params(epsilon=0.0)
        np.testing.assert_array_equal(
            perturbed_apply(params, np.zeros(4)), np.zeros(4)
        )

    def test_half_lattice_points_fixed(self):
        """Test the 16 half-lattice points are fixed for eps > 0"""
        params = create_params(epsilon=0.2, d=3)
        points = half_lattice_points()
        self.assertEqual(points.shape, (16, 4))
        image = perturbed_apply(params, points)
        self.assertLess(np.max(circle_dist(image, points)), 1e-15)

    def test_linear_map_is_additive(self):
        """Test eps = 0 gives a Z-linear map mod 1"""
        params = create_params(epsilon=0.0)
        p, q = random_points(100, 1), random_points(100, 2)
        lhs = perturbed_apply(params, p + q)
        rhs = perturbed_apply(params, p) + perturbed_apply(params, q)
        self.assertLess(np.max(circle_dist(lhs, rhs)), 1e-12)

    def test_differential_at_origin(self):
        """Test the factor block at 0 is (13 - a eps, 8; 8 - b eps, 5)"""
        for direction in ((1, 1), (8, 5)):
            params = create_params(epsilon=0.1, direction=direction)
            a, b = direction
            expected = np.array([[13 - a * 0.1, 8], [8 - b * 0.1, 5]])
            jac = perturbed_diff(params, np.zeros(4))
            np.testing.assert_allclose(jac[:2, :2], expected, atol=1e-15)
            np.testing.assert_allclose(jac[2:, 2:], expected, atol=1e-15)
            np.testing.assert_allclose(linear_block(params), expected)

    def test_linear_differential_is_b_plus_b(self):
        """Test eps = 0 gives the block diagonal B (+) B everywhere"""
        params = create_params(epsilon=0.0)
        B = params.B.as_array()
        expected = np.zeros((4, 4))
        expected[:2, :2] = B
        expected[2:, 2:] = B
        for jac in perturbed_diff(params, random_points(20)):
            np.testing.assert_array_equal(jac, expected)

    def test_differential_matches_finite_difference(self):
        """Test perturbed_diff agrees with central differences"""
        params = create_params(epsilon=0.2, d=2)
        for p in random_points(200, 3):
            np.testing.assert_allclose(
                perturbed_diff(params, p),
                finite_difference_jacobian(params, p),
                atol=1e-6,
            )

    def test_operator_norm_bounds(self):
        """Test singular values stay within [lambda_e^-1, lambda_e]"""
        params = create_params(epsilon=0.1, direction=(8, 5))
        singular = np.linalg.svd(
            perturbed_diff(params, random_points(10_000, 4)),
            compute_uv=False,
        )
        lambda_e = singular.max()
        self.assertGreaterEqual(
            singular.min(), (1 / lambda_e) * (1 - 1e-9)
        )

    def test_orbit(self):
        """Test orbit stacks the successive images"""
        params = create_params()
        path = orbit(params, [0.1, 0.2, 0.3, 0.4], 5)
        self.assertEqual(path.shape, (6, 4))
        np.testing.assert_array_equal(
            path[3], perturbed_apply(params, path[2])
        )


class JacobianDetTests(SimpleTestCase):
    """Test the factor determinant for both directions"""

    def test_zero_epsilon(self):
        """Test eps = 0 gives determinant one"""
        params = create_params(epsilon=0.0)
        self.assertAlmostEqual(float(jacobian_det(params, 0.3)), 1.0,
                               delta=1e-14)

    def test_default_direction(self):
        """Test direction (1, 1) gives 1 + 3 h'(x)"""
        params = create_params(epsilon=0.2)
        x = np.random.default_rng(5).random(1000)
        _, h_prime = bump_eval(params.bump, x)
        np.testing.assert_allclose(
            jacobian_det(params, x), 1 + 3 * h_prime, atol=1e-12
        )

    def test_default_direction_finite_difference(self):
        """Test the determinant against a finite-difference Jacobian"""
        params = create_params(epsilon=0.2)
        points = random_points(400, 6)
        # keep x1 off the bridges, where h is piecewise linear
        s = np.mod(points[:, 0], 0.5)
        r = np.minimum(s, 0.5 - s)
        safe = (r < 1 / 16 - 1e-3) | (r > 1 / 8 + 1e-3)
        for p in points[safe][:50]:
            numeric = np.linalg.det(
                finite_difference_jacobian(params, p, step=1e-4)[:2, :2]
            )
            self.assertAlmostEqual(
                numeric, float(jacobian_det(params, p[0])), delta=1e-8
            )

    def test_area_preserving_direction(self):
        """Test direction (8, 5) has determinant one"""
        params = PerturbedMapParams.area_preserving(
            bump=BumpProfile(epsilon=0.2, d=2)
        )
        self.assertEqual(params.direction, (8, 5))
        x = np.random.default_rng(7).random(1000)
        self.assertLess(np.max(np.abs(jacobian_det(params, x) - 1)), 1e-12)

    def test_linear_eigenvalues_not_reciprocal(self):
        """Test the (13 - eps, 8; 8 - eps, 5) block has det 1 + 3 eps"""
        params = create_params(epsilon=0.1)
        mu_hat, mu_check = linear_eigenvalues(params)
        self.assertGreater(mu_hat, 1)
        self.assertAlmostEqual(mu_hat * mu_check, 1.3, delta=1e-12)

    def test_area_preserving_eigenvalues_reciprocal(self):
        """Test the (8, 5) variant has reciprocal linear eigenvalues"""
        params = PerturbedMapParams.area_preserving(
            bump=BumpProfile(epsilon=0.1)
        )
        mu_hat, mu_check = linear_eigenvalues(params)
        self.assertAlmostEqual(mu_hat * mu_check, 1.0, delta=1e-12)


class PerturbedInverseTests(SimpleTestCase):
    """Test the Newton inverse"""

    def test_linear_inverse(self):
        """Test eps = 0 inverts by (5 -8; -8 13) mod 1"""
        params = create_params(epsilon=0.0)
        q = random_points(50, 8)
        inv = np.array([[5, -8], [-8, 13]])
        expected = np.empty_like(q)
        expected[:, 0:2] = q[:, 0:2] @ inv.T
        expected[:, 2:4] = q[:, 2:4] @ inv.T
        self.assertLess(
            np.max(circle_dist(perturbed_inverse(params, q), expected)),
            1e-12,
        )

    def test_round_trip(self):
        """Test apply after inverse is the identity"""
        for direction in ((1, 1), (8, 5)):
            params = create_params(epsilon=0.2, d=3, direction=direction)
            q = random_points(1000, 9)
            image = perturbed_apply(params, perturbed_inverse(params, q))
            self.assertLess(np.max(circle_dist(image, q)), 1e-12)

    def test_round_trip_sin_profile(self):
        """Test the inverse for the analytic sine profile"""
        bump = BumpProfile(kind=BumpKind.ANALYTIC_SIN, epsilon=0.2, d=2)
        params = PerturbedMapParams(bump=bump)
        q = random_points(500, 10)
        image = perturbed_apply(params, perturbed_inverse(params, q))
        self.assertLess(np.max(circle_dist(image, q)), 1e-12)

    def test_fixed_point(self):
        """Test the origin is its own preimage"""
        params = create_params()
        np.testing.assert_array_equal(
            perturbed_inverse(params, np.zeros(4)), np.zeros(4)
        )

    @patch('dyncore.maps.NEWTON_STEPS', 0)
    def test_non_convergence_reported(self):
        """Test NonConvergence is raised when Newton runs out of steps"""
        params = create_params(epsilon=0.2)
        with self.assertRaises(NonConvergence):
            perturbed_inverse(params, random_points(3, 11))


class DiffeomorphismThresholdTests(SimpleTestCase):
    """Test the bound on epsilon that keeps the map invertible"""

    def test_limits(self):
        self.assertAlmostEqual(epsilon_limit(DEFAULT_B, (1, 1)), 1 / 3)
        self.assertEqual(epsilon_limit(DEFAULT_B, (8, 5)), float('inf'))

    def test_default_direction_rejects_large_epsilon(self):
        for epsilon in (1 / 3, 0.7):
            with self.assertRaises(ValueError):
                create_params(epsilon=epsilon)

    def test_accepted_maps_have_positive_jacobian(self):
        """Test det = 1 + 3h' stays positive just below the threshold"""
        x = np.linspace(0, 1, 4001)
        for kind in BumpKind:
            params = PerturbedMapParams(
                bump=BumpProfile(kind=kind, epsilon=0.33)
            )
            self.assertGreater(jacobian_det(params, x).min(), 0)

    def test_area_preserving_direction_unbounded(self):
        params = create_params(epsilon=0.7, direction=(8, 5))
        self.assertEqual(params.epsilon, 0.7)
