"""Tests for the ribbons app."""
import io
import json
import math
import os
import runpy
import tempfile
from pathlib import Path
from unittest.mock import patch

import numpy as np
from django.core.exceptions import ValidationError
from django.core.files.uploadedfile import SimpleUploadedFile
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from .exceptions import (
    DimensionMismatchError,
    EmbeddingError,
    InvalidTangentError,
    KernelDomainError,
    SingularEvaluationError,
    SingularGradientError,
    UndefinedTransportError,
    UnsupportedFormatError,
)
from .serializers import CurveFileSerializer, FieldFileSerializer
from .services import geometry, kernels, linkage
from .services.curve_io import dump, load_curve, load_field
from .services.curves import ClosedCurve, NormalField, Ribbon, from_samples
from .services.export_service import bound_sweep, write_sweep_csv
from .services.fields import (
    BallDomain,
    FieldSample,
    ball_volume,
    biot_savart_at,
    biot_savart_field,
    bound_N,
    curl_eigenvalue_lower_bound,
    energy,
    equivalent_ball_radius,
    field_from_local,
    helicity,
    helicity_via_biot_savart,
    hopf_field_sample,
    inner_product,
    l2_norm,
    random_ball_field,
    reflect_field,
)
from .services.geometry import Space
from .services.kernels import KernelFamily
from .services.presets import (
    PRESETS,
    build_preset,
    great_circle,
    h3_circle,
    hopf_normal,
    r3_circle,
    sampled_curve,
)
from .services.quadrature import QuadratureConfig, richardson
from .services.spectral import fourier_antiderivative, fourier_derivative, fourier_evaluate
from .validators import FiniteVectorsValidator, JSONFileValidator

TWO_PI = 2.0 * math.pi
UNIT_J = np.array([0.0, 0.0, 1.0, 0.0])
UNIT_K = np.array([0.0, 0.0, 0.0, 1.0])


def make_cfg(n, **kwargs):
    return QuadratureConfig(n_outer=n, n_inner=n, **kwargs)


def make_json_file(content=b'{"space": "s3"}', name='curve.json'):
    return SimpleUploadedFile(name, content, content_type='application/json')


def random_s3_ribbon(seed, n=512, samples=96, amplitude=0.15):
    """A perturbed great circle with a normal in the span of x·j and x·k."""
    rng = np.random.default_rng(seed)
    coeffs = [(rng.normal(size=4), rng.normal(size=4)) for _ in range(3)]

    def fn(t):
        points = np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=-1)
        for k, (a, b) in enumerate(coeffs, start=1):
            points = points + amplitude / k * (np.cos(k * t)[:, None] * a + np.sin(k * t)[:, None] * b)
        return points

    curve = sampled_curve(Space.SPHERE3, fn, n, samples)
    x = curve.samples
    angle = rng.uniform(0, TWO_PI)
    vectors = (math.cos(angle) * geometry.quaternion_multiply(x, UNIT_J)
               + math.sin(angle) * geometry.quaternion_multiply(x, UNIT_K))
    return Ribbon(curve, NormalField(curve, vectors), 0.1)


def single_sample(space, point, vector, weight=1.0):
    return FieldSample(space, np.array([point], dtype=float), np.array([vector], dtype=float),
                       np.array([weight]))


# ---------------------------------------------------------------------------
# Geometry tests
# ---------------------------------------------------------------------------

class GeometryTests(SimpleTestCase):
    def test_distance_s3_quarter_turn(self):
        d = geometry.distance(Space.SPHERE3, [1, 0, 0, 0], [0, 1, 0, 0])
        self.assertAlmostEqual(d, math.pi / 2, places=12)

    def test_distance_s3_antipodal(self):
        d = geometry.distance(Space.SPHERE3, [1, 0, 0, 0], [-1, 0, 0, 0])
        self.assertAlmostEqual(d, math.pi, places=12)

    def test_distance_h3_along_axis(self):
        r = 1.7
        d = geometry.distance(Space.HYPERBOLIC3, geometry.origin(Space.HYPERBOLIC3),
                              [math.cosh(r), math.sinh(r), 0, 0])
        self.assertAlmostEqual(d, r, places=12)

    def test_distance_r3(self):
        self.assertAlmostEqual(geometry.distance(Space.EUCLIDEAN, [0, 0, 0], [3, 4, 0]), 5.0)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            geometry.distance(Space.SPHERE3, [1, 0, 0], [0, 1, 0])

    def test_space_parse(self):
        self.assertIs(Space.parse('S3'), Space.SPHERE3)
        with self.assertRaises(ValueError):
            Space.parse('s4')

    def test_h3_lower_sheet_rejected(self):
        with self.assertRaises(geometry.InvalidPointError):
            geometry.settle(Space.HYPERBOLIC3, [-1.0, 0.0, 0.0, 0.0])

    def test_parallel_transport_keeps_norm_and_tangency(self):
        x = np.array([1.0, 0.0, 0.0, 0.0])
        y = geometry.project_to_space(Space.SPHERE3, np.array([0.3, 0.5, -0.2, 0.7]))
        v = geometry.to_tangent(Space.SPHERE3, y, np.array([0.1, -0.4, 0.9, 0.2]))
        moved = geometry.parallel_transport(Space.SPHERE3, x, y, v)
        self.assertAlmostEqual(float(np.dot(moved, x)), 0.0, places=12)
        self.assertAlmostEqual(np.linalg.norm(moved), np.linalg.norm(v), places=12)

    def test_parallel_transport_h3_keeps_norm(self):
        space = Space.HYPERBOLIC3
        x = geometry.origin(space)
        y = geometry.project_to_space(space, np.array([1.0, 0.4, -0.3, 0.8]))
        v = geometry.to_tangent(space, y, np.array([0.0, 0.2, 0.5, -0.1]))
        moved = geometry.parallel_transport(space, x, y, v)
        self.assertAlmostEqual(geometry.ambient_inner(space, moved, x), 0.0, places=12)
        self.assertAlmostEqual(geometry.riemannian_norm(space, moved), geometry.riemannian_norm(space, v),
                               places=12)

    def test_parallel_transport_antipodal_undefined(self):
        with self.assertRaises(UndefinedTransportError):
            geometry.parallel_transport(Space.SPHERE3, [1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 0, 0])

    def test_left_translate_identity_to_i(self):
        # i·j = k with the quaternion convention ij = k
        result = geometry.left_translate(Space.SPHERE3, [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0])
        np.testing.assert_allclose(result, [0, 0, 0, 1], atol=1e-15)

    def test_left_translate_only_on_s3(self):
        with self.assertRaises(UnsupportedFormatError):
            geometry.left_translate(Space.HYPERBOLIC3, [1, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0])

    def test_cross_is_orthogonal(self):
        x = geometry.project_to_space(Space.SPHERE3, np.array([0.2, 0.9, -0.3, 0.1]))
        u = geometry.to_tangent(Space.SPHERE3, x, np.array([1.0, 0.0, 0.5, 0.0]))
        v = geometry.to_tangent(Space.SPHERE3, x, np.array([0.0, 0.3, 0.0, 1.0]))
        c = geometry.cross(Space.SPHERE3, x, u, v)
        for other in (x, u, v):
            self.assertAlmostEqual(float(np.dot(c, other)), 0.0, places=12)
        self.assertAlmostEqual(float(np.dot(c, c)), geometry.triple(Space.SPHERE3, x, u, v, c), places=12)

    def test_r3_bracket_is_triple_product(self):
        a, b = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        y, x = np.zeros(3), np.array([0.0, 0.0, 2.0])
        self.assertAlmostEqual(float(geometry.bracket(Space.EUCLIDEAN, y, a, b, x)), 2.0)

    def test_grad_alpha_unit_and_tangent(self):
        space = Space.HYPERBOLIC3
        x = geometry.origin(space)
        y = geometry.project_to_space(space, np.array([1.0, 0.5, 0.2, -0.4]))
        g = geometry.grad_alpha(space, x, y)
        self.assertAlmostEqual(geometry.riemannian_norm(space, g), 1.0, places=12)
        self.assertAlmostEqual(geometry.ambient_inner(space, g, y), 0.0, places=12)

    def test_grad_alpha_singular(self):
        with self.assertRaises(SingularGradientError):
            geometry.grad_alpha(Space.SPHERE3, [1, 0, 0, 0], [1, 0, 0, 0])
        with self.assertRaises(SingularGradientError):
            geometry.grad_alpha(Space.SPHERE3, [1, 0, 0, 0], [-1, 0, 0, 0])

    def test_geodesic_point_requires_unit_direction(self):
        with self.assertRaises(InvalidTangentError):
            geometry.geodesic_point(Space.SPHERE3, [1, 0, 0, 0], [0, 2, 0, 0], 0.5)
        p = geometry.geodesic_point(Space.SPHERE3, [1, 0, 0, 0], [0, 1, 0, 0], math.pi / 2)
        np.testing.assert_allclose(p, [0, 1, 0, 0], atol=1e-15)

    def point_pairs(self):
        yield Space.EUCLIDEAN, np.array([0.3, -0.2, 0.5]), np.array([1.1, 0.4, -0.7]), np.array([0.2, 1.0, -0.4])
        for space, x, y in (
            (Space.SPHERE3, [0.2, 0.9, -0.3, 0.1], [-0.6, 0.1, 0.7, 0.4]),
            (Space.HYPERBOLIC3, [1.0, 0.4, -0.3, 0.8], [1.0, -0.9, 0.2, 0.5]),
        ):
            x = geometry.project_to_space(space, np.array(x))
            y = geometry.project_to_space(space, np.array(y))
            v = geometry.to_tangent(space, y, np.array([0.3, -0.5, 0.8, 0.1]))
            yield space, x, y, v

    def test_parallel_transport_round_trip(self):
        for space, x, y, v in self.point_pairs():
            there = geometry.parallel_transport(space, x, y, v)
            back = geometry.parallel_transport(space, y, x, there)
            np.testing.assert_allclose(back, v, atol=1e-9, err_msg=space.value)

    def test_grad_alpha_antisymmetric_under_transport(self):
        for space, x, y, _ in self.point_pairs():
            at_y = geometry.grad_alpha(space, x, y, wrt='y')
            at_x = geometry.grad_alpha(space, x, y, wrt='x')
            np.testing.assert_allclose(geometry.parallel_transport(space, x, y, at_y), -at_x, atol=1e-9,
                                       err_msg=space.value)

    def test_geodesic_toward_other_point(self):
        for space, x, y, _ in self.point_pairs():
            alpha = geometry.distance(space, x, y)
            direction = -geometry.grad_alpha(space, x, y, wrt='x')
            np.testing.assert_allclose(geometry.geodesic_point(space, x, direction, alpha), y, atol=1e-9,
                                       err_msg=space.value)

    def test_move_from_origin_h3(self):
        space = Space.HYPERBOLIC3
        center = geometry.project_to_space(space, np.array([1.0, 0.8, -0.3, 0.2]))
        points, _ = geometry.move_from_origin(space, center, geometry.origin(space)[None, :])
        np.testing.assert_allclose(points[0], center, atol=1e-12)
        self.assertAlmostEqual(geometry.ambient_inner(space, points[0], points[0]), 1.0, places=12)

    def test_point_wrapper(self):
        p = geometry.Point('s3', [2.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(np.asarray(p), [1, 0, 0, 0])


# ---------------------------------------------------------------------------
# Kernel tests
# ---------------------------------------------------------------------------

class KernelTests(SimpleTestCase):
    def setUp(self):
        self.s3 = KernelFamily.for_space('s3', 'parallel')
        self.s3_left = KernelFamily.for_space('s3', 'left')
        self.h3 = KernelFamily.for_space('h3', 'parallel')
        self.r3 = KernelFamily.for_space('r3', 'parallel')

    def test_r3_parallel_is_euclidean(self):
        self.assertEqual(str(self.r3), 'r3/euclidean')

    def test_left_only_on_s3(self):
        with self.assertRaises(UnsupportedFormatError):
            KernelFamily.for_space('h3', 'left')

    def test_nonpositive_argument(self):
        with self.assertRaises(KernelDomainError):
            kernels.phi(self.s3, 0.0)
        with self.assertRaises(KernelDomainError):
            kernels.phi(self.s3, 3.5)

    def test_pde_residuals(self):
        alphas = np.geomspace(0.1, math.pi - 0.1, 100)
        self.assertLess(np.max(np.abs(kernels.radial_pde_residual(self.s3, alphas))), 1e-9)
        h_alphas = np.geomspace(0.05, 3.0, 100)
        self.assertLess(np.max(np.abs(kernels.radial_pde_residual(self.h3, h_alphas))), 1e-9)
        self.assertLess(np.max(np.abs(kernels.radial_pde_residual(self.r3, h_alphas))), 1e-9)

    def test_left_laplacian_constant(self):
        alphas = np.geomspace(0.1, math.pi - 0.1, 100)
        lap = kernels.radial_pde_residual(self.s3_left, alphas)
        self.assertLess(np.ptp(lap), 1e-9)
        self.assertAlmostEqual(float(lap[0]), 1.0 / (2.0 * math.pi ** 2), places=9)

    def test_phi1_relation_constant(self):
        h = 1e-4
        alphas = np.linspace(0.2, math.pi - 0.2, 100)
        second = (kernels.phi1(alphas + h) - 2 * kernels.phi1(alphas) + kernels.phi1(alphas - h)) / h ** 2
        first = (kernels.phi1(alphas + h) - kernels.phi1(alphas - h)) / (2 * h)
        lap = second + 2.0 / np.tan(alphas) * first
        relation = lap - kernels.phi0(self.s3_left, alphas)
        self.assertLess(np.ptp(relation), 1e-8)
        self.assertAlmostEqual(float(relation[0]), 1.0 / (8.0 * math.pi ** 2), places=8)

    def test_phi1_domain(self):
        with self.assertRaises(KernelDomainError):
            kernels.phi1(3.5)

    def test_phi1_prime(self):
        self.assertEqual(kernels.phi1_prime(math.pi), 0.0)
        h = 1e-5
        alphas = np.linspace(0.2, math.pi - 0.2, 50)
        difference = (kernels.phi1(alphas + h) - kernels.phi1(alphas - h)) / (2 * h)
        np.testing.assert_allclose(kernels.phi1_prime(alphas), difference, rtol=1e-8, atol=1e-12)

    def test_derivatives_match_finite_differences(self):
        families = (
            (self.s3, np.geomspace(1e-2, math.pi - 0.05, 60)),
            (self.s3_left, np.geomspace(1e-2, math.pi - 0.05, 60)),
            (self.h3, np.geomspace(1e-2, 5.0, 60)),
            (self.r3, np.geomspace(1e-2, 5.0, 60)),
        )
        for family, alphas in families:
            h = 1e-5 * alphas
            first = (kernels.phi(family, alphas + h) - kernels.phi(family, alphas - h)) / (2 * h)
            second = (kernels.phi_prime(family, alphas + h) - kernels.phi_prime(family, alphas - h)) / (2 * h)
            np.testing.assert_allclose(kernels.phi_prime(family, alphas), first, rtol=1e-6, atol=1e-9,
                                       err_msg=str(family))
            np.testing.assert_allclose(kernels.phi_double_prime(family, alphas), second, rtol=1e-6, atol=1e-9,
                                       err_msg=str(family))

    def test_second_derivative_limit_at_antipode(self):
        limit = 1.0 / (12 * math.pi ** 2)
        self.assertAlmostEqual(kernels.phi_double_prime(self.s3, math.pi), limit, places=14)
        self.assertAlmostEqual(kernels.phi_double_prime(self.s3, math.pi - 1e-3), limit, delta=1e-7)
        self.assertAlmostEqual(kernels.phi_double_prime(self.s3, math.pi - 0.05), limit, delta=1e-4)

    def test_singular_expansion_s3(self):
        a = 1e-3
        remainder = kernels.phi(self.s3, a) - 1.0 / (4 * math.pi * a) - a / (24 * math.pi)
        self.assertAlmostEqual(remainder, -1.0 / (4 * math.pi ** 2), delta=1e-6)

    def test_remainder_series_matches_closed_form(self):
        for family in (self.s3, self.s3_left, self.h3):
            for order in (0, 1):
                below = kernels.phi_remainder(family, 0.99e-4, order)
                above = kernels.phi_remainder(family, 1.01e-4, order)
                self.assertAlmostEqual(below, above, delta=1e-6)

    def test_near_antipode_series_continuity(self):
        for family in (self.s3, self.s3_left):
            for fn in (kernels.phi, kernels.phi_prime, kernels.phi_double_prime, kernels.phi_prime_over_radial):
                inside = fn(family, math.pi - 0.999e-4)
                outside = fn(family, math.pi - 1.001e-4)
                self.assertAlmostEqual(inside, outside, delta=1e-7)

    def test_phi_prime_over_radial_finite_at_antipode(self):
        value = kernels.phi_prime_over_radial(self.s3, math.pi)
        self.assertTrue(math.isfinite(value))
        self.assertAlmostEqual(value, -1.0 / (3 * 4 * math.pi ** 2), places=12)

    def test_phi0_sign(self):
        self.assertEqual(kernels.phi0(self.h3, 0.7), -kernels.phi(self.h3, 0.7))

    def test_vectorized(self):
        values = kernels.phi(self.s3, np.array([0.5, 1.0, math.pi]))
        self.assertEqual(values.shape, (3,))


# ---------------------------------------------------------------------------
# Spectral tests
# ---------------------------------------------------------------------------

class SpectralTests(SimpleTestCase):
    def test_derivative_of_sine(self):
        s = np.arange(32) * TWO_PI / 32
        np.testing.assert_allclose(fourier_derivative(np.sin(3 * s), TWO_PI), 3 * np.cos(3 * s), atol=1e-12)

    def test_evaluate_between_samples(self):
        s = np.arange(16) * TWO_PI / 16
        values = fourier_evaluate(np.cos(2 * s), TWO_PI, [0.1, 1.3], order=1)
        np.testing.assert_allclose(values, -2 * np.sin(2 * np.array([0.1, 1.3])), atol=1e-12)

    def test_evaluate_in_blocks(self):
        s = np.arange(64) * TWO_PI / 64
        samples = np.stack([np.cos(s) + 0.3 * np.sin(5 * s), np.sin(3 * s)], axis=-1)
        at = np.linspace(0.0, TWO_PI, 101)
        whole = fourier_evaluate(samples, TWO_PI, at)
        with patch('ribbons.services.spectral.EVAL_BLOCK', 40):
            blocked = fourier_evaluate(samples, TWO_PI, at)
        self.assertEqual(blocked.shape, (101, 2))
        np.testing.assert_allclose(blocked, whole, atol=1e-13)

    def test_antiderivative(self):
        s = np.arange(64) * TWO_PI / 64
        values, mean = fourier_antiderivative(2.0 + np.cos(s), TWO_PI)
        self.assertAlmostEqual(mean, 2.0, places=12)
        np.testing.assert_allclose(values, 2.0 * s + np.sin(s), atol=1e-12)


# ---------------------------------------------------------------------------
# Curve tests
# ---------------------------------------------------------------------------

class CurveTests(SimpleTestCase):
    def test_great_circle_length(self):
        t = np.arange(64) * TWO_PI / 64
        points = np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=-1)
        curve = from_samples('s3', points)
        self.assertAlmostEqual(curve.length, TWO_PI, delta=1e-6)

    def test_h3_circle_length(self):
        t = np.arange(64) * TWO_PI / 64
        points = np.stack([np.full_like(t, math.sqrt(2)), np.cos(t), np.sin(t), 0 * t], axis=-1)
        self.assertAlmostEqual(from_samples('h3', points).length, TWO_PI, delta=1e-6)

    def test_r3_circle_length(self):
        t = np.arange(64) * TWO_PI / 64
        points = np.stack([np.cos(t), np.sin(t), 0 * t], axis=-1)
        self.assertAlmostEqual(from_samples('r3', points).length, TWO_PI, delta=1e-8)

    def test_reparametrized_circle_becomes_uniform(self):
        t = np.arange(128) * TWO_PI / 128
        warped = t + 0.3 * np.sin(t)
        points = np.stack([2 * np.cos(warped), 2 * np.sin(warped), 0 * t], axis=-1)
        curve = from_samples('r3', points)
        self.assertAlmostEqual(curve.length, 2 * TWO_PI, delta=1e-8)
        gaps = np.linalg.norm(np.diff(curve.samples, axis=0), axis=-1)
        self.assertLess(np.ptp(gaps) / np.mean(gaps), 0.01)

    def test_resampling_idempotent(self):
        curve = great_circle(64)
        again = from_samples('s3', curve.samples)
        np.testing.assert_allclose(again.samples, curve.samples, atol=1e-8)

    def test_many_input_samples(self):
        t = np.arange(6000) * TWO_PI / 6000
        warped = t + 0.2 * np.sin(t)
        trefoil = np.stack([
            np.sin(warped) + 2 * np.sin(2 * warped),
            np.cos(warped) - 2 * np.cos(2 * warped),
            -np.sin(3 * warped),
        ], axis=-1)
        with patch('ribbons.services.spectral.EVAL_BLOCK', 1 << 14):
            curve = from_samples('r3', trefoil)
        self.assertEqual(curve.n, 6000)
        gaps = np.linalg.norm(np.diff(curve.samples, axis=0), axis=-1)
        self.assertLess(np.ptp(gaps) / np.mean(gaps), 0.01)
        polygon = math.fsum(np.linalg.norm(np.roll(trefoil, -1, axis=0) - trefoil, axis=-1).tolist())
        self.assertAlmostEqual(curve.length, polygon, delta=1e-4 * polygon)

    def test_closing_point_dropped(self):
        t = np.arange(33) * TWO_PI / 32
        points = np.stack([np.cos(t), np.sin(t), 0 * t], axis=-1)
        self.assertEqual(from_samples('r3', points).n, 32)

    def test_too_few_samples(self):
        with self.assertRaises(ValueError):
            from_samples('r3', np.eye(3)[[0, 1, 2, 0, 1]])

    def test_derivative_great_circle(self):
        curve = great_circle(64)
        s = np.array([0.3, 2.0])
        expected = np.stack([-np.sin(s), np.cos(s), 0 * s, 0 * s], axis=-1)
        np.testing.assert_allclose(curve.derivative(s), expected, atol=1e-12)

    def test_derivative_r3_circle(self):
        tangent = r3_circle(32).derivative(1.1)
        np.testing.assert_allclose(tangent, [-math.sin(1.1), math.cos(1.1), 0], atol=1e-12)

    def test_reversed_curve(self):
        curve = great_circle(32)
        back = curve.reversed()
        np.testing.assert_allclose(back.samples[1], curve.samples[-1])

    def test_hopf_pushoff(self):
        ribbon = build_preset('hopf-ribbon', 64)
        s = ribbon.base.parameters
        expected = np.stack([0 * s, 0 * s, np.cos(s), np.sin(s)], axis=-1)
        np.testing.assert_allclose(ribbon.edge_samples, expected, atol=1e-12)
        self.assertAlmostEqual(ribbon.pushoff().length, TWO_PI, delta=1e-8)

    def test_h3_pushoff_on_model(self):
        ribbon = build_preset('h3-circle-ribbon', 64, eps=0.2)
        norms = geometry.ambient_inner(Space.HYPERBOLIC3, ribbon.edge_samples, ribbon.edge_samples)
        np.testing.assert_allclose(norms, 1.0, atol=1e-10)

    def test_retract_recovers_base(self):
        for name in ('hopf-ribbon', 'h3-circle-ribbon', 'r3-twisted-ribbon'):
            ribbon = build_preset(name, 64, eps=0.3)
            np.testing.assert_allclose(ribbon.retract(), ribbon.base.samples, atol=1e-6)

    def test_covariant_derivative_hopf(self):
        field = hopf_normal(great_circle(64))
        s = field.curve.parameters
        expected = np.stack([0 * s, 0 * s, -np.sin(s), np.cos(s)], axis=-1)
        np.testing.assert_allclose(field.covariant_derivative(), expected, atol=1e-12)

    def test_left_invariant_derivative_hopf_vanishes(self):
        field = hopf_normal(great_circle(64))
        np.testing.assert_allclose(field.left_invariant_derivative(), 0.0, atol=1e-12)

    def test_left_invariant_derivative_only_on_s3(self):
        ribbon = build_preset('h3-circle-ribbon', 32)
        with self.assertRaises(UnsupportedFormatError):
            ribbon.normal.left_invariant_derivative()

    def test_normal_stays_unit(self):
        ribbon = random_s3_ribbon(3, n=128)
        dv = ribbon.normal.covariant_derivative()
        self.assertLess(np.max(np.abs(np.sum(ribbon.normal.vectors * dv, axis=-1))), 1e-8)
        np.testing.assert_allclose(np.linalg.norm(ribbon.normal.vectors, axis=-1), 1.0, atol=1e-12)

    def test_normal_parallel_to_tangent_rejected(self):
        curve = r3_circle(32)
        with self.assertRaises(InvalidTangentError):
            NormalField(curve, curve.tangents)

    def test_ribbon_not_embedded(self):
        curve = r3_circle(32)
        inward = NormalField(curve, -curve.samples)
        with self.assertRaises(EmbeddingError):
            Ribbon(curve, inward, 2.0)

    def test_ribbon_needs_positive_width(self):
        curve = great_circle(32)
        with self.assertRaises(ValueError):
            Ribbon(curve, hopf_normal(curve), 0.0)

    def test_self_intersection_flag(self):
        t = np.arange(64) * TWO_PI / 64
        figure_eight = np.stack([np.sin(t), np.sin(t) * np.cos(t), 0 * t], axis=-1)
        with self.assertLogs('ribbons.services.curves', level='WARNING'):
            curve = from_samples('r3', figure_eight)
        self.assertTrue(curve.self_intersecting)


# ---------------------------------------------------------------------------
# Quadrature tests
# ---------------------------------------------------------------------------

class QuadratureTests(SimpleTestCase):
    def test_node_counts_validated(self):
        with self.assertRaises(ValueError):
            make_cfg(31)
        with self.assertRaises(ValueError):
            make_cfg(16)

    @override_settings(RIBBON_DEFAULT_N=64, RIBBON_WORKERS=3, RIBBON_CHUNK_ROWS=8)
    def test_from_settings(self):
        cfg = QuadratureConfig.from_settings()
        self.assertEqual((cfg.n_outer, cfg.workers, cfg.chunk_rows), (64, 3, 8))
        self.assertEqual(QuadratureConfig.from_settings(n=128).n_inner, 128)

    def test_richardson_recovers_limit(self):
        counts = [256, 128, 64]
        values = [1.5 + 0.7 / (n - 1) - 3.0 / n ** 2 for n in counts]
        self.assertAlmostEqual(richardson(values, counts), 1.5, places=9)

    def test_extrapolation_threshold(self):
        self.assertFalse(make_cfg(64).wants_extrapolation)
        self.assertFalse(make_cfg(64, tolerance=1e-3).wants_extrapolation)
        self.assertTrue(make_cfg(64, tolerance=1e-6).wants_extrapolation)


# ---------------------------------------------------------------------------
# Linkage tests
# ---------------------------------------------------------------------------

class HopfExampleTests(SimpleTestCase):
    def setUp(self):
        self.cfg = make_cfg(256)
        self.ribbon = build_preset('hopf-ribbon', 256)

    def test_parallel_format(self):
        report = linkage.ltw_verify(self.ribbon, 'parallel', self.cfg)
        self.assertAlmostEqual(report.lk, 1.0, delta=1e-6)
        self.assertAlmostEqual(report.tw, 1.0, delta=1e-9)
        self.assertAlmostEqual(report.wr, 0.0, delta=1e-6)
        self.assertLess(abs(report.residual), 1e-5)

    def test_left_format(self):
        report = linkage.ltw_verify(self.ribbon, 'left', self.cfg)
        self.assertAlmostEqual(report.tw, 0.0, delta=1e-9)
        self.assertAlmostEqual(report.wr, 1.0, delta=1e-4)
        self.assertAlmostEqual(report.lk, 1.0, delta=1e-4)

    def test_epsilon_independence(self):
        values = [linkage.linking_number(self.ribbon.base, self.ribbon.with_width(eps).edge_loop(),
                                         'parallel', self.cfg) for eps in (0.4, 0.2, 0.1)]
        self.assertLess(max(values) - min(values), 1e-4)

    def test_epsilon_check_pair(self):
        first, second = linkage.epsilon_independence(self.ribbon.with_width(0.4), 'parallel', self.cfg)
        self.assertAlmostEqual(first, second, delta=1e-4)

    def test_halving_grid(self):
        k1, k2 = build_preset('hopf-pair', 256)
        fine = linkage.linking_number(k1, k2, 'parallel', make_cfg(256))
        coarse = linkage.linking_number(k1, k2, 'parallel', make_cfg(128))
        self.assertLess(abs(fine - coarse), 1e-4)


class HyperbolicExampleTests(SimpleTestCase):
    def setUp(self):
        self.ribbon = build_preset('h3-circle-ribbon', 512, eps=0.2)

    def test_ltw(self):
        report = linkage.ltw_verify(self.ribbon, 'parallel', make_cfg(512))
        self.assertAlmostEqual(report.lk, -1.0, delta=1e-3)
        self.assertAlmostEqual(report.tw, -1.0, delta=1e-6)
        self.assertAlmostEqual(report.wr, 0.0, delta=1e-6)
        self.assertLess(abs(report.residual), 2e-3)

    def test_twist_integrand_closed_form(self):
        field = self.ribbon.normal
        curve = field.curve
        integrand = geometry.triple(curve.space, curve.samples, curve.tangents, field.vectors,
                                    field.covariant_derivative())
        s = curve.parameters
        np.testing.assert_allclose(integrand, math.sqrt(2) / (np.cos(s) ** 2 - 2), atol=1e-9)

    def test_halving_grid(self):
        fine = linkage.linking_number(self.ribbon.base, self.ribbon.edge_loop(), 'parallel', make_cfg(512))
        coarse = linkage.linking_number(self.ribbon.base, self.ribbon.edge_loop(), 'parallel', make_cfg(256))
        self.assertLess(abs(fine - coarse), 1e-4)

    def test_left_format_unsupported(self):
        with self.assertRaises(UnsupportedFormatError):
            linkage.ltw_verify(self.ribbon, 'left', make_cfg(64))


class LinkingTests(SimpleTestCase):
    def test_reversed_orientation(self):
        k1, k2 = build_preset('hopf-pair-reversed', 128)
        self.assertAlmostEqual(linkage.linking_number(k1, k2, 'parallel', make_cfg(128)), -1.0, delta=1e-6)

    def test_preset_pairs_are_integers(self):
        cfg = make_cfg(256)
        for name, preset in PRESETS.items():
            if preset.kind != 'pair':
                continue
            k1, k2 = build_preset(name, 256)
            formats = ('parallel', 'left') if preset.space is Space.SPHERE3 else ('parallel',)
            for fmt in formats:
                lk = linkage.linking_number(k1, k2, fmt, cfg)
                self.assertLess(abs(lk - round(lk)), 1e-3, f"{name} ({fmt}): {lk}")

    def test_split_pair(self):
        k1, k2 = build_preset('split-pair', 128)
        self.assertAlmostEqual(linkage.linking_number(k1, k2, 'parallel', make_cfg(128)), 0.0, delta=1e-6)

    def test_r3_hopf_link(self):
        k1, k2 = build_preset('r3-hopf-link', 256)
        lk = linkage.linking_number(k1, k2, 'parallel', make_cfg(256))
        self.assertAlmostEqual(abs(lk), 1.0, delta=1e-6)
        reversed_lk = linkage.linking_number(k1, k2.reversed(), 'parallel', make_cfg(256))
        self.assertAlmostEqual(reversed_lk, -lk, delta=1e-9)

    def test_symmetric(self):
        k1, k2 = build_preset('h3-pair', 128)
        cfg = make_cfg(128)
        self.assertAlmostEqual(linkage.linking_number(k1, k2, 'parallel', cfg),
                               linkage.linking_number(k2, k1, 'parallel', cfg), delta=1e-9)

    def test_intersecting_curves(self):
        t = np.arange(64) * TWO_PI / 64
        k1 = ClosedCurve('s3', np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=-1), TWO_PI)
        k2 = ClosedCurve('s3', np.stack([np.cos(t), 0 * t, np.sin(t), 0 * t], axis=-1), TWO_PI)
        with self.assertRaises(EmbeddingError):
            linkage.linking_number(k1, k2, 'parallel', make_cfg(64))

    def test_different_spaces(self):
        with self.assertRaises(DimensionMismatchError):
            linkage.linking_number(great_circle(64), h3_circle(64), 'parallel', make_cfg(64))

    def test_report_diagnostics(self):
        k1, k2 = build_preset('hopf-pair', 64)
        result = linkage.linking_report(k1, k2, 'parallel', make_cfg(64))
        self.assertEqual(result.lk_rounded, 1)
        self.assertAlmostEqual(result.min_distance, math.pi / 2, places=9)
        self.assertEqual(result.format, 'parallel')

    def test_thread_count_does_not_change_result(self):
        ribbon = random_s3_ribbon(1, n=128)
        serial = linkage.linking_number(ribbon.base, ribbon.edge_loop(), 'parallel',
                                        make_cfg(128, workers=1, chunk_rows=4))
        threaded = linkage.linking_number(ribbon.base, ribbon.edge_loop(), 'parallel',
                                          make_cfg(128, workers=4, chunk_rows=4))
        self.assertEqual(serial, threaded)

    def test_composed_integrand_agrees(self):
        for name in ('hopf-pair', 'h3-pair', 'r3-hopf-link'):
            k1, k2 = build_preset(name, 32)
            family = KernelFamily.for_space(k1.space, 'parallel')
            x, dx = k1.samples[:, None, :], k1.velocity[:, None, :]
            y, dy = k2.samples[None, ::3, :], k2.velocity[None, ::3, :]
            direct, _ = linkage.pair_integrand(family, x, dx, y, dy)
            composed = linkage.composed_integrand(family, x, dx, y, dy)
            np.testing.assert_allclose(direct, composed, atol=1e-12)


class WritheTwistTests(SimpleTestCase):
    def test_format_conversion_identities(self):
        cfg = make_cfg(512, tolerance=1e-6)
        for seed in range(10):
            ribbon = random_s3_ribbon(seed)
            length = ribbon.base.length
            wr_l = linkage.writhe(ribbon.base, 'left', cfg)
            wr_p = linkage.writhe(ribbon.base, 'parallel', cfg)
            tw_l = linkage.twist(ribbon.normal, 'left', cfg)
            tw_p = linkage.twist(ribbon.normal, 'parallel', cfg)
            self.assertLess(abs(wr_l - wr_p - length / TWO_PI), 1e-5, f"seed {seed}")
            self.assertLess(abs(tw_l - tw_p + length / TWO_PI), 1e-7, f"seed {seed}")

    def test_r3_twisted_ribbon(self):
        for turns in (1, 2, -3):
            ribbon = build_preset('r3-twisted-ribbon', 256, turns=turns)
            report = linkage.ltw_verify(ribbon, 'parallel', make_cfg(256))
            self.assertAlmostEqual(report.tw, -turns, delta=1e-9)
            self.assertAlmostEqual(report.wr, 0.0, delta=1e-9)
            self.assertAlmostEqual(report.lk, -turns, delta=1e-6)

    def test_twist_resamples_to_config(self):
        field = hopf_normal(great_circle(64))
        self.assertAlmostEqual(linkage.twist(field, 'parallel', make_cfg(128)), 1.0, delta=1e-9)

    def test_writhe_rejects_self_intersecting(self):
        t = np.arange(64) * TWO_PI / 64
        figure_eight = np.stack([np.sin(t), np.sin(t) * np.cos(t), 0 * t], axis=-1)
        curve = ClosedCurve('r3', figure_eight, self_intersecting=True)
        with self.assertRaises(EmbeddingError):
            linkage.writhe(curve, 'parallel', make_cfg(64))

    def test_writhe_of_great_circle(self):
        cfg = make_cfg(128, tolerance=1e-6)
        self.assertAlmostEqual(linkage.writhe(great_circle(128), 'parallel', cfg), 0.0, delta=1e-12)
        self.assertAlmostEqual(linkage.writhe(great_circle(128), 'left', cfg), 1.0, delta=1e-9)


# ---------------------------------------------------------------------------
# Field tests
# ---------------------------------------------------------------------------

class BiotSavartTests(SimpleTestCase):
    def test_single_r3_sample(self):
        field = single_sample('r3', [0, 0, 0], [0, 0, 1], weight=0.5)
        value = biot_savart_at(field, [2.0, 0.0, 0.0])
        np.testing.assert_allclose(value, [0.0, 0.5 / (4 * math.pi * 4.0), 0.0], atol=1e-15)

    def test_linear_in_field(self):
        field = random_ball_field('s3', 1.0, seed=4, n_r=6, n_theta=6, n_phi=8)
        y = geometry.project_to_space(Space.SPHERE3, np.array([-0.3, 0.2, 0.9, 0.1]))
        flipped = biot_savart_at(field.scaled(-1.0), y)
        np.testing.assert_allclose(flipped, -biot_savart_at(field, y), atol=1e-14)

    def test_result_is_tangent(self):
        field = random_ball_field('h3', 0.8, seed=2, n_r=6, n_theta=6, n_phi=8)
        y = geometry.project_to_space(Space.HYPERBOLIC3, np.array([2.0, 1.2, 0.5, -0.7]))
        value = biot_savart_at(field, y)
        self.assertAlmostEqual(geometry.ambient_inner(Space.HYPERBOLIC3, value, y), 0.0, places=12)

    def test_h3_decay(self):
        space = Space.HYPERBOLIC3
        field = single_sample(space, geometry.origin(space), [0, 0, 0, 1])

        def magnitude(r):
            value = biot_savart_at(field, [math.cosh(r), math.sinh(r), 0.0, 0.0])
            return geometry.riemannian_norm(space, value)

        ratio = magnitude(4.0) / magnitude(3.0)
        expected = (math.cosh(4.0) / math.sinh(4.0) ** 2) / (math.cosh(3.0) / math.sinh(3.0) ** 2)
        self.assertAlmostEqual(ratio, expected, places=12)
        self.assertAlmostEqual(ratio, math.exp(-1.0), delta=0.05 * math.exp(-1.0))

    def test_on_sample_point(self):
        field = single_sample('r3', [0, 0, 0], [0, 0, 1])
        with self.assertRaises(SingularEvaluationError):
            biot_savart_at(field, [0.0, 0.0, 0.0])
        np.testing.assert_array_equal(biot_savart_at(field, [0.0, 0.0, 0.0], exclude_within=0.1), 0.0)

    def test_discrete_self_adjoint(self):
        spaces = ['s3', 'h3', 'r3', 's3', 'h3', 'r3', 's3', 'h3', 'r3', 's3']
        for i, space in enumerate(spaces):
            v = random_ball_field(space, 1.2, seed=i, n_r=10, n_theta=10, n_phi=20)
            w = random_ball_field(space, 1.2, seed=100 + i, n_r=10, n_theta=10, n_phi=20)
            self.assertEqual(len(v), 2000)
            left = inner_product(v, biot_savart_field(v), w.vectors)
            right = inner_product(v, v.vectors, biot_savart_field(w))
            self.assertLess(abs(left - right), 1e-6 * l2_norm(v) * l2_norm(w), f"{space} pair {i}")


class HelicityTests(SimpleTestCase):
    def test_zero_field(self):
        field = random_ball_field('r3', 1.0, seed=0, n_r=6, n_theta=6, n_phi=8)
        self.assertEqual(helicity(field.scaled(0.0)), 0.0)

    def test_quadratic_scaling(self):
        field = random_ball_field('s3', 1.0, seed=1, n_r=6, n_theta=6, n_phi=8)
        self.assertAlmostEqual(helicity(field.scaled(3.0)) / helicity(field), 9.0, places=10)

    def test_mirror_image_negates(self):
        for space in ('r3', 's3', 'h3'):
            field = random_ball_field(space, 1.0, seed=7, n_r=8, n_theta=6, n_phi=10)
            value = helicity(field)
            self.assertAlmostEqual(helicity(reflect_field(field)), -value, delta=1e-9 * energy(field))

    def test_agrees_with_biot_savart(self):
        for space in ('r3', 's3', 'h3'):
            field = random_ball_field(space, 1.3, seed=11, n_r=8, n_theta=6, n_phi=10)
            value = helicity(field)
            self.assertAlmostEqual(helicity_via_biot_savart(field), value, delta=1e-9 * energy(field))

    def test_left_format_needs_divergence_free(self):
        field = random_ball_field('s3', 1.0, seed=1, n_r=6, n_theta=6, n_phi=8)
        with self.assertRaises(UnsupportedFormatError):
            helicity(field, 'left')

    def test_left_format_only_on_s3(self):
        field = random_ball_field('h3', 1.0, seed=1, n_r=6, n_theta=6, n_phi=8)
        with self.assertRaises(UnsupportedFormatError):
            helicity(field, 'left')

    def test_outer_subsample_deterministic(self):
        field = random_ball_field('r3', 1.0, seed=5, n_r=8, n_theta=6, n_phi=10)
        first = helicity(field, outer_points=100, seed=42)
        self.assertEqual(first, helicity(field, outer_points=100, seed=42))
        self.assertEqual(helicity(field, outer_points=len(field), seed=42), helicity(field))

    def test_helicity_bound(self):
        # grid spacing at most R/20 on the outer shell; the outer sum is subsampled
        rng = np.random.default_rng(2024)
        for space in ('r3', 's3', 'h3'):
            for i in range(20):
                radius = float(rng.uniform(0.3, 2.5))
                shell = float(kernels.radial_scale(Space.parse(space), radius))
                n_theta = math.ceil(20 * math.pi * shell / radius)
                field = random_ball_field(space, radius, seed=int(rng.integers(1 << 31)),
                                          n_r=20, n_theta=n_theta, n_phi=2 * n_theta)
                bound = bound_N(space, radius) * energy(field)
                value = helicity(field, outer_points=100, seed=i)
                self.assertLessEqual(abs(value), bound, f"{space} field {i}, R={radius:.3f}")

    def test_hopf_fields(self):
        left = hopf_field_sample(24, 96, 144, 'left')
        self.assertGreaterEqual(len(left), 24 ** 4)
        self.assertAlmostEqual(energy(left), 2 * math.pi ** 2, delta=0.01 * 2 * math.pi ** 2)

        half = 0.5 * energy(left)
        left_format = helicity(left, 'left', outer_points=400, seed=0)
        self.assertAlmostEqual(left_format, -half, delta=0.01 * half)
        parallel = helicity(left, 'parallel', outer_points=400, seed=0)
        self.assertAlmostEqual(parallel, -half, delta=0.05 * half)

        right = hopf_field_sample(24, 96, 144, 'right')
        right_parallel = helicity(right, 'parallel', outer_points=400, seed=0)
        self.assertAlmostEqual(right_parallel, half, delta=0.05 * half)

    def test_outer_subsample_weighted_by_row_weight(self):
        left = hopf_field_sample(24, 96, 144, 'left')
        half = 0.5 * energy(left)
        for seed in (1, 2, 3):
            value = helicity(left, 'left', outer_points=200, seed=seed)
            self.assertAlmostEqual(value, -half, delta=0.01 * half, msg=f"seed {seed}")


class EnergyTests(SimpleTestCase):
    def test_unit_field_on_s3(self):
        field = hopf_field_sample(12, 24, 24)
        self.assertAlmostEqual(energy(field), 2 * math.pi ** 2, delta=0.01 * 2 * math.pi ** 2)

    def test_unit_field_on_r3_ball(self):
        domain = BallDomain('r3', 1.0)
        field = field_from_local(domain, lambda xi: np.tile([0.0, 0.0, 1.0], (len(xi), 1)))
        self.assertAlmostEqual(energy(field), 4 * math.pi / 3, delta=0.01 * 4 * math.pi / 3)
        self.assertAlmostEqual(field.volume, ball_volume('r3', 1.0), delta=0.01 * ball_volume('r3', 1.0))

    def test_scaling(self):
        field = random_ball_field('h3', 1.0, seed=9, n_r=6, n_theta=6, n_phi=8)
        self.assertAlmostEqual(energy(field.scaled(2.0)), 4 * energy(field), places=10)
        self.assertAlmostEqual(l2_norm(field), math.sqrt(energy(field)))

    def test_ball_sampler_centered_elsewhere(self):
        center = geometry.project_to_space(Space.SPHERE3, np.array([0.2, 0.5, -0.5, 0.6]))
        field = random_ball_field('s3', 0.5, seed=3, n_r=6, n_theta=6, n_phi=8, center=center)
        distances = geometry.distance(Space.SPHERE3, field.points, center)
        self.assertLess(np.max(distances), 0.5)

    def test_invalid_weights(self):
        with self.assertRaises(ValueError):
            FieldSample('r3', np.zeros((2, 3)), np.zeros((2, 3)), np.array([1.0, -1.0]))
        with self.assertRaises(DimensionMismatchError):
            FieldSample('r3', np.zeros((2, 3)), np.zeros((3, 3)), np.ones(2))


class BoundTests(SimpleTestCase):
    def test_bound_values(self):
        self.assertEqual(bound_N('r3', 2.0), 2.0)
        self.assertEqual(bound_N('s3', math.pi), 4 / math.pi)
        self.assertAlmostEqual(bound_N('s3', math.pi / 2), 2 / math.pi + 0.5, places=14)
        self.assertAlmostEqual(bound_N('h3', 1.0), math.sinh(1.0), places=14)

    def test_bound_domain(self):
        with self.assertRaises(KernelDomainError):
            bound_N('s3', 3.5)
        with self.assertRaises(KernelDomainError):
            bound_N('r3', 0.0)

    def test_ball_volume(self):
        self.assertAlmostEqual(ball_volume('s3', math.pi), 2 * math.pi ** 2, places=12)
        self.assertAlmostEqual(ball_volume('h3', 1.0), math.pi * (math.sinh(2.0) - 2.0), places=12)
        self.assertAlmostEqual(ball_volume('r3', 1.0), 4 * math.pi / 3, places=12)

    def test_equivalent_radius_round_trip(self):
        for space in ('r3', 's3', 'h3'):
            for radius in (0.1, 1.0, 2.5):
                self.assertAlmostEqual(equivalent_ball_radius(space, ball_volume(space, radius)), radius,
                                       delta=1e-10)

    def test_volume_exceeding_sphere(self):
        with self.assertRaises(KernelDomainError):
            equivalent_ball_radius('s3', 2 * math.pi ** 2 + 1.0)

    def test_curl_eigenvalue_bound(self):
        self.assertEqual(curl_eigenvalue_lower_bound('r3', 1.0), 1.0)
        self.assertAlmostEqual(curl_eigenvalue_lower_bound('s3', math.pi), math.pi / 4, places=14)
        radii = np.linspace(0.1, math.pi, 30)
        for space in ('r3', 's3', 'h3'):
            values = [curl_eigenvalue_lower_bound(space, r) for r in radii]
            self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_sweep_monotone(self):
        rows = np.array(bound_sweep(100))
        self.assertEqual(rows.shape, (100, 4))
        self.assertAlmostEqual(rows[-1, 0], math.pi)
        for column in range(1, 4):
            self.assertTrue(np.all(np.diff(rows[:, column]) > 0))

    def test_sweep_csv(self):
        buffer = io.StringIO()
        write_sweep_csv(bound_sweep(4), buffer)
        lines = buffer.getvalue().splitlines()
        self.assertEqual(lines[0], 'R,r3,s3,h3')
        self.assertEqual(len(lines), 5)
        self.assertEqual(float(lines[-1].split(',')[2]), 4 / math.pi)


# ---------------------------------------------------------------------------
# Validator and serializer tests
# ---------------------------------------------------------------------------

class JSONFileValidatorTests(SimpleTestCase):
    def test_valid_file(self):
        JSONFileValidator()(make_json_file())

    def test_wrong_extension(self):
        with self.assertRaises(ValidationError):
            JSONFileValidator()(make_json_file(name='curve.txt'))

    def test_not_an_object(self):
        with self.assertRaises(ValidationError):
            JSONFileValidator()(make_json_file(b'[1, 2, 3]'))

    def test_too_large(self):
        with self.assertRaises(ValidationError):
            JSONFileValidator(max_size=4)(make_json_file())

    @override_settings(RIBBON_MAX_INPUT_SIZE=8)
    def test_size_from_settings(self):
        with self.assertRaises(ValidationError):
            JSONFileValidator()(make_json_file())

    def test_equality(self):
        self.assertEqual(JSONFileValidator(10), JSONFileValidator(10))
        self.assertNotEqual(JSONFileValidator(10), JSONFileValidator(20))


class FiniteVectorsValidatorTests(SimpleTestCase):
    def test_rejects_nan(self):
        with self.assertRaises(ValidationError):
            FiniteVectorsValidator()([[1.0, float('nan'), 0.0]])

    def test_rejects_mixed_dimensions(self):
        with self.assertRaises(ValidationError):
            FiniteVectorsValidator()([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]])


class SerializerTests(SimpleTestCase):
    def circle_samples(self, dim=3, n=16):
        t = np.arange(n) * TWO_PI / n
        columns = [np.cos(t), np.sin(t)] + [0 * t] * (dim - 2)
        return np.stack(columns, axis=-1).tolist()

    def test_valid_curve(self):
        serializer = CurveFileSerializer(data={'space': 'r3', 'samples': self.circle_samples()})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['kind'], 'samples')

    def test_dimension_mismatch(self):
        serializer = CurveFileSerializer(data={'space': 'r3', 'samples': self.circle_samples(dim=4)})
        self.assertFalse(serializer.is_valid())
        self.assertIn('samples', serializer.errors)

    def test_normal_length(self):
        data = {'space': 'r3', 'samples': self.circle_samples(), 'normal': [[0, 0, 1]] * 3}
        self.assertFalse(CurveFileSerializer(data=data).is_valid())

    def test_width_needs_normal(self):
        data = {'space': 'r3', 'samples': self.circle_samples(), 'width': 0.1}
        self.assertFalse(CurveFileSerializer(data=data).is_valid())

    def test_unknown_preset(self):
        data = {'space': 's3', 'kind': 'preset', 'preset': {'name': 'trefoil'}}
        serializer = CurveFileSerializer(data=data)
        self.assertFalse(serializer.is_valid())

    def test_too_few_samples(self):
        serializer = CurveFileSerializer(data={'space': 'r3', 'samples': self.circle_samples(n=4)})
        self.assertFalse(serializer.is_valid())

    def test_field_weights_positive(self):
        data = {'space': 'r3', 'points': [[0, 0, 0]], 'vectors': [[0, 0, 1]], 'weights': [-1.0]}
        serializer = FieldFileSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn('weights', serializer.errors)

    def test_field_lengths(self):
        data = {'space': 'r3', 'points': [[0, 0, 0]], 'vectors': [[0, 0, 1], [1, 0, 0]], 'weights': [1.0]}
        self.assertFalse(FieldFileSerializer(data=data).is_valid())


# ---------------------------------------------------------------------------
# File round trip tests
# ---------------------------------------------------------------------------

class CurveIOTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_curve_round_trip_bit_exact(self):
        for curve in (great_circle(64), h3_circle(64), random_s3_ribbon(2, n=64).base):
            path = dump(curve, self.dir / 'curve.json')
            loaded = load_curve(path)
            np.testing.assert_array_equal(loaded.samples, curve.samples)
            self.assertEqual(loaded.length, curve.length)

    def test_ribbon_round_trip(self):
        ribbon = build_preset('h3-circle-ribbon', 64)
        loaded = load_curve(dump(ribbon, self.dir / 'ribbon.json'))
        self.assertIsInstance(loaded, Ribbon)
        self.assertEqual(loaded.width, ribbon.width)
        np.testing.assert_allclose(loaded.normal.vectors, ribbon.normal.vectors, atol=1e-14)

    def test_pair_round_trip(self):
        pair = build_preset('hopf-pair', 32)
        loaded = load_curve(dump(pair, self.dir / 'pair.json'))
        self.assertEqual(len(loaded), 2)
        np.testing.assert_array_equal(loaded[1].samples, pair[1].samples)

    def test_field_round_trip(self):
        field = random_ball_field('h3', 0.7, seed=3, n_r=4, n_theta=4, n_phi=8)
        loaded = load_field(dump(field, self.dir / 'field.json'))
        np.testing.assert_array_equal(loaded.weights, field.weights)
        np.testing.assert_allclose(loaded.vectors, field.vectors, atol=1e-15)
        self.assertEqual(loaded.spacing, field.spacing)

    def test_unparametrized_samples_resampled(self):
        t = np.arange(40) * TWO_PI / 40
        warped = t + 0.2 * np.sin(t)
        path = self.dir / 'warped.json'
        path.write_text(json.dumps({'space': 'r3', 'samples': np.stack(
            [np.cos(warped), np.sin(warped), 0 * t], axis=-1).tolist()}))
        curve = load_curve(path, n=64)
        self.assertEqual(curve.n, 64)
        self.assertAlmostEqual(curve.length, TWO_PI, delta=1e-8)

    def test_preset_reference(self):
        path = self.dir / 'preset.json'
        path.write_text(json.dumps({'space': 's3', 'kind': 'preset',
                                    'preset': {'name': 'hopf-ribbon', 'params': {'eps': 0.3}}}))
        ribbon = load_curve(path, n=64)
        self.assertEqual(ribbon.width, 0.3)


# ---------------------------------------------------------------------------
# Preset tests
# ---------------------------------------------------------------------------

class PresetTests(SimpleTestCase):
    def test_registry(self):
        for name in ('great-circle', 'hopf-pair', 'hopf-pair-reversed', 'split-pair', 'hopf-ribbon',
                     'h3-circle-ribbon', 'h3-pair', 'r3-circle', 'r3-hopf-link', 'r3-twisted-ribbon',
                     'hopf-field', 'random-ball-field'):
            self.assertIn(name, PRESETS)

    def test_unknown(self):
        with self.assertRaises(ValueError):
            build_preset('trefoil')

    def test_h3_normal_is_unit_normal(self):
        ribbon = build_preset('h3-circle-ribbon', 64)
        v = ribbon.normal.vectors
        np.testing.assert_allclose(geometry.riemannian_norm(Space.HYPERBOLIC3, v), 1.0, atol=1e-12)
        tangent = geometry.riemannian_inner(Space.HYPERBOLIC3, v, ribbon.base.tangents)
        np.testing.assert_allclose(tangent, 0.0, atol=1e-12)

    def test_split_pair_length(self):
        k1, _ = build_preset('split-pair', 64)
        self.assertAlmostEqual(k1.length, TWO_PI * math.sin(0.3))

    def test_default_hopf_field_grid(self):
        self.assertEqual(build_preset('hopf-field').meta['grid'], (24, 96, 144))


# ---------------------------------------------------------------------------
# Command tests
# ---------------------------------------------------------------------------

def run_command(*args, **options):
    out = io.StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


class CommandTests(SimpleTestCase):
    def test_link_hopf_pair(self):
        output = run_command('link', preset='hopf-pair', n=64)
        self.assertIn('Lk = 1.000000', output)

    def test_link_reversed(self):
        self.assertIn('Lk = -1.000000', run_command('link', preset='hopf-pair-reversed', n=64))

    def test_link_split_pair(self):
        self.assertIn('Lk = 0.000000', run_command('link', preset='split-pair', n=64))

    def test_link_from_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            k1, k2 = build_preset('hopf-pair', 64)
            first = dump(k1, Path(tmp) / 'a.json')
            second = dump(k2, Path(tmp) / 'b.json')
            report = Path(tmp) / 'report.json'
            output = run_command('link', str(first), str(second), n=64, out=str(report))
            self.assertIn('Lk = 1.000000', output)
            self.assertEqual(json.loads(report.read_text())['lk_rounded'], 1)

    def test_ltw_hopf_ribbon(self):
        output = run_command('ltw_verify', preset='hopf-ribbon', eps=0.3, n=128)
        residual = float(output.split('residual = ')[1].split()[0])
        self.assertLess(abs(residual), 1e-3)

    def test_ltw_h3_ribbon(self):
        with tempfile.TemporaryDirectory() as tmp:
            report_path = Path(tmp) / 'ltw.json'
            run_command('ltw_verify', preset='h3-circle-ribbon', eps=0.2, n=256, out=str(report_path))
            report = json.loads(report_path.read_text())
        self.assertAlmostEqual(report['lk'], -1.0, delta=1e-3)
        self.assertAlmostEqual(report['tw'], -1.0, delta=1e-6)
        self.assertAlmostEqual(report['wr'], 0.0, delta=1e-6)

    def test_left_format_on_h3(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('ltw_verify', preset='h3-circle-ribbon', format='left', n=64)
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertIn('unsupported format', str(ctx.exception))

    def test_writhe_and_twist(self):
        self.assertIn('Wr = 0.000000', run_command('writhe', preset='hopf-ribbon', n=64))
        self.assertIn('Wr = 1.000000', run_command('writhe', preset='great-circle', n=64, format='left'))
        self.assertIn('Tw = 1.000000', run_command('twist', preset='hopf-ribbon', n=64))

    def test_missing_input(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('link')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_schema_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.json'
            path.write_text(json.dumps({'space': 'r3', 'samples': [[0, 0, 0, 1]] * 8}))
            with self.assertRaises(CommandError) as ctx:
                run_command('writhe', str(path))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_unknown_preset(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('link', preset='trefoil')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bound_radius(self):
        self.assertIn('N(R) = 1.273240', run_command('bound', space='s3', radius=3.14159265))
        self.assertIn('N(R) = 1.000000', run_command('bound', space='r3', radius=1.0))

    def test_bound_volume(self):
        volume = ball_volume('h3', 1.2)
        output = run_command('bound', space='h3', volume=volume)
        self.assertIn(f"N(R) = {math.sinh(1.2):.6f}", output)

    def test_bound_sweep(self):
        output = run_command('bound', sweep=True, steps=10)
        lines = output.strip().splitlines()
        self.assertEqual(lines[0], 'R,r3,s3,h3')
        self.assertEqual(len(lines), 11)

    def test_bound_out_of_domain(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('bound', space='s3', radius=4.0)
        self.assertEqual(ctx.exception.returncode, 3)

    def test_helicity(self):
        output = run_command('helicity', preset='random-ball-field', n=64, seed=3)
        helicity_value = float(output.split('H = ')[1].split()[0])
        bound_value = float(output.split('N(R)·|v|² = ')[1].split()[0])
        self.assertLessEqual(abs(helicity_value), bound_value)

    def test_bs_eval(self):
        output = run_command('bs_eval', preset='random-ball-field', n=64, at='0.3,0.2,5.0')
        self.assertTrue(output.startswith('BS = ['))

    def test_bs_eval_bad_point(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('bs_eval', preset='random-ball-field', n=64, at='0.3,0.2')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_presets_list(self):
        output = run_command('presets', 'list')
        self.assertIn('hopf-ribbon', output)
        self.assertIn('h3-circle-ribbon', output)

    def test_presets_show_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'hopf.json'
            run_command('presets', 'show', 'hopf-ribbon', n=64, eps=0.4, out=str(path))
            self.assertIn('Lk = 1.000000', run_command('ltw_verify', str(path), n=64))


# ---------------------------------------------------------------------------
# Settings tests
# ---------------------------------------------------------------------------

SETTINGS_FILE = Path(__file__).resolve().parent.parent / 'ribbontool' / 'settings.py'


class SettingsTests(SimpleTestCase):
    def environment_without_key(self):
        return {key: value for key, value in os.environ.items() if key != 'DJANGO_SECRET_KEY'}

    def test_secret_key_required(self):
        with patch.dict(os.environ, self.environment_without_key(), clear=True), patch('dotenv.load_dotenv'):
            with self.assertRaises(ValueError):
                runpy.run_path(str(SETTINGS_FILE))

    def test_secret_key_from_environment(self):
        env = dict(self.environment_without_key(), DJANGO_SECRET_KEY='from-env')
        with patch.dict(os.environ, env, clear=True):
            loaded = runpy.run_path(str(SETTINGS_FILE))
        self.assertEqual(loaded['SECRET_KEY'], 'from-env')
