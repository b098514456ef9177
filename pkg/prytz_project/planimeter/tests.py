import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import PreconditionError
from geometry.curves import CW, Circle, Composite, ParamCurve, Reversed, Segment, Star
from geometry.moments import moments, prytz_loop
from planimeter.areas import (
    area_estimate_angle,
    area_estimate_chord,
    chisel_closure_area,
    segment_swept_area,
    swept_area,
)
from planimeter.config import Config, wrap_angle
from planimeter.lift import (
    constraint_residual,
    curvature_vertical,
    delta_theta,
    field_bracket,
    horizontal_project,
    lift,
    lifted_fields,
    small_square_holonomy,
    square_loop,
)

STAR_AREA = 2.0 * math.sin(math.pi / 5.0)


class Parabola(ParamCurve):
    """p(t) = (t, 2t²): smooth and not periodic."""
    kind = "parabola"

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, 2.0 * t * t], axis=-1)

    def velocity(self, t, side="right"):
        t = np.asarray(t, dtype=float)
        return np.stack([np.ones_like(t), 4.0 * t], axis=-1)


def circle_loop():
    return prytz_loop(Circle(), (0.0, 0.0))


def star_loop():
    return prytz_loop(Star(), (0.0, 0.0))


class ConfigTests(SimpleTestCase):

    def test_chisel_position(self):
        config = Config(1.0, 2.0, math.pi / 2, l=3.0)
        np.testing.assert_allclose(config.q, [1.0, 5.0], atol=1e-15)

    def test_wrapped_theta_is_display_only(self):
        config = Config(0.0, 0.0, 7.0)
        self.assertEqual(config.theta, 7.0)
        self.assertAlmostEqual(config.wrapped_theta, 7.0 - 2.0 * math.pi)
        self.assertEqual(wrap_angle(-math.pi), math.pi)

    def test_rod_length_must_be_positive(self):
        with self.assertRaises(ValueError):
            Config(0.0, 0.0, 0.0, l=0.0)


class LiftTests(SimpleTestCase):

    def test_stationary_tracer(self):
        path = lift(Segment((1.0, 1.0), (1.0, 1.0)), theta0=0.3, l=2.0, steps=50)
        np.testing.assert_array_equal(path.theta, np.full(51, 0.3))

    def test_retracing_undoes_the_lift(self):
        circle = Circle(center=(0.3, 0.0), radius=0.8)
        path = lift(Composite([circle, Reversed(circle)]), theta0=1.1, l=2.0, steps=20_000)
        self.assertAlmostEqual(path.theta[-1], 1.1, delta=1e-9)

    def test_tracer_is_read_from_the_curve(self):
        loop = star_loop()
        path = lift(loop, theta0=0.0, l=5.0, steps=1000)
        np.testing.assert_array_equal(path.p, loop.position(path.t))

    def test_centered_circle_rotation(self):
        path = lift(circle_loop(), theta0=math.pi / 2, l=5.0, steps=100_000)
        predicted = math.pi / 25.0 + (math.pi / 2.0) / (2.0 * 625.0)
        self.assertAlmostEqual(delta_theta(path), predicted, delta=1e-4)

    def test_unwrapped_across_the_seam(self):
        path = lift(Circle(radius=0.2), theta0=math.pi - 0.01, l=1.0, steps=20_000)
        self.assertLess(np.max(np.abs(np.diff(path.theta))), 1e-3)
        self.assertGreater(path.theta[-1], math.pi)
        self.assertGreater(delta_theta(path), 0.05)

    def test_rigidity(self):
        path = lift(star_loop(), theta0=0.2, l=5.0, steps=2000)
        np.testing.assert_allclose(np.linalg.norm(path.q - path.p, axis=1), 5.0, rtol=1e-14)

    def test_constraint_residual(self):
        path = lift(Circle(), theta0=0.0, l=5.0, steps=10_000)
        self.assertLess(constraint_residual(path), 1e-6)

    def test_translation_equivariance(self):
        a = lift(Circle(center=(0.5, 0.2)), theta0=0.4, l=3.0, steps=5000)
        b = lift(Circle(center=(10.5, -7.8)), theta0=0.4, l=3.0, steps=5000)
        np.testing.assert_allclose(a.theta, b.theta, atol=1e-10)

    def test_rotation_equivariance(self):
        phi = 0.7
        c, s = math.cos(phi), math.sin(phi)
        center = np.array([0.5, 0.2])
        rotated = (c * center[0] - s * center[1], s * center[0] + c * center[1])
        a = lift(Circle(center=center), theta0=0.4, l=3.0, steps=5000)
        b = lift(Circle(center=rotated, phase=phi), theta0=0.4 + phi, l=3.0, steps=5000)
        np.testing.assert_allclose(b.theta - phi, a.theta, atol=1e-10)

    def test_scaling_equivariance(self):
        a = lift(Circle(center=(0.5, 0.2), radius=1.0), theta0=0.4, l=3.0, steps=5000)
        b = lift(Circle(center=(2.0, 0.8), radius=4.0), theta0=0.4, l=12.0, steps=5000)
        np.testing.assert_allclose(a.theta, b.theta, atol=1e-10)

    def test_reversibility(self):
        circle = Circle(center=(0.2, -0.1), radius=0.7)
        forward = lift(circle, theta0=0.9, l=1.5, steps=20_000)
        backward = lift(Reversed(circle), theta0=forward.theta[-1], l=1.5, steps=20_000)
        self.assertAlmostEqual(backward.theta[-1], 0.9, delta=1e-9)

    def test_fourth_order_convergence(self):
        arc = Parabola()
        starts = (0.0, 1.5, 3.0, 4.5)
        oracle = [lift(arc, theta0=theta0, l=0.5, steps=20_000).theta[-1] for theta0 in starts]

        def error(steps):
            final = [lift(arc, theta0=theta0, l=0.5, steps=steps).theta[-1] for theta0 in starts]
            return max(abs(a - b) for a, b in zip(final, oracle))

        coarse, fine = error(100), error(200)
        self.assertTrue(13.0 <= coarse / fine <= 19.0, coarse / fine)

    def test_bad_arguments(self):
        with self.assertRaises(PreconditionError):
            lift(Circle(), l=0.0)
        with self.assertRaises(PreconditionError):
            lift(Circle(), steps=0)

    def test_steps_count_grid_intervals(self):
        square = square_loop(1.0)
        corners = square.breakpoints()
        path = lift(square, theta0=0.3, l=2.0, steps=7)
        self.assertEqual(path.steps, 7)
        self.assertEqual(len(path.t), 8 + corners.size)
        self.assertTrue(np.all(np.isin(corners, path.t)))

    def test_rows(self):
        path = lift(Circle(), theta0=0.0, l=5.0, steps=10)
        rows = path.to_rows()
        self.assertEqual(rows.shape, (11, 6))
        np.testing.assert_allclose(rows[0], [0.0, 1.0, 0.0, 6.0, 0.0, 0.0], atol=1e-15)


class AreaEstimateTests(SimpleTestCase):

    def test_zero_rotation(self):
        path = lift(Segment((0.0, 0.0), (0.0, 0.0)), l=5.0, steps=10)
        self.assertEqual(area_estimate_angle(path), 0.0)
        self.assertEqual(area_estimate_chord(path), 0.0)

    def test_circle_from_centroid(self):
        path = lift(circle_loop(), theta0=0.0, l=5.0, steps=20_000)
        self.assertAlmostEqual(area_estimate_angle(path), math.pi, delta=0.015 * math.pi)

    def test_star_from_centroid(self):
        path = lift(star_loop(), theta0=0.0, l=5.0, steps=20_000)
        self.assertAlmostEqual(area_estimate_angle(path), STAR_AREA, delta=0.015 * STAR_AREA)

    def test_chord_gap_bound(self):
        path = lift(circle_loop(), theta0=0.0, l=5.0, steps=20_000)
        dtheta = delta_theta(path)
        gap = abs(area_estimate_chord(path) - area_estimate_angle(path))
        self.assertLessEqual(gap, 25.0 * dtheta ** 3 / 24.0 * (1.0 + 1e-3))

    def test_chord_gap_scales_as_inverse_fourth_power(self):
        def gap(l):
            path = lift(circle_loop(), theta0=0.0, l=l, steps=20_000)
            return abs(area_estimate_chord(path) - area_estimate_angle(path))

        self.assertAlmostEqual(gap(10.0) / gap(5.0), 1.0 / 16.0, delta=0.1 / 16.0)


class MovingSegmentTests(SimpleTestCase):

    def test_translation_along_the_segment_sweeps_nothing(self):
        t = np.linspace(0.0, 1.0, 101)
        p = np.stack([t, np.zeros_like(t)], axis=-1)
        v = np.tile([1.0, 0.0], (101, 1))
        self.assertAlmostEqual(segment_swept_area(t, p, v, p + [1.0, 0.0], v), 0.0, delta=1e-15)

    def test_concentric_circles(self):
        t = np.linspace(0.0, 1.0, 2001)
        w = 2.0 * math.pi
        unit = np.stack([np.cos(w * t), np.sin(w * t)], axis=-1)
        tangent = w * np.stack([-np.sin(w * t), np.cos(w * t)], axis=-1)
        area = segment_swept_area(t, 2.0 * unit, 2.0 * tangent, unit, tangent)
        self.assertAlmostEqual(area, 3.0 * math.pi, delta=1e-8)

    def assert_identities(self, loop, theta0):
        path = lift(loop, theta0=theta0, l=5.0, steps=20_000)
        exact = moments(loop).A
        chisel = chisel_closure_area(path)
        self.assertAlmostEqual(swept_area(path), exact - chisel, delta=1e-8)
        self.assertAlmostEqual(exact, area_estimate_angle(path) + chisel, delta=1e-8)

    def test_circle_identities(self):
        self.assert_identities(circle_loop(), 0.0)

    def test_star_identities(self):
        self.assert_identities(star_loop(), 0.0)

    def test_offset_start_identities(self):
        self.assert_identities(prytz_loop(Circle(center=(1.0, 0.5), radius=1.5), (0.5, 0.0)), 2.0)

    def test_circle_chisel_area(self):
        path = lift(circle_loop(), theta0=0.0, l=5.0, steps=20_000)
        self.assertAlmostEqual(chisel_closure_area(path), math.pi - area_estimate_angle(path), delta=1e-6)

    def test_retraced_segment(self):
        spoke = Segment((0.0, 0.0), (1.0, 2.0))
        path = lift(Composite([spoke, Reversed(spoke)]), theta0=0.3, l=2.0, steps=2000)
        self.assertAlmostEqual(chisel_closure_area(path), 0.0, delta=1e-9)

    def test_vanishing_region(self):
        path = lift(Circle(radius=1e-3), theta0=0.0, l=5.0, steps=2000)
        self.assertLess(abs(chisel_closure_area(path)), 1e-10)

    def test_open_tracer(self):
        path = lift(Segment((0.0, 0.0), (1.0, 0.0)), l=2.0, steps=10)
        with self.assertRaises(PreconditionError):
            chisel_closure_area(path)


class ConnectionTests(SimpleTestCase):

    def test_lifted_fields_are_horizontal(self):
        for theta in np.linspace(-3.0, 3.0, 7):
            config = Config(0.0, 0.0, theta, l=2.5)
            for field in lifted_fields(theta, 2.5):
                self.assertAlmostEqual(horizontal_project(field, config), 0.0, delta=1e-15)

    def test_vertical_vector(self):
        self.assertAlmostEqual(horizontal_project((0.0, 0.0, 1.0), Config(1.0, 2.0, 0.4, l=3.0)), 1.0)

    def test_projection_is_idempotent(self):
        rng = np.random.default_rng(3)
        for v in rng.normal(size=(10, 3)):
            config = Config(0.0, 0.0, rng.uniform(-4, 4), l=rng.uniform(0.5, 5))
            once = horizontal_project(v, config)
            self.assertAlmostEqual(horizontal_project((0.0, 0.0, once), config), once, delta=1e-12)

    def test_bracket(self):
        for theta in (0.0, 1.0, -2.5):
            np.testing.assert_allclose(field_bracket(theta, 2.0), [0.0, 0.0, 0.25], atol=1e-15)

    def test_curvature(self):
        self.assertAlmostEqual(curvature_vertical((1e-3, 0, 0), (0, 1e-3, 0), 5.0), 1e-6 / 25.0)
        self.assertAlmostEqual(curvature_vertical((1e-3, 0, 0), (2e-3, 0, 0), 5.0), 0.0)


class SmallSquareTests(SimpleTestCase):

    def test_rotation_per_area(self):
        for l in (1.0, 5.0):
            eps = 1e-3 * l
            ratio = small_square_holonomy(eps, theta0=0.0, l=l) / eps ** 2
            self.assertAlmostEqual(ratio, 1.0 / l ** 2, delta=0.01 / l ** 2)

    def test_orientation(self):
        ccw = small_square_holonomy(0.01, theta0=0.5, l=1.0)
        cw = small_square_holonomy(0.01, theta0=0.5, l=1.0, orientation=CW)
        self.assertGreater(ccw, 0.0)
        self.assertAlmostEqual(cw, -ccw, delta=1e-3 * ccw)

    def test_inverse_square_law(self):
        short = small_square_holonomy(0.001, l=1.0)
        long = small_square_holonomy(0.001, l=2.0)
        self.assertAlmostEqual(long / short, 0.25, delta=0.0025)

    def test_eps_must_be_positive(self):
        with self.assertRaises(PreconditionError):
            small_square_holonomy(0.0)
