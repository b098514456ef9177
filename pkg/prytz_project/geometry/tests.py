import math

import numpy as np
from django.core.cache import cache
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from core.exceptions import DegenerateRegionError, DomainError, GeometryError, PreconditionError
from geometry.cache import build_cache_key, cached_moments, get_or_set_cache
from geometry.curves import CW, Circle, Composite, Polygon, Reversed, Segment, Star, curve_from_spec
from geometry.moments import Moments, centroid, moments, prytz_loop
from geometry.serializers import parse_curve


def shoelace_moments(vertices):
    """Closed-form polygon moments, used as an independent oracle."""
    x, y = vertices[:, 0], vertices[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    A = cross.sum() / 2.0
    Mx = ((x + xn) * cross).sum() / 6.0
    My = ((y + yn) * cross).sum() / 6.0
    Iyy = ((x * x + x * xn + xn * xn) * cross).sum() / 12.0
    Ixx = ((y * y + y * yn + yn * yn) * cross).sum() / 12.0
    return Moments(A, Mx, My, Iyy + Ixx)


def random_star_shaped_polygon(rng, n=9):
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
    radii = rng.uniform(0.5, 2.0, n)
    offset = rng.uniform(-3.0, 3.0, 2)
    return offset + radii[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=-1)


class CurveEvaluationTests(SimpleTestCase):

    def test_unit_circle_at_start(self):
        point, velocity = Circle().evaluate(0.0)
        np.testing.assert_allclose(point, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(velocity, [0.0, 2.0 * math.pi], atol=1e-15)

    def test_parameter_outside_domain(self):
        circle = Circle(duration=2.0)
        with self.assertRaises(DomainError):
            circle.evaluate(-0.1)
        with self.assertRaises(DomainError):
            circle.evaluate([0.5, 2.5])

    def test_reversed_runs_backwards(self):
        circle = Circle(center=(1.0, -2.0), radius=3.0)
        back = Reversed(circle)
        for t in (0.0, 0.2, 0.75, 1.0):
            np.testing.assert_allclose(back.position(t), circle.position(1.0 - t), atol=1e-14)
            np.testing.assert_allclose(back.velocity(t), -circle.velocity(1.0 - t), atol=1e-14)

    def test_composite_is_continuous_at_junctions(self):
        square = Polygon([(0, 0), (2, 0), (2, 1), (0, 1)])
        for s in square.junctions:
            np.testing.assert_allclose(square.position(s - 1e-13), square.position(s + 1e-13), atol=1e-11)
        self.assertTrue(square.closed)

    def test_composite_allocates_by_arc_length(self):
        square = Polygon([(0, 0), (2, 0), (2, 1), (0, 1)])
        np.testing.assert_allclose(square.junctions, [2 / 6, 3 / 6, 5 / 6])
        # first edge at constant speed 6 (length 2 on a slice of width 1/3)
        np.testing.assert_allclose(square.velocity(0.1), [6.0, 0.0])

    def test_one_sided_velocity_at_junction(self):
        square = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        s = square.junctions[0]
        np.testing.assert_allclose(square.velocity(s, side="left"), [4.0, 0.0])
        np.testing.assert_allclose(square.velocity(s, side="right"), [0.0, 4.0])

    def test_circle_velocity_is_exact_derivative(self):
        circle = Circle(center=(0.3, 0.1), radius=1.7, orientation=CW, phase=0.4)
        t, h = 0.37, 1e-6
        numeric = (circle.position(t + h) - circle.position(t - h)) / (2 * h)
        np.testing.assert_allclose(circle.velocity(t), numeric, rtol=1e-8)

    def test_open_and_closed(self):
        self.assertFalse(Segment((0, 0), (1, 0)).closed)
        self.assertTrue(Circle(radius=4.0).closed)

    def test_composite_rejects_gaps(self):
        with self.assertRaises(GeometryError):
            Composite([Segment((0, 0), (1, 0)), Segment((1, 1), (0, 0))])

    def test_lengths(self):
        self.assertAlmostEqual(Circle(radius=2.0).length, 4.0 * math.pi)
        self.assertAlmostEqual(Polygon([(0, 0), (3, 0), (3, 4)]).length, 12.0)


class MomentsTests(SimpleTestCase):

    def test_unit_circle_area(self):
        self.assertAlmostEqual(moments(Circle()).A, math.pi, delta=1e-10)

    def test_star_area(self):
        star = Star(points=5, outer_radius=1.0, inner_radius=0.4)
        self.assertAlmostEqual(moments(star).A, 2.0 * math.sin(math.pi / 5.0), delta=1e-10)

    def test_unit_disk_moments(self):
        m = moments(Circle())
        self.assertAlmostEqual(m.Mx, 0.0, delta=1e-12)
        self.assertAlmostEqual(m.My, 0.0, delta=1e-12)
        self.assertAlmostEqual(m.M2, math.pi / 2.0, delta=1e-10)

    def test_open_curve_is_rejected(self):
        with self.assertRaises(PreconditionError):
            moments(Segment((0, 0), (1, 1)))

    def test_random_polygons_match_closed_form(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            vertices = random_star_shaped_polygon(rng)
            expected = shoelace_moments(vertices)
            got = moments(Polygon(vertices), samples=10_000)
            for name in ("A", "Mx", "My", "M2"):
                want = getattr(expected, name)
                self.assertAlmostEqual(getattr(got, name), want, delta=1e-6 * (abs(want) + 1.0), msg=name)

    def test_reversal_negates_all_moments(self):
        circle = Circle(center=(1.0, 2.0), radius=0.5)
        forward, backward = moments(circle), moments(Reversed(circle))
        for name in ("A", "Mx", "My", "M2"):
            self.assertAlmostEqual(getattr(backward, name), -getattr(forward, name), delta=1e-12)

    def test_translation_law(self):
        star = Star(inner_radius=0.5)
        shifted = Star(inner_radius=0.5, center=(2.5, -1.25))
        expected = moments(star).translated(2.5, -1.25)
        got = moments(shifted)
        for name in ("A", "Mx", "My", "M2"):
            want = getattr(expected, name)
            self.assertAlmostEqual(getattr(got, name), want, delta=1e-10 * max(1.0, abs(want)), msg=name)

    def test_simpson_converges_at_least_second_order(self):
        circle = Circle(center=(0.7, -0.4), radius=1.3)
        exact = moments(circle, samples=4096).M2
        coarse = abs(moments(circle, samples=8).M2 - exact)
        fine = abs(moments(circle, samples=16).M2 - exact)
        self.assertGreater(coarse, 0.0)
        self.assertGreaterEqual(coarse, 4.0 * fine)


class CentroidTests(SimpleTestCase):

    def test_circle(self):
        np.testing.assert_allclose(centroid(Circle(center=(2.0, 3.0))), [2.0, 3.0], atol=1e-12)

    def test_triangle(self):
        np.testing.assert_allclose(centroid(Polygon([(0, 0), (1, 0), (0, 1)])), [1 / 3, 1 / 3], atol=1e-14)

    def test_translated_star(self):
        a = centroid(Star())
        b = centroid(Star(center=(5.0, 0.0)))
        np.testing.assert_allclose(b - a, [5.0, 0.0], atol=1e-12)

    def test_degenerate_region(self):
        flat = Composite([Segment((0, 0), (1, 0)), Segment((1, 0), (0, 0))])
        with self.assertRaises(DegenerateRegionError):
            centroid(flat)


class PrytzLoopTests(SimpleTestCase):

    def test_loop_from_centroid_keeps_area(self):
        loop = prytz_loop(Circle(), (0.0, 0.0))
        self.assertTrue(loop.closed)
        self.assertAlmostEqual(moments(loop).A, math.pi, delta=1e-10)

    def test_loop_from_boundary_point_is_the_boundary(self):
        circle = Circle(center=(1.0, 1.0))
        loop = prytz_loop(circle, circle.start)
        for t in (0.0, 0.3, 0.9):
            np.testing.assert_allclose(loop.position(t), circle.position(t), atol=1e-12)

    def test_star_loop(self):
        star = Star()
        loop = prytz_loop(star, centroid(star))
        self.assertAlmostEqual(moments(loop).A, 2.0 * math.sin(math.pi / 5.0), delta=1e-10)


class CurveSpecTests(SimpleTestCase):

    def test_defaults_are_filled(self):
        curve = parse_curve({"kind": "circle"})
        self.assertEqual(curve.to_spec(), {
            "kind": "circle", "center": [0.0, 0.0], "radius": 1.0,
            "orientation": "ccw", "phase": 0.0, "duration": 1.0,
        })

    def test_spec_round_trip(self):
        original = Composite([
            Segment((0, 0), (1, 0)),
            Reversed(Polygon([(1, 0), (2, 0), (2, 2)])),
            Segment((1, 0), (1, 0)),
        ])
        rebuilt = parse_curve(original.to_spec())
        self.assertEqual(rebuilt.to_spec(), original.to_spec())
        self.assertEqual(curve_from_spec(Star(points=7).to_spec()).to_spec(), Star(points=7).to_spec())

    def test_unknown_keys_are_rejected(self):
        with self.assertRaises(ValidationError) as ctx:
            parse_curve({"kind": "circle", "radiuss": 2.0})
        self.assertIn("radiuss", str(ctx.exception.detail))

    def test_unknown_nested_keys_are_rejected(self):
        spec = {"kind": "reversed", "child": {"kind": "segment", "start": [0, 0], "end": [1, 0], "speed": 2}}
        with self.assertRaises(ValidationError) as ctx:
            parse_curve(spec)
        self.assertIn("speed", str(ctx.exception.detail))

    def test_unknown_kind(self):
        with self.assertRaises(ValidationError):
            parse_curve({"kind": "spline"})

    def test_disconnected_composite(self):
        spec = {"kind": "composite", "children": [
            {"kind": "segment", "start": [0, 0], "end": [1, 0]},
            {"kind": "segment", "start": [5, 5], "end": [0, 0]},
        ]}
        with self.assertRaises(ValidationError):
            parse_curve(spec)


class MomentsCacheTests(SimpleTestCase):

    def test_cache_key_ignores_argument_order(self):
        self.assertEqual(build_cache_key("m", a=1, b=[2, 3]), build_cache_key("m", b=[2, 3], a=1))
        self.assertNotEqual(build_cache_key("m", a=1), build_cache_key("m", a=2))

    def test_cached_moments_match(self):
        star = Star(center=(0.25, 0.5))
        self.assertEqual(cached_moments(star, 512), moments(star, 512))
        self.assertEqual(cached_moments(star, 512), moments(star, 512))

    def test_second_call_is_served_from_the_cache(self):
        cache.clear()
        circle = Circle(center=(1.0, -1.0), radius=0.5)
        first = cached_moments(circle, 256)
        key = build_cache_key("moments", spec=circle.to_spec(), samples=256)
        self.assertEqual(cache.get(key), first.as_dict())
        stored = get_or_set_cache(key, lambda: self.fail("moments were sampled again"))
        self.assertEqual(Moments(**stored), first)
