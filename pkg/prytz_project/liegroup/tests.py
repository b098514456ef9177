import math

import numpy as np
from django.test import SimpleTestCase
from scipy.linalg import expm

from geometry.curves import Circle, Composite, ParamCurve, Reversed, Segment, Star
from geometry.moments import moments, prytz_loop
from liegroup.connection import (
    connection_form,
    curvature_base,
    curvature_principal,
    holonomy,
    principal_form,
)
from liegroup.magnus import (
    circle_holonomy,
    circle_rotation_number,
    loop_magnus_terms,
    magnus_terms,
)
from liegroup.su11 import BASIS, ZERO, PSU11Element, SU11Vector, act, exp, rotation_angle
from planimeter.config import wrap_angle
from planimeter.lift import lift, square_loop

E1, E2, E3 = SU11Vector(1, 0, 0), SU11Vector(0, 1, 0), SU11Vector(0, 0, 1)

THETA_GRID = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)


class Parabola(ParamCurve):
    """p(t) = (t, 2t²): smooth and not periodic."""
    kind = "parabola"

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, 2.0 * t * t], axis=-1)

    def velocity(self, t, side="right"):
        t = np.asarray(t, dtype=float)
        return np.stack([np.ones_like(t), 4.0 * t], axis=-1)


def series_exp(m, terms=30):
    total = np.eye(2, dtype=complex)
    power = np.eye(2, dtype=complex)
    for k in range(1, terms):
        power = power @ m / k
        total = total + power
    return total


def random_vectors(seed, count, scale=1.0):
    rng = np.random.default_rng(seed)
    return [SU11Vector(*(scale * rng.uniform(-1.0, 1.0, 3))) for _ in range(count)]


def random_elements(seed, count):
    return [exp(v) for v in random_vectors(seed, count, scale=1.5)]


class AlgebraTests(SimpleTestCase):

    def test_bracket_table(self):
        self.assertEqual(E1.bracket(E2), SU11Vector(0, 0, -2))
        self.assertEqual(E2.bracket(E3), SU11Vector(2, 0, 0))
        self.assertEqual(E3.bracket(E1), SU11Vector(0, 2, 0))

    def test_bracket_is_the_matrix_commutator(self):
        for u, v in zip(random_vectors(1, 5), random_vectors(2, 5)):
            commutator = u.matrix() @ v.matrix() - v.matrix() @ u.matrix()
            np.testing.assert_allclose(u.bracket(v).matrix(), commutator, atol=1e-14)

    def test_matrix_form(self):
        v = SU11Vector(0.5, -0.25, 2.0)
        m = v.matrix()
        self.assertAlmostEqual(abs(np.trace(m)), 0.0)
        np.testing.assert_allclose(m, 0.5 * BASIS[0] - 0.25 * BASIS[1] + 2.0 * BASIS[2])
        self.assertEqual(SU11Vector.from_matrix(m), v)

    def test_circle_field_matches_the_flow(self):
        v = SU11Vector(0.3, -0.7, 0.2)
        for theta in (0.0, 1.0, 2.5, -2.0):
            s = 1e-6
            numeric = (act(exp(v * s), theta) - act(exp(v * -s), theta)) / (2 * s)
            self.assertAlmostEqual(numeric, v.circle_field(theta), delta=1e-7)


class GroupTests(SimpleTestCase):

    def test_exp_of_zero(self):
        self.assertEqual(exp(ZERO), PSU11Element.identity())

    def test_exp_of_e3(self):
        g = exp(E3 * 0.3)
        self.assertAlmostEqual(g.a, complex(math.cos(0.3), math.sin(0.3)), delta=1e-15)
        self.assertAlmostEqual(abs(g.b), 0.0)

    def test_exp_matches_series(self):
        for v in random_vectors(4, 20, scale=2.0 / math.sqrt(3.0)):
            expected = PSU11Element.from_matrix(series_exp(v.matrix()))
            self.assertTrue(exp(v).close_to(expected, tol=1e-12), v)

    def test_exp_matches_expm(self):
        for v in random_vectors(5, 10, scale=1.0):
            self.assertTrue(exp(v).close_to(PSU11Element.from_matrix(expm(v.matrix())), tol=1e-12))

    def test_exp_near_nilpotent(self):
        v = SU11Vector(3.0, 4.0, 5.0 + 1e-12)
        np.testing.assert_allclose(exp(v).matrix(), np.eye(2) + v.matrix(), atol=1e-9)

    def test_determinant(self):
        for g in random_elements(6, 10):
            self.assertAlmostEqual(g.determinant, 1.0, delta=1e-12)

    def test_product_and_inverse(self):
        g, h = random_elements(7, 2)
        np.testing.assert_allclose((g * h).matrix(), _sign_like(g.matrix() @ h.matrix(), (g * h).matrix()), atol=1e-12)
        self.assertTrue((g * g.inverse()).close_to(PSU11Element.identity()))

    def test_canonical_sign(self):
        g = PSU11Element(-0.5 + 1j, 0.3)
        self.assertGreater(g.a.real, 0.0)
        self.assertEqual(PSU11Element(-1 + 0j, 0j), PSU11Element.identity())
        self.assertGreater(PSU11Element(-2j, 0.0).a.imag, 0.0)

    def test_kind(self):
        self.assertEqual(exp(E3 * 0.5).kind, "elliptic")
        self.assertEqual(exp(E1 * 0.5).kind, "hyperbolic")
        self.assertEqual(PSU11Element(1 + 1j, 1.0).kind, "parabolic")

    def test_adjoint_preserves_the_killing_form(self):
        v = SU11Vector(0.4, -1.2, 0.7)
        for g in random_elements(8, 5):
            w = g.adjoint(v)
            self.assertAlmostEqual(np.linalg.det(w.matrix()).real, np.linalg.det(v.matrix()).real, delta=1e-12)


def _sign_like(m, reference):
    return m if np.abs(m - reference).max() < np.abs(m + reference).max() else -m


class ActionTests(SimpleTestCase):

    def test_identity(self):
        np.testing.assert_allclose(act(PSU11Element.identity(), THETA_GRID), THETA_GRID, atol=1e-15)

    def test_rotation(self):
        g = exp(E3 * 0.2)
        np.testing.assert_allclose(act(g, THETA_GRID), THETA_GRID + 0.4, atol=1e-14)

    def test_plus_minus_identity_act_alike(self):
        g = exp(SU11Vector(0.3, 0.1, 0.8))
        minus = PSU11Element.from_matrix(-g.matrix())
        np.testing.assert_allclose(act(minus, THETA_GRID), act(g, THETA_GRID), atol=1e-14)

    def test_full_turn(self):
        g = exp(SU11Vector(0.9, -0.4, 0.1))
        for theta in (0.0, 1.0, 3.0):
            self.assertAlmostEqual(act(g, theta + 2 * math.pi), act(g, theta) + 2 * math.pi, delta=1e-12)

    def test_action_is_a_homomorphism(self):
        g, h = random_elements(9, 2)
        for theta in THETA_GRID:
            self.assertAlmostEqual(wrap_angle(act(g * h, theta) - act(g, act(h, theta))), 0.0, delta=1e-12)

    def test_rotation_angle(self):
        self.assertAlmostEqual(rotation_angle(exp(E3 * 0.25)), 0.5)
        self.assertAlmostEqual(rotation_angle(exp(E3 * -0.25)), -0.5)
        self.assertIsNone(rotation_angle(exp(E1)))


class ConnectionTests(SimpleTestCase):

    def test_connection_form(self):
        self.assertEqual(connection_form((0.0, 0.0), 2.0), ZERO)
        self.assertEqual(connection_form((1.0, 0.0), 1.0), SU11Vector(0.5, 0.0, 0.0))

    def test_connection_circle_field(self):
        l = 4.0
        xi = connection_form((1.0, 0.0), l)
        for theta in THETA_GRID:
            self.assertAlmostEqual(xi.circle_field(theta), -math.sin(theta) / l, delta=1e-15)

    def test_principal_form(self):
        xi = SU11Vector(0.1, 0.2, 0.3)
        v = (0.7, -1.1)
        self.assertEqual(principal_form(v, xi, PSU11Element.identity(), 2.0), xi + connection_form(v, 2.0))
        g = random_elements(10, 1)[0]
        self.assertEqual(principal_form((0.0, 0.0), xi, g, 2.0), xi)

    def test_principal_form_equivariance(self):
        g, h = random_elements(11, 2)
        v = (0.3, 0.8)
        left = principal_form(v, ZERO, g * h, 1.5)
        right = h.adjoint_inverse(principal_form(v, ZERO, g, 1.5))
        np.testing.assert_allclose(left.coefficients, right.coefficients, atol=1e-12)

    def test_curvature_base(self):
        eps, l = 1e-2, 3.0
        omega = curvature_base((eps, 0.0), (0.0, eps), l)
        self.assertAlmostEqual(omega.c3, -eps ** 2 / (2 * l ** 2))
        self.assertAlmostEqual(act(exp(omega), 0.7) - 0.7, -eps ** 2 / l ** 2, delta=1e-15)
        self.assertEqual(curvature_base((1.0, 2.0), (2.0, 4.0), l), ZERO)

    def test_curvature_is_bilinear_and_antisymmetric(self):
        rng = np.random.default_rng(12)
        u, v, w = rng.normal(size=(3, 2))
        a, b = 0.7, -1.3
        lhs = curvature_base(a * u + b * w, v, 2.0)
        rhs = curvature_base(u, v, 2.0) * a + curvature_base(w, v, 2.0) * b
        self.assertAlmostEqual(lhs.c3, rhs.c3, delta=1e-15)
        self.assertAlmostEqual(curvature_base(u, v, 2.0).c3, -curvature_base(v, u, 2.0).c3, delta=1e-15)

    def test_curvature_vs_small_square(self):
        # the base curvature turns the rod against the small-loop rotation
        eps, l = 1e-3, 1.0
        rotation = lift(square_loop(eps), theta0=0.0, l=l, steps=4000).theta[-1]
        omega = curvature_base((eps, 0.0), (0.0, eps), l)
        self.assertAlmostEqual(act(exp(omega), 0.0), -rotation, delta=1e-2 * rotation)

    def test_curvature_principal(self):
        u, v = (0.3, 0.1), (-0.2, 0.9)
        self.assertEqual(curvature_principal(u, v, PSU11Element.identity(), 2.0), curvature_base(u, v, 2.0))
        g, h = random_elements(13, 2)
        left = curvature_principal(u, v, g * h, 2.0)
        right = h.adjoint_inverse(curvature_principal(u, v, g, 2.0))
        np.testing.assert_allclose(left.coefficients, right.coefficients, atol=1e-12)
        base = curvature_base(u, v, 2.0)
        self.assertAlmostEqual(
            np.linalg.det(left.matrix()).real, np.linalg.det(base.matrix()).real, delta=1e-14
        )


class HolonomyTests(SimpleTestCase):

    def test_constant_curve(self):
        self.assertTrue(holonomy(Segment((1.0, 1.0), (1.0, 1.0)), l=2.0, steps=10).close_to(PSU11Element.identity()))

    def test_curve_and_its_reversal(self):
        circle = Circle(center=(0.4, -0.2), radius=0.9)
        g = holonomy(Composite([circle, Reversed(circle)]), l=2.0, steps=2000)
        self.assertTrue(g.close_to(PSU11Element.identity(), tol=1e-10))

    def test_determinant(self):
        g = holonomy(prytz_loop(Star(), (0.0, 0.0)), l=1.0, steps=5000)
        self.assertAlmostEqual(g.determinant, 1.0, delta=1e-12)

    def assert_matches_lift(self, loop, l=5.0, steps=20_000):
        g = holonomy(loop, l=l, steps=steps)
        for theta0 in THETA_GRID:
            expected = lift(loop, theta0=theta0, l=l, steps=steps).theta[-1]
            self.assertAlmostEqual(wrap_angle(act(g, theta0) - expected), 0.0, delta=1e-6)

    def test_circle_matches_lift(self):
        self.assert_matches_lift(prytz_loop(Circle(), (0.0, 0.0)))

    def test_star_matches_lift(self):
        self.assert_matches_lift(prytz_loop(Star(), (0.0, 0.0)))

    def test_fourth_order_convergence(self):
        arc = Parabola()
        oracle = holonomy(arc, l=0.5, steps=5000)

        def error(steps):
            g = holonomy(arc, l=0.5, steps=steps)
            return max(abs(g.a - oracle.a), abs(g.b - oracle.b))

        coarse, fine = error(50), error(100)
        self.assertTrue(13.0 <= coarse / fine <= 19.0, coarse / fine)

    def test_circle_closed_form(self):
        for radius, l in ((0.5, 2.0), (1.0, 5.0), (3.0, 2.0)):
            g = holonomy(Circle(radius=radius), l=l, steps=20_000)
            self.assertTrue(g.close_to(circle_holonomy(radius, l), tol=1e-9), (radius, l))

    def test_circle_rotation_number(self):
        g = circle_holonomy(1.0, 5.0)
        self.assertEqual(g.kind, "elliptic")
        self.assertAlmostEqual(rotation_angle(g), circle_rotation_number(1.0, 5.0), delta=1e-12)
        self.assertEqual(circle_holonomy(3.0, 2.0).kind, "hyperbolic")


class MagnusTests(SimpleTestCase):

    def test_unit_circle_terms(self):
        terms = loop_magnus_terms(prytz_loop(Circle(), (0.0, 0.0)), 5.0)
        self.assertAlmostEqual(terms.U1.norm(), 0.0, delta=1e-10)
        self.assertAlmostEqual(terms.U2.c3, math.pi / 50.0, delta=1e-12)
        self.assertAlmostEqual(terms.U3.norm(), 0.0, delta=1e-10)
        self.assertAlmostEqual(terms.U4.c3, (math.pi / 2.0) / (4.0 * 625.0), delta=1e-12)

    def test_centroid_start_cancels_first_moments(self):
        star = Star(center=(0.5, -0.25))
        terms = loop_magnus_terms(prytz_loop(star, (0.5, -0.25)), 3.0)
        self.assertAlmostEqual(terms.U3.norm(), 0.0, delta=1e-10)

    def test_open_curve_displacement(self):
        m = moments(Circle())
        terms = magnus_terms(m, 2.0, displacement=(1.0, -2.0))
        self.assertEqual(terms.U1, SU11Vector(-0.25, 0.5, 0.0))

    def test_centered_prediction(self):
        loop = prytz_loop(Circle(), (0.0, 0.0))
        terms = loop_magnus_terms(loop, 5.0)
        predicted = terms.predicted_rotation(math.pi / 2)
        self.assertAlmostEqual(predicted, math.pi / 25.0 + (math.pi / 2.0) / 1250.0, delta=1e-12)
        measured = lift(loop, theta0=math.pi / 2, l=5.0, steps=20_000).theta[-1] - math.pi / 2
        self.assertAlmostEqual(measured, predicted, delta=1e-4)

    def test_first_moment_term_sign(self):
        loop = prytz_loop(Circle(center=(0.4, 0.3)), (0.0, 0.0))
        l = 8.0
        g = holonomy(loop, l=l, steps=20_000)
        with_u3 = loop_magnus_terms(loop, l)
        without_u3 = magnus_terms(moments(loop).translated(*-loop.start), l)
        without_u3 = type(without_u3)(without_u3.U1, without_u3.U2, ZERO, without_u3.U4)
        measured = act(g, THETA_GRID) - THETA_GRID
        err_with = np.max(np.abs(measured - with_u3.predicted_rotation(THETA_GRID)))
        err_without = np.max(np.abs(measured - without_u3.predicted_rotation(THETA_GRID)))
        self.assertLess(err_with, err_without / 10.0)

    def truncation_slope(self, loop):
        ls = [4.0, 8.0, 16.0, 32.0]
        residuals = []
        for l in ls:
            g = holonomy(loop, l=l, steps=20_000)
            truncated = loop_magnus_terms(loop, l).element
            gap = act(g, THETA_GRID) - act(truncated, THETA_GRID)
            residuals.append(max(abs(wrap_angle(float(d))) for d in gap))
        return float(np.polyfit(np.log(ls), np.log(residuals), 1)[0])

    def test_truncation_order(self):
        slope = self.truncation_slope(prytz_loop(Circle(), (0.0, 0.0)))
        self.assertAlmostEqual(slope, -5.0, delta=0.5)

    def test_truncation_order_off_center(self):
        slope = self.truncation_slope(prytz_loop(Circle(center=(0.4, 0.3)), (0.0, 0.0)))
        self.assertAlmostEqual(slope, -5.0, delta=0.5)

    def test_truncation_order_off_center_star(self):
        slope = self.truncation_slope(prytz_loop(Star(), (0.2, 0.1)))
        self.assertAlmostEqual(slope, -5.0, delta=0.5)
