import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import PreconditionError
from geometry.curves import Circle, Segment, Star
from geometry.moments import prytz_loop
from planimeter.config import Config
from planimeter.lift import lift, lifted_fields
from development.chisel import chisel_velocity, develop, pseudoconnection
from development.se2 import BASIS, SE2Element, SE2Vector
from development.trailers import TrailerChain, chain_header, chain_lift

E1, E2, E3 = SE2Vector(1, 0, 0), SE2Vector(0, 1, 0), SE2Vector(0, 0, 1)


def commutator(u, v):
    return u.matrix() @ v.matrix() - v.matrix() @ u.matrix()


class SE2Tests(SimpleTestCase):

    def test_bracket_table(self):
        np.testing.assert_allclose(commutator(E3, E1), E2.matrix(), atol=1e-15)
        np.testing.assert_allclose(commutator(E3, E2), -E1.matrix(), atol=1e-15)
        np.testing.assert_allclose(commutator(E1, E2), np.zeros((3, 3)), atol=1e-15)

    def test_coefficient_bracket(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            u, v = SE2Vector(*rng.normal(size=3)), SE2Vector(*rng.normal(size=3))
            np.testing.assert_allclose(u.bracket(v).matrix(), commutator(u, v), atol=1e-14)

    def test_matrix_round_trip(self):
        v = SE2Vector(0.5, -1.5, 2.0)
        self.assertEqual(SE2Vector.from_matrix(v.matrix()), v)
        np.testing.assert_allclose(v.matrix(), 0.5 * BASIS[0] - 1.5 * BASIS[1] + 2.0 * BASIS[2])

    def test_group_laws(self):
        f, g, h = SE2Element(0.3, 1.0, -2.0), SE2Element(-1.2, 0.5, 0.5), SE2Element(2.0, -3.0, 1.0)
        self.assertTrue((f * g * h).close_to(f * (g * h)))
        self.assertTrue((g * g.inverse()).close_to(SE2Element.identity()))
        self.assertTrue((g.inverse() * g).close_to(SE2Element.identity()))
        np.testing.assert_allclose((f * g).matrix(), f.matrix() @ g.matrix(), atol=1e-14)
        self.assertTrue(SE2Element.from_matrix(h.matrix()).close_to(h))

    def test_action(self):
        g = SE2Element(math.pi / 2, 1.0, 2.0)
        np.testing.assert_allclose(g.act((1.0, 0.0)), [1.0, 3.0], atol=1e-15)
        homogeneous = g.matrix() @ np.array([1.0, 1.0, 0.0])
        np.testing.assert_allclose(homogeneous[1:], g.act((1.0, 0.0)), atol=1e-15)


class PseudoconnectionTests(SimpleTestCase):

    def test_horizontal_vectors_have_no_rotation(self):
        for theta in (0.0, 0.8, -2.2):
            config = Config(0.0, 0.0, theta, l=2.0)
            for field in lifted_fields(theta, 2.0):
                self.assertAlmostEqual(pseudoconnection(field, config).c3, 0.0, delta=1e-15)

    def test_vertical_vector(self):
        omega = pseudoconnection((0.0, 0.0, 1.0), Config(0.0, 0.0, 0.0, l=3.0))
        self.assertEqual(omega, SE2Vector(0.0, 3.0, 3.0))

    def test_linearity(self):
        config = Config(1.0, 1.0, 0.6, l=1.5)
        u, w = np.array([0.3, -0.2, 0.9]), np.array([-1.0, 0.4, 0.1])
        combined = pseudoconnection(2.0 * u - 3.0 * w, config)
        expected = pseudoconnection(u, config) * 2.0 + pseudoconnection(w, config) * -3.0
        np.testing.assert_allclose(combined.coefficients, expected.coefficients, atol=1e-14)

    def test_tracer_moving_along_the_rod(self):
        theta, l = 0.9, 2.5
        along_rod = np.array([math.cos(theta), math.sin(theta), 0.0])
        omega = pseudoconnection(along_rod, Config(0.0, 0.0, theta, l=l))
        self.assertAlmostEqual(omega.c3, 0.0, delta=1e-15)
        np.testing.assert_allclose(
            [omega.c1, omega.c2], l * chisel_velocity(theta, along_rod[:2]), atol=1e-14
        )


class ChiselVelocityTests(SimpleTestCase):

    def test_zero_angle(self):
        np.testing.assert_allclose(chisel_velocity(0.0, np.array([2.0, 5.0])), [2.0, 0.0], atol=1e-15)

    def test_projector(self):
        rng = np.random.default_rng(32)
        for theta, v in zip(rng.uniform(-4, 4, 10), rng.normal(size=(10, 2))):
            rod = np.array([math.cos(theta), math.sin(theta)])
            np.testing.assert_allclose(chisel_velocity(theta, v), np.outer(rod, rod) @ v, atol=1e-14)
            once = chisel_velocity(theta, v)
            np.testing.assert_allclose(chisel_velocity(theta, once), once, atol=1e-14)

    def test_matches_differentiated_chisel(self):
        path = lift(Circle(center=(0.2, 0.1)), theta0=0.5, l=2.0, steps=10_000)
        h = path.t[1] - path.t[0]
        numeric = (path.q[2:] - path.q[:-2]) / (2.0 * h)
        formula = chisel_velocity(path.theta[1:-1], path.velocity()[1:-1])
        np.testing.assert_allclose(numeric, formula, atol=1e-5)


class DevelopTests(SimpleTestCase):

    def test_matches_the_rod(self):
        for loop in (prytz_loop(Circle(), (0.0, 0.0)), prytz_loop(Star(), (0.1, 0.0))):
            path = lift(loop, theta0=0.3, l=5.0, steps=20_000)
            development = develop(loop, theta0=0.3, l=5.0, steps=20_000)
            np.testing.assert_allclose(development.chisel, path.q, atol=1e-8)
            np.testing.assert_array_equal(development.theta, path.theta)

    def test_stationary_tracer(self):
        development = develop(Segment((1.0, 1.0), (1.0, 1.0)), theta0=0.7, l=2.0, steps=20)
        np.testing.assert_array_equal(development.chisel, np.tile(development.chisel[0], (21, 1)))
        np.testing.assert_array_equal(development.rotation, 0.0)

    def test_tractrix(self):
        development = develop(Segment((0.0, 0.0), (10.0, 0.0)), theta0=math.pi / 2, l=1.0, steps=2000)
        y = development.chisel[:, 1]
        self.assertTrue(np.all(np.diff(y) < 0.0))
        self.assertTrue(np.all(y > 0.0))
        self.assertLess(y[-1], 1e-3)
        tracer = np.stack([np.linspace(0.0, 10.0, 2001), np.zeros(2001)], axis=-1)
        np.testing.assert_allclose(np.linalg.norm(development.chisel - tracer, axis=1), 1.0, atol=1e-7)

    def test_frames(self):
        development = develop(Circle(), theta0=0.0, l=2.0, steps=100)
        frames = development.frames()
        self.assertEqual(len(frames), 101)
        self.assertTrue(frames[0].close_to(SE2Element(0.0, 3.0, 0.0)))


class TrailerTests(SimpleTestCase):

    def test_single_rod_is_the_lift(self):
        loop = prytz_loop(Star(), (0.0, 0.0))
        path = lift(loop, theta0=0.4, l=5.0, steps=5000)
        chain = chain_lift(loop, TrailerChain([5.0], [0.4]), steps=5000)
        np.testing.assert_array_equal(chain.thetas[:, 0], path.theta)
        np.testing.assert_array_equal(chain.joint(1), path.q)
        np.testing.assert_array_equal(chain.to_rows(), path.to_rows()[:, [0, 1, 2, 5, 3, 4]])

    def test_rigidity_and_constraint(self):
        chain = TrailerChain([1.0, 0.7, 1.3], [0.2, 1.0, -0.5])
        result = chain_lift(Circle(center=(0.3, 0.0), radius=2.0), chain, steps=20_000)
        h = np.diff(result.t)
        for i, l in enumerate(chain.lengths):
            lead, follow = result.joint(i), result.joint(i + 1)
            np.testing.assert_allclose(np.linalg.norm(follow - lead, axis=1), l, rtol=1e-12)
            theta = result.thetas[:, i]
            mid = 0.5 * (theta[1:] + theta[:-1])
            dp = np.diff(lead, axis=0)
            eta = (-np.sin(mid) * dp[:, 0] + np.cos(mid) * dp[:, 1] + l * np.diff(theta)) / h
            self.assertLess(np.max(np.abs(eta)), 1e-5)

    def test_cascaded_tractrices(self):
        chain = TrailerChain([1.0, 1.0, 1.0], [math.pi / 2] * 3)
        result = chain_lift(Segment((0.0, 0.0), (12.0, 0.0)), chain, steps=4000)
        for i in range(1, 4):
            y = result.joint(i)[:, 1]
            self.assertTrue(np.all(np.diff(y) <= 1e-15), i)
            self.assertLess(y[-1], y[0])

    def test_translation_equivariance(self):
        chain = TrailerChain([1.0, 2.0], [0.3, -0.3])
        a = chain_lift(Circle(center=(0.0, 0.0), radius=1.5), chain, steps=5000)
        b = chain_lift(Circle(center=(4.0, -1.0), radius=1.5), chain, steps=5000)
        np.testing.assert_allclose(b.joints - a.joints, np.broadcast_to([4.0, -1.0], a.joints.shape), atol=1e-10)

    def test_header(self):
        self.assertEqual(chain_header(2), "t,u0x,u0y,theta1,u1x,u1y,theta2,u2x,u2y")

    def test_joints(self):
        chain = TrailerChain([1.0, 2.0], [0.0, math.pi / 2])
        np.testing.assert_allclose(chain.joints((1.0, 1.0)), [[1.0, 1.0], [2.0, 1.0], [2.0, 3.0]], atol=1e-15)

    def test_needs_a_rod(self):
        with self.assertRaises(PreconditionError):
            chain_lift(Circle(), TrailerChain([], []), steps=10)
