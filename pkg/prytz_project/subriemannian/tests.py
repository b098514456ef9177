import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConvergenceError, PreconditionError
from geometry.curves import CCW, CW, Segment
from planimeter.config import Config, wrap_angle
from planimeter.lift import constraint_residual, lift
from subriemannian.hamiltonian import (
    CotangentState,
    bracket_generating,
    geodesic,
    hamiltonian,
    hamiltonian_frame_form,
    horizontal_frame,
    initial_theta_rate,
    integrate_reduced,
    reduced_theta_accel,
)
from subriemannian.planner import plan, replay


class HamiltonianTests(SimpleTestCase):

    def test_zero_momentum(self):
        self.assertEqual(hamiltonian(CotangentState(1.0, 2.0, 0.3, 0.0, 0.0, 0.0, l=2.0)), 0.0)

    def test_unit_momentum(self):
        self.assertEqual(hamiltonian(CotangentState(0.0, 0.0, 0.7, 1.0, 0.0, 0.0, l=2.0)), 0.5)

    def test_both_forms_agree(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            s = CotangentState(*rng.normal(size=6), l=rng.uniform(0.5, 5.0))
            self.assertAlmostEqual(hamiltonian(s), hamiltonian_frame_form(s), delta=1e-14 * (1.0 + hamiltonian(s)))

    def test_rod_length_must_be_positive(self):
        with self.assertRaises(PreconditionError):
            CotangentState(0, 0, 0, 1, 0, 0, l=0.0)


class GeodesicTests(SimpleTestCase):

    def test_zero_angular_momentum_is_a_lifted_line(self):
        s0 = CotangentState(0.5, -1.0, 0.4, 0.8, 0.3, 0.0, l=1.5)
        trajectory = geodesic(s0, 2.0, steps=4000)
        np.testing.assert_array_equal(trajectory.momenta[:, 2], 0.0)
        line = Segment((0.5, -1.0), (0.5 + 1.6, -1.0 + 0.6), duration=2.0)
        np.testing.assert_allclose(trajectory.p, line.position(trajectory.t), atol=1e-12)
        path = lift(line, theta0=0.4, l=1.5, steps=4000)
        np.testing.assert_allclose(trajectory.theta, path.theta, atol=1e-8)

    def test_energy_and_momenta_are_conserved(self):
        s0 = CotangentState(0.0, 0.0, 0.3, 1.0, 0.5, 2.0, l=1.5)
        trajectory = geodesic(s0, 10.0, steps=100_000)
        H = trajectory.energy
        self.assertLessEqual(np.max(np.abs(H - H[0])), 1e-10)
        self.assertLessEqual(np.max(np.abs(trajectory.momenta[:, 0] - 1.0)), 1e-14)
        self.assertLessEqual(np.max(np.abs(trajectory.momenta[:, 1] - 0.5)), 1e-14)

    def test_geodesics_are_horizontal(self):
        trajectory = geodesic(CotangentState(0.0, 0.0, 1.0, -0.4, 0.9, 1.5, l=2.0), 2.0, steps=10_000)
        self.assertLess(constraint_residual(trajectory), 1e-6)

    def test_rows_and_chisel(self):
        trajectory = geodesic(CotangentState(0.0, 0.0, 1.0, 1.0, 0.0, 1.0, l=2.0), 1.0, steps=100)
        self.assertEqual(trajectory.to_rows().shape, (101, 8))
        distance = np.linalg.norm(trajectory.chisel() - trajectory.p, axis=1)
        np.testing.assert_allclose(distance, 2.0, rtol=1e-14)

    def test_bad_steps(self):
        with self.assertRaises(PreconditionError):
            geodesic(CotangentState(0, 0, 0, 1, 0, 0), 1.0, steps=0)


class ReducedEquationTests(SimpleTestCase):

    def test_equal_momenta(self):
        for theta in (0.0, 0.4, 2.0):
            self.assertAlmostEqual(
                reduced_theta_accel(theta, 1.5, 1.5, 2.0), -(1.5 ** 2 / 4.0) * math.cos(2 * theta), delta=1e-15
            )

    def test_zero_momenta(self):
        self.assertEqual(reduced_theta_accel(1.0, 0.0, 0.0, 2.0), 0.0)

    def test_matches_second_difference(self):
        s0 = CotangentState(0.0, 0.0, 0.2, 0.7, -0.4, 1.1, l=1.3)
        trajectory = geodesic(s0, 1.0, steps=10_000)
        h = trajectory.t[1] - trajectory.t[0]
        theta = trajectory.theta
        second = (theta[2:] - 2.0 * theta[1:-1] + theta[:-2]) / h ** 2
        expected = reduced_theta_accel(theta[1:-1], 0.7, -0.4, 1.3)
        np.testing.assert_allclose(second, expected, atol=1e-5)

    def test_reduced_equation_reproduces_the_flow(self):
        s0 = CotangentState(0.0, 0.0, 0.2, 0.7, -0.4, 1.1, l=1.3)
        omega0 = initial_theta_rate(s0)
        _, reference = integrate_reduced(s0.theta, omega0, 0.7, -0.4, 1.3, 4.0, steps=20_000)
        full = geodesic(s0, 4.0, steps=20_000).theta
        self.assertAlmostEqual(full[-1], reference[-1], delta=1e-10)

        coarse = abs(geodesic(s0, 4.0, steps=100).theta[-1] - reference[-1])
        fine = abs(geodesic(s0, 4.0, steps=200).theta[-1] - reference[-1])
        self.assertGreater(coarse / fine, 10.0)


class FrameTests(SimpleTestCase):

    def test_bracket_generating(self):
        for theta in np.linspace(-math.pi, math.pi, 9):
            self.assertTrue(bracket_generating(theta, 2.0))
        np.testing.assert_allclose(horizontal_frame(0.0, 2.0)[2], [0.0, 0.0, 0.25])


class PlannerTests(SimpleTestCase):

    def test_nothing_to_do(self):
        config = Config(1.0, 2.0, 0.5, l=5.0)
        result = plan(config, config)
        self.assertEqual(result.curves, [])
        self.assertEqual(result.residual, 0.0)

    def test_pure_rotation(self):
        result = plan(Config(0.0, 0.0, 0.0, l=5.0), Config(0.0, 0.0, 0.04, l=5.0), tol=1e-6, steps=1000)
        self.assertLessEqual(result.loops, 6)
        self.assertLessEqual(abs(result.residual), 1e-6)
        first = result.curves[0]
        self.assertEqual(first.orientation, CCW)
        self.assertAlmostEqual(first.radius, math.sqrt(0.04 * 25.0 / math.pi), delta=0.1)

    def test_negative_deficit_turns_the_other_way(self):
        result = plan(Config(0.0, 0.0, 0.0, l=5.0), Config(0.0, 0.0, -0.04, l=5.0), steps=1000)
        self.assertEqual(result.curves[0].orientation, CW)

    def test_random_pairs(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            l = rng.uniform(0.5, 5.0)
            start = Config(*rng.uniform(-3.0, 3.0, 2), rng.uniform(-math.pi, math.pi), l=l)
            target = Config(*rng.uniform(-3.0, 3.0, 2), rng.uniform(-math.pi, math.pi), l=l)
            result = plan(start, target, tol=1e-6, max_loops=20, steps=1000)
            self.assertLessEqual(result.loops, 20)
            final = replay(result, steps=1000)
            np.testing.assert_allclose(final.p, target.p, atol=1e-12)
            self.assertLessEqual(abs(wrap_angle(final.theta - target.theta)), 1e-6)

    def test_loop_budget(self):
        with self.assertRaises(ConvergenceError) as ctx:
            plan(Config(0.0, 0.0, 0.0, l=2.0), Config(0.0, 0.0, 3.0, l=2.0), max_loops=2, steps=500)
        best = ctx.exception.best
        self.assertEqual(best.loops, 2)
        self.assertLess(abs(best.residual), 3.0)

    def test_bad_tolerance(self):
        with self.assertRaises(PreconditionError):
            plan(Config(0, 0, 0), Config(1, 0, 0), tol=0.0)
