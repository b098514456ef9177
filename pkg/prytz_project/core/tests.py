import math

import numpy as np
from django.test import SimpleTestCase
from rest_framework import serializers

from core.exceptions import (
    ConvergenceError,
    DegenerateRegionError,
    NumericError,
    PreconditionError,
    PrytzError,
)
from core.integrators import ensure_finite, rk4, step_grid, step_nodes
from core.serializers import PointField, StrictSerializer, positive


class StepNodeTests(SimpleTestCase):

    def test_plain_grid(self):
        np.testing.assert_array_equal(step_nodes(2.0, 8), np.linspace(0.0, 2.0, 9))

    def test_breakpoint_between_nodes_is_inserted(self):
        t = step_nodes(1.0, 10, [0.25])
        self.assertEqual(len(t), 12)
        self.assertIn(0.25, t)
        self.assertTrue(np.all(np.diff(t) > 0.0))

    def test_breakpoint_on_a_node_replaces_it(self):
        cut = 0.3 + 1e-13
        t = step_nodes(1.0, 10, [cut])
        self.assertEqual(len(t), 11)
        self.assertEqual(t[3], cut)

    def test_end_points_are_ignored(self):
        np.testing.assert_array_equal(step_nodes(1.0, 4, [0.0, 1.0]), step_grid(1.0, 4))

    def test_needs_a_step(self):
        with self.assertRaises(ValueError):
            step_grid(1.0, 0)


class RK4Tests(SimpleTestCase):

    def test_fourth_order(self):
        def error(steps):
            _, y = rk4(lambda t, y: y, np.array([1.0]), 1.0, steps)
            return abs(y[-1, 0] - math.e)

        ratio = error(10) / error(20)
        self.assertAlmostEqual(ratio, 16.0, delta=2.0)

    def test_shapes(self):
        t, y = rk4(lambda t, y: np.array([1.0, 0.0]), np.array([0.0, 2.0]), 3.0, 6)
        self.assertEqual(y.shape, (7, 2))
        np.testing.assert_allclose(y[:, 0], t, atol=1e-14)
        np.testing.assert_array_equal(y[:, 1], 2.0)

    def test_non_finite(self):
        with self.assertRaises(NumericError):
            ensure_finite("test", np.array([1.0, math.nan]))
        with self.assertRaises(NumericError):
            rk4(lambda t, y: y * 1e200, np.array([1e200]), 1.0, 4)


class ExceptionTests(SimpleTestCase):

    def test_hierarchy(self):
        self.assertTrue(issubclass(DegenerateRegionError, PreconditionError))
        self.assertTrue(issubclass(PreconditionError, ValueError))
        self.assertTrue(issubclass(NumericError, ArithmeticError))
        self.assertTrue(issubclass(ConvergenceError, PrytzError))

    def test_convergence_error_keeps_best(self):
        exc = ConvergenceError("out of loops", best={"residual": 0.1})
        self.assertEqual(exc.best, {"residual": 0.1})
        self.assertEqual(str(exc), "out of loops")


class PairSerializer(StrictSerializer):
    point = PointField()
    scale = serializers.FloatField(default=1.0, validators=[positive])


class StrictSerializerTests(SimpleTestCase):

    def test_valid(self):
        serializer = PairSerializer(data={"point": [1, 2]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data["point"], [1.0, 2.0])
        self.assertEqual(serializer.validated_data["scale"], 1.0)

    def test_unknown_key(self):
        serializer = PairSerializer(data={"point": [1, 2], "colour": "red"})
        self.assertFalse(serializer.is_valid())
        self.assertEqual(serializer.errors["colour"], ["Unknown key."])

    def test_bad_values(self):
        for data in ({"point": [1, 2, 3]}, {"point": [1, 2], "scale": 0.0}, {}):
            self.assertFalse(PairSerializer(data=data).is_valid(), data)
