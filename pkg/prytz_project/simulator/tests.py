from io import StringIO
import json
import math
from pathlib import Path
import tempfile

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from rest_framework.exceptions import ValidationError

from core.exceptions import ConvergenceError
from planimeter.config import PATH_HEADER
from simulator.figures import FIGURES, figure_scenario
from simulator.output import read_csv
from simulator.reports import (
    Report,
    cmd_area,
    cmd_chain,
    cmd_geodesic,
    cmd_holonomy,
    cmd_plan,
    cmd_sweep,
    loglog_slope,
)
from simulator.scenario import Scenario

STAR_AREA = 2.0 * math.sin(math.pi / 5.0)

CIRCLE = {"curve": {"kind": "circle"}, "start": "centroid", "l": 5.0, "steps": 20_000}
STAR = {"curve": {"kind": "star"}, "start": "centroid", "l": 5.0, "steps": 20_000}


class ScenarioSerializerTests(SimpleTestCase):

    def test_defaults(self):
        scenario = Scenario.from_dict({"curve": {"kind": "circle"}})
        self.assertEqual(scenario.l, 5.0)
        self.assertIsNone(scenario["theta0"])
        self.assertEqual(scenario["l_values"], [4.0, 8.0, 16.0, 32.0])
        self.assertEqual(scenario["workers"], 1)
        self.assertEqual(len(scenario.theta_grid), 16)

    def test_unknown_keys_are_rejected(self):
        with self.assertRaises(ValidationError) as ctx:
            Scenario.from_dict({"curve": {"kind": "circle"}, "lenght": 5.0})
        self.assertIn("lenght", ctx.exception.detail)

    def test_unknown_nested_key(self):
        with self.assertRaises(ValidationError) as ctx:
            Scenario.from_dict({"plan": {"start": [0, 0, 0], "target": [1, 1, 1], "tolerance": 1e-6}})
        self.assertIn("tolerance", ctx.exception.detail["plan"])

    def test_unknown_curve_key(self):
        with self.assertRaises(ValidationError) as ctx:
            Scenario.from_dict({"curve": {"kind": "circle", "radious": 2.0}})
        self.assertIn("curve", ctx.exception.detail)

    def test_bad_values(self):
        for data in (
            {"curve": {"kind": "hexagon"}},
            {"curve": {"kind": "circle"}, "l": -1.0},
            {"curve": {"kind": "circle"}, "steps": 0},
            {"curve": {"kind": "circle"}, "start": "middle"},
            {"curve": {"kind": "circle"}, "start": [1.0]},
            {"start": [0.0, 0.0]},
            {"chain": {"lengths": [1.0, 2.0], "angles": [0.0]}},
            [1, 2],
        ):
            with self.assertRaises(ValidationError, msg=data):
                Scenario.from_dict(data)

    def test_start_values(self):
        self.assertEqual(Scenario.from_dict(CIRCLE)["start"], "centroid")
        self.assertEqual(Scenario.from_dict({**CIRCLE, "start": [0.5, 0]})["start"], [0.5, 0.0])

    def test_round_trip(self):
        data = {
            **STAR,
            "theta0": 0.25,
            "geodesic": {"momentum": [1.0, 0.0, 0.5]},
            "plan": {"start": [0, 0, 0], "target": [1, 0.5, 1.0]},
            "chain": {"lengths": [1.0, 2.0]},
            "out": "results",
        }
        scenario = Scenario.from_dict(data)
        again = Scenario.from_dict(scenario.to_dict())
        self.assertEqual(again.data, scenario.data)
        self.assertEqual(json.dumps(again.to_dict(), sort_keys=True), json.dumps(scenario.to_dict(), sort_keys=True))

    @override_settings(PRYTZ_STEPS=1234, PRYTZ_SAMPLES=512)
    def test_settings_defaults(self):
        scenario = Scenario.from_dict({"curve": {"kind": "circle"}})
        self.assertEqual(scenario.steps, 1234)
        self.assertEqual(scenario.samples, 512)
        self.assertEqual(Scenario.from_dict({**CIRCLE, "steps": 10}).steps, 10)


class ScenarioCurveTests(SimpleTestCase):

    def test_tracer_without_start_is_the_curve(self):
        scenario = Scenario.from_dict({"curve": {"kind": "circle"}})
        curve = scenario.curve
        self.assertIs(scenario.tracer(curve), curve)
        self.assertEqual(scenario.theta0(curve), 0.0)

    def test_outward_spoke_angle(self):
        scenario = figure_scenario("Circle1")
        self.assertAlmostEqual(scenario.theta0(scenario.curve), math.pi / 4, delta=1e-15)
        scenario = Scenario.from_dict(STAR)
        self.assertAlmostEqual(scenario.theta0(scenario.curve), 0.0, delta=1e-12)

    def test_explicit_theta0_wins(self):
        scenario = Scenario.from_dict({**CIRCLE, "theta0": 2.0})
        self.assertEqual(scenario.theta0(scenario.curve), 2.0)

    def test_centroid_loop(self):
        scenario = Scenario.from_dict({**CIRCLE, "curve": {"kind": "circle", "center": [3.0, -1.0]}})
        tracer = scenario.tracer(scenario.curve)
        self.assertEqual(tracer.kind, "composite")
        np.testing.assert_allclose(tracer.start, [3.0, -1.0], atol=1e-12)
        self.assertTrue(tracer.closed)


class AreaReportTests(SimpleTestCase):

    def test_circle(self):
        report = cmd_area(Scenario.from_dict(CIRCLE))
        summary = report.summary
        self.assertAlmostEqual(summary["angle_estimate"], math.pi, delta=0.015 * math.pi)
        self.assertAlmostEqual(summary["area"], math.pi, delta=1e-10)
        self.assertLessEqual(abs(summary["identity_residual"]), 1e-6)
        self.assertLessEqual(abs(summary["swept_residual"]), 1e-6)
        self.assertGreater(summary["chord_estimate"], 0.0)
        header, rows = report.tables["path.csv"]
        self.assertEqual(header, PATH_HEADER)
        self.assertEqual(rows.shape[1], 6)

    def test_star(self):
        summary = cmd_area(Scenario.from_dict(STAR)).summary
        self.assertAlmostEqual(summary["area"], STAR_AREA, delta=1e-10)
        self.assertAlmostEqual(summary["angle_estimate"], STAR_AREA, delta=0.015 * STAR_AREA)
        self.assertLessEqual(abs(summary["identity_residual"]), 1e-6)

    def test_needs_a_curve(self):
        with self.assertRaises(ValidationError) as ctx:
            cmd_area(Scenario.from_dict({"l": 2.0}))
        self.assertIn("curve", ctx.exception.detail)


class HolonomyReportTests(SimpleTestCase):

    def test_agreement_table(self):
        report = cmd_holonomy(Scenario.from_dict({**CIRCLE, "steps": 4000, "theta_grid": 4}))
        summary = report.summary
        self.assertLessEqual(summary["max_mismatch"], 1e-6)
        self.assertEqual(summary["kind"], "elliptic")
        magnus = summary["magnus"]
        self.assertLessEqual(math.hypot(magnus["U1"]["e1"], magnus["U1"]["e2"]), 1e-10)
        self.assertLessEqual(math.hypot(magnus["U3"]["e1"], magnus["U3"]["e2"]), 1e-10)
        self.assertLessEqual(summary["max_magnus_gap"], 1e-3)
        header, rows = report.tables["holonomy.csv"]
        self.assertEqual(header.split(",")[0], "theta0")
        np.testing.assert_allclose(rows[:, 0], [0.0, math.pi / 2, math.pi, 3 * math.pi / 2])


class SweepReportTests(SimpleTestCase):

    def test_slopes(self):
        report = cmd_sweep(Scenario.from_dict({**CIRCLE, "steps": 4000, "theta_grid": 4}))
        slopes = report.summary["slopes"]
        self.assertAlmostEqual(slopes["chord_gap"], -4.0, delta=0.3)
        self.assertAlmostEqual(slopes["area_error"], -2.0, delta=0.3)
        self.assertAlmostEqual(slopes["magnus_residual"], -5.0, delta=0.5)
        _, rows = report.tables["sweep.csv"]
        np.testing.assert_array_equal(rows[:, 0], [4.0, 8.0, 16.0, 32.0])

    def test_workers_do_not_change_the_numbers(self):
        data = {**CIRCLE, "steps": 500, "theta_grid": 2, "l_values": [6.0, 3.0, 12.0]}
        serial = cmd_sweep(Scenario.from_dict(data)).tables["sweep.csv"][1]
        pooled = cmd_sweep(Scenario.from_dict({**data, "workers": 2})).tables["sweep.csv"][1]
        np.testing.assert_array_equal(pooled, serial)
        np.testing.assert_array_equal(pooled[:, 0], [6.0, 3.0, 12.0])

    def test_loglog_slope(self):
        l = np.array([4.0, 8.0, 16.0])
        self.assertAlmostEqual(loglog_slope(l, 3.0 * l ** -4), -4.0, delta=1e-12)
        self.assertTrue(math.isnan(loglog_slope(l, [1.0, 0.0, 1.0])))


class GeodesicReportTests(SimpleTestCase):

    def test_conservation(self):
        data = {"l": 1.0, "steps": 2000, "geodesic": {"start": [0, 0, 1.0], "momentum": [1.0, 0.5, 0.3], "duration": 2.0}}
        report = cmd_geodesic(Scenario.from_dict(data))
        self.assertLessEqual(report.summary["energy_drift"], 1e-10)
        self.assertEqual(report.summary["momentum_drift"], 0.0)
        header, rows = report.tables["geodesic_path.csv"]
        self.assertEqual(header, PATH_HEADER)
        np.testing.assert_allclose(np.hypot(rows[:, 3] - rows[:, 1], rows[:, 4] - rows[:, 2]), 1.0, rtol=1e-12)


class PlanReportTests(SimpleTestCase):

    def test_reaches_the_target(self):
        data = {"l": 1.0, "plan": {"start": [0, 0, 0], "target": [1.0, 0.5, 1.0], "steps": 1000}}
        report = cmd_plan(Scenario.from_dict(data))
        self.assertLessEqual(abs(report.summary["residual"]), 1e-6)
        self.assertLessEqual(abs(report.summary["replay_residual"]), 1e-6)
        _, rows = report.tables["plan.csv"]
        self.assertTrue(np.all(np.diff(rows[:, 0]) > 0.0))
        np.testing.assert_allclose(rows[-1, 1:3], [1.0, 0.5], atol=1e-12)

    def test_best_plan_travels_with_the_error(self):
        data = {"l": 1.0, "plan": {"start": [0, 0, 0], "target": [0.5, 0.0, 2.0], "max_loops": 0, "steps": 500}}
        with self.assertRaises(ConvergenceError) as ctx:
            cmd_plan(Scenario.from_dict(data))
        self.assertIsInstance(ctx.exception.best, Report)
        self.assertIn("plan.csv", ctx.exception.best.tables)


class ChainReportTests(SimpleTestCase):

    def test_single_rod_matches_area_path(self):
        data = {**STAR, "steps": 3000}
        path = cmd_area(Scenario.from_dict(data)).tables["path.csv"][1]
        chain = cmd_chain(Scenario.from_dict({**data, "chain": {"lengths": [5.0]}})).tables["chain.csv"][1]
        np.testing.assert_array_equal(chain, path[:, [0, 1, 2, 5, 3, 4]])

    def test_needs_chain_block(self):
        with self.assertRaises(ValidationError):
            cmd_chain(Scenario.from_dict(CIRCLE))


class PrytzCommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def scenario_file(self, data):
        path = self.dir / "scenario.json"
        path.write_text(json.dumps(data))
        return str(path)

    def run_prytz(self, *args):
        out = StringIO()
        call_command("prytz", *args, stdout=out)
        return out.getvalue()

    def test_area_writes_csv_and_json(self):
        scenario = self.scenario_file({**CIRCLE, "steps": 2000})
        output = self.run_prytz("area", "--scenario", scenario, "--out", str(self.dir / "area"))
        self.assertIn("wrote 2 file(s)", output)
        header, rows = read_csv(self.dir / "area" / "path.csv")
        self.assertEqual(header, PATH_HEADER)
        self.assertEqual(rows.shape[1], 6)
        self.assertGreaterEqual(rows.shape[0], 2001)
        summary = json.loads((self.dir / "area" / "area.json").read_text())
        self.assertAlmostEqual(summary["area"], math.pi, delta=1e-10)

    def test_runs_are_byte_identical(self):
        scenario = self.scenario_file({**STAR, "steps": 1000})
        self.run_prytz("area", "--scenario", scenario, "--out", str(self.dir / "a"))
        self.run_prytz("area", "--scenario", scenario, "--out", str(self.dir / "b"))
        for name in ("path.csv", "area.json"):
            self.assertEqual((self.dir / "a" / name).read_bytes(), (self.dir / "b" / name).read_bytes())

    def test_sweep_files_do_not_depend_on_workers(self):
        data = {**STAR, "steps": 500, "theta_grid": 2, "l_values": [4.0, 8.0, 16.0]}
        self.run_prytz("sweep", "--scenario", self.scenario_file(data), "--out", str(self.dir / "serial"))
        pooled = self.scenario_file({**data, "workers": 2})
        self.run_prytz("sweep", "--scenario", pooled, "--out", str(self.dir / "pooled"))
        for name in ("sweep.csv", "sweep.json"):
            self.assertEqual((self.dir / "serial" / name).read_bytes(), (self.dir / "pooled" / name).read_bytes())

    def test_scenario_out_directory(self):
        scenario = self.scenario_file({**CIRCLE, "steps": 200, "out": str(self.dir / "from_scenario")})
        self.run_prytz("area", "--scenario", scenario)
        self.assertTrue((self.dir / "from_scenario" / "path.csv").exists())

    def test_usage_errors(self):
        bad_key = self.scenario_file({**CIRCLE, "lenght": 5.0})
        for args in (
            ("area", "--scenario", bad_key),
            ("area",),
            ("area", "--scenario", str(self.dir / "missing.json")),
        ):
            with self.assertRaises(CommandError) as ctx:
                self.run_prytz(*args, "--out", str(self.dir))
            self.assertEqual(ctx.exception.returncode, 2, args)

    def test_error_names_the_key(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_prytz("area", "--scenario", self.scenario_file({**CIRCLE, "lenght": 5.0}))
        self.assertIn("lenght", str(ctx.exception))

    def test_invalid_json(self):
        path = self.dir / "broken.json"
        path.write_text("{\"curve\": ")
        with self.assertRaises(CommandError) as ctx:
            self.run_prytz("area", "--scenario", str(path))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_open_curve_area_is_a_usage_error(self):
        scenario = self.scenario_file({"curve": {"kind": "segment", "start": [0, 0], "end": [1, 0]}, "steps": 10})
        with self.assertRaises(CommandError) as ctx:
            self.run_prytz("area", "--scenario", scenario, "--out", str(self.dir))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_numeric_failure(self):
        scenario = self.scenario_file({"curve": {"kind": "segment", "start": [-1e308, 0], "end": [1e308, 0]}, "steps": 10})
        with self.assertRaises(CommandError) as ctx:
            self.run_prytz("area", "--scenario", scenario, "--out", str(self.dir))
        self.assertEqual(ctx.exception.returncode, 3)

    def test_planner_not_converging(self):
        scenario = self.scenario_file(
            {"l": 1.0, "plan": {"start": [0, 0, 0], "target": [0.5, 0.0, 2.0], "max_loops": 0, "steps": 500}}
        )
        with self.assertRaises(CommandError) as ctx:
            self.run_prytz("plan", "--scenario", scenario, "--out", str(self.dir / "plan"))
        self.assertEqual(ctx.exception.returncode, 4)
        self.assertTrue((self.dir / "plan" / "plan.json").exists())

    def test_figures(self):
        scenario = self.scenario_file({"steps": 200})
        self.run_prytz("figures", "--scenario", scenario, "--out", str(self.dir / "figures"))
        for name in FIGURES:
            header, rows = read_csv(self.dir / "figures" / f"{name}.csv")
            self.assertEqual(header, PATH_HEADER)
            self.assertEqual(rows.shape[1], 6)
            self.assertTrue(np.all(np.isfinite(rows)))
        summary = json.loads((self.dir / "figures" / "figures.json").read_text())
        self.assertEqual(sorted(summary), sorted(FIGURES))
