"""
Built-in scenarios behind the planimeter and geodesic figures. Every CSV
uses the path columns t, px, py, qx, qy, theta.
"""
import math

from planimeter.areas import area_estimate_angle
from planimeter.config import PATH_HEADER
from planimeter.lift import lift
from subriemannian.hamiltonian import CotangentState, geodesic
from simulator.reports import Report, geodesic_path_rows
from simulator.scenario import Scenario

FIGURES = {
    "Circle1": {"curve": {"kind": "circle", "center": [0.0, 1.0]}, "start": [0.0, 0.0], "l": 5.0},
    "Circle2": {"curve": {"kind": "circle"}, "start": "centroid", "l": 5.0},
    "Star1": {"curve": {"kind": "star", "center": [0.4, 0.0]}, "start": [0.0, 0.0], "l": 5.0},
    "Star2": {"curve": {"kind": "star"}, "start": "centroid", "l": 5.0},
    "Geodesic1": {
        "l": 1.0,
        "geodesic": {"start": [0.0, 0.0, math.pi / 2], "momentum": [1.0, 0.0, 0.5], "duration": 10.0},
    },
    "Geodesic2": {
        "l": 1.0,
        "geodesic": {"start": [0.0, 0.0, math.pi / 2], "momentum": [0.0, 1.0, 2.0], "duration": 10.0},
    },
}


def figure_scenario(name, steps=None):
    return Scenario.from_dict({**FIGURES[name], "steps": steps})


def planimeter_figure(scenario):
    curve = scenario.curve
    path = lift(scenario.tracer(curve), scenario.theta0(curve), scenario.l, scenario.steps)
    return path.to_rows(), {"angle_estimate": area_estimate_angle(path), "delta_theta": float(path.theta[-1] - path.theta[0])}


def geodesic_figure(scenario):
    spec = scenario["geodesic"]
    s0 = CotangentState(*spec["start"], *spec["momentum"], l=scenario.l)
    trajectory = geodesic(s0, spec["duration"], scenario.steps)
    return geodesic_path_rows(trajectory), {"energy": float(trajectory.energy[0])}


def cmd_figures(steps=None):
    summary, lines, tables = {}, [], {}
    for name in FIGURES:
        scenario = figure_scenario(name, steps)
        if scenario["geodesic"] is None:
            rows, info = planimeter_figure(scenario)
        else:
            rows, info = geodesic_figure(scenario)
        summary[name] = info
        tables[f"{name}.csv"] = (PATH_HEADER, rows)
        lines.append(f"{name}: {len(rows)} rows")
    return Report("figures", summary, lines, tables)
