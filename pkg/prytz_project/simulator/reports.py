"""
The simulator commands. Each takes a Scenario and returns a Report: a
JSON-ready summary, a few lines for the terminal and the CSV tables to
write. Nothing here prints or touches the filesystem.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from core.exceptions import ConvergenceError
from development.trailers import TrailerChain, chain_header, chain_lift
from geometry.cache import cached_moments
from geometry.curves import curve_from_spec
from geometry.moments import moments
from liegroup.connection import holonomy
from liegroup.magnus import loop_magnus_terms
from liegroup.su11 import act, rotation_angle
from planimeter.areas import (
    area_estimate_angle,
    area_estimate_chord,
    chisel_closure_area,
    swept_area,
)
from planimeter.config import PATH_HEADER, Config, wrap_angle
from planimeter.lift import delta_theta, lift
from subriemannian.hamiltonian import TRAJECTORY_HEADER, CotangentState, geodesic
from subriemannian.planner import DEFAULT_MAX_LOOPS, DEFAULT_STEPS as PLAN_STEPS, DEFAULT_TOLERANCE, plan, replay

logger = logging.getLogger(__name__)

SWEEP_HEADER = "l,area,angle_estimate,chord_estimate,chord_gap,area_error,magnus_residual"
HOLONOMY_HEADER = "theta0,lift,group,magnus,mismatch,magnus_gap"


@dataclass
class Report:
    command: str
    summary: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)


def _config_dict(config):
    return {"x": config.x, "y": config.y, "theta": config.theta}


# ----------------------------
# area
# ----------------------------

def cmd_area(scenario):
    curve = scenario.require_curve("area")
    tracer = scenario.tracer(curve)
    theta0 = scenario.theta0(curve)
    path = lift(tracer, theta0, scenario.l, scenario.steps)

    area = cached_moments(curve, scenario.samples).A
    tracer_area = cached_moments(tracer, scenario.samples).A
    angle = area_estimate_angle(path)
    chord = area_estimate_chord(path)
    chisel_area = chisel_closure_area(path)
    swept = swept_area(path)

    summary = {
        "l": scenario.l,
        "theta0": theta0,
        "steps": scenario.steps,
        "delta_theta": delta_theta(path),
        "area": area,
        "angle_estimate": angle,
        "chord_estimate": chord,
        "chisel_area": chisel_area,
        "identity_residual": area - (angle + chisel_area),
        "swept_area": swept,
        "swept_residual": swept - (tracer_area - chisel_area),
    }
    lines = [
        f"area (moments)      {area:.12g}",
        f"l^2 dtheta          {angle:.12g}",
        f"l d                 {chord:.12g}",
        f"A_q                 {chisel_area:.12g}",
        f"identity residual   {summary['identity_residual']:.3e}",
        f"swept residual      {summary['swept_residual']:.3e}",
    ]
    return Report("area", summary, lines, {"path.csv": (PATH_HEADER, path.to_rows())})


# ----------------------------
# holonomy
# ----------------------------

def cmd_holonomy(scenario):
    curve = scenario.require_curve("holonomy")
    tracer = scenario.tracer(curve)
    gamma = holonomy(tracer, scenario.l, scenario.steps)
    terms = loop_magnus_terms(tracer, scenario.l, scenario.samples)

    rows = []
    for theta0 in scenario.theta_grid:
        lifted = delta_theta(lift(tracer, theta0, scenario.l, scenario.steps))
        group = act(gamma, theta0) - theta0
        predicted = float(terms.predicted_rotation(theta0))
        rows.append([
            theta0,
            lifted,
            group,
            predicted,
            wrap_angle(group - lifted),
            wrap_angle(predicted - lifted),
        ])
    rows = np.array(rows)
    mismatch = float(np.max(np.abs(rows[:, 4])))
    magnus_gap = float(np.max(np.abs(rows[:, 5])))

    summary = {
        "l": scenario.l,
        "steps": scenario.steps,
        "holonomy": gamma.as_dict(),
        "kind": gamma.kind,
        "rotation": rotation_angle(gamma),
        "magnus": terms.as_dict(),
        "max_mismatch": mismatch,
        "max_magnus_gap": magnus_gap,
    }
    lines = [f"holonomy {gamma.kind}, a = {gamma.a:.12g}, b = {gamma.b:.12g}"]
    lines += [
        f"theta0 {theta0:8.5f}  lift {lifted:.12g}  group {group:.12g}  magnus {predicted:.12g}"
        for theta0, lifted, group, predicted, _, _ in rows.tolist()
    ]
    lines += [
        f"max |group - lift|  {mismatch:.3e}",
        f"max |magnus - lift| {magnus_gap:.3e}",
    ]
    return Report("holonomy", summary, lines, {"holonomy.csv": (HOLONOMY_HEADER, rows)})


# ----------------------------
# sweep
# ----------------------------

def sweep_row(region_spec, tracer_spec, theta0, l, steps, samples, grid):
    """One row of the l-scaling study. Module level so worker processes can run it."""
    region = curve_from_spec(region_spec)
    tracer = curve_from_spec(tracer_spec)
    path = lift(tracer, theta0, l, steps)
    area = moments(region, samples).A
    angle = area_estimate_angle(path)
    chord = area_estimate_chord(path)

    gamma = holonomy(tracer, l, steps)
    truncated = loop_magnus_terms(tracer, l, samples).element
    magnus_residual = max(abs(wrap_angle(act(gamma, theta) - act(truncated, theta))) for theta in grid)
    return [l, area, angle, chord, abs(chord - angle), abs(angle - area), magnus_residual]


def loglog_slope(x, y):
    """Least-squares slope of log y against log x; nan if any y is not positive."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        return math.nan
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def cmd_sweep(scenario):
    curve = scenario.require_curve("sweep")
    tracer = scenario.tracer(curve)
    theta0 = scenario.theta0(curve)
    l_values = scenario["l_values"]
    args = [
        (curve.to_spec(), tracer.to_spec(), theta0, l, scenario.steps, scenario.samples, scenario.theta_grid)
        for l in l_values
    ]
    workers = scenario["workers"]
    logger.info("sweep over %d rod lengths, %d worker(s)", len(l_values), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_row, *zip(*args)))
    else:
        rows = [sweep_row(*a) for a in args]
    rows = np.array(rows)

    slopes = {
        "chord_gap": loglog_slope(rows[:, 0], rows[:, 4]),
        "area_error": loglog_slope(rows[:, 0], rows[:, 5]),
        "magnus_residual": loglog_slope(rows[:, 0], rows[:, 6]),
    }
    summary = {"theta0": theta0, "steps": scenario.steps, "l_values": list(l_values), "slopes": slopes}
    lines = [
        f"l {l:6g}  |ld - l^2 dtheta| {gap:.3e}  |l^2 dtheta - A| {err:.3e}  magnus {res:.3e}"
        for l, _, _, _, gap, err, res in rows.tolist()
    ]
    lines += [f"slope {name:16s} {value:+.3f}" for name, value in slopes.items()]
    return Report("sweep", summary, lines, {"sweep.csv": (SWEEP_HEADER, rows)})


# ----------------------------
# geodesic
# ----------------------------

def geodesic_path_rows(trajectory):
    """Trajectory in the planimeter path columns t, px, py, qx, qy, theta."""
    return np.column_stack([trajectory.t, trajectory.p, trajectory.chisel(), trajectory.theta])


def cmd_geodesic(scenario):
    spec = scenario.require("geodesic", "geodesic")
    s0 = CotangentState(*spec["start"], *spec["momentum"], l=scenario.l)
    trajectory = geodesic(s0, spec["duration"], scenario.steps)

    energy_drift = float(np.max(np.abs(trajectory.energy - trajectory.energy[0])))
    momenta = trajectory.momenta[:, :2]
    momentum_drift = float(np.max(np.abs(momenta - momenta[0])))
    final = trajectory.state(-1)
    summary = {
        "l": scenario.l,
        "steps": scenario.steps,
        "duration": spec["duration"],
        "energy": float(trajectory.energy[0]),
        "energy_drift": energy_drift,
        "momentum_drift": momentum_drift,
        "final": {"x": final.x, "y": final.y, "theta": final.theta, "ptheta": final.ptheta},
    }
    lines = [
        f"H(0)            {summary['energy']:.12g}",
        f"max |H - H(0)|  {energy_drift:.3e}",
        f"max |p - p(0)|  {momentum_drift:.3e}",
    ]
    tables = {
        "geodesic.csv": (TRAJECTORY_HEADER, trajectory.to_rows()),
        "geodesic_path.csv": (PATH_HEADER, geodesic_path_rows(trajectory)),
    }
    return Report("geodesic", summary, lines, tables)


# ----------------------------
# plan
# ----------------------------

def plan_path_rows(result, steps):
    """The planned curves lifted one after the other, time running on."""
    blocks = []
    config, offset = result.start, 0.0
    for curve in result.curves:
        path = lift(curve, config.theta, config.l, steps)
        rows = path.to_rows()
        rows[:, 0] += offset
        blocks.append(rows if not blocks else rows[1:])
        config, offset = path.final, offset + curve.duration
    if not blocks:
        x, y, theta, l = result.start.x, result.start.y, result.start.theta, result.start.l
        return np.array([[0.0, x, y, x + l * math.cos(theta), y + l * math.sin(theta), theta]])
    return np.vstack(blocks)


def plan_summary(result, steps):
    replayed = replay(result, steps)
    summary = result.as_dict()
    summary["residual"] = result.residual
    summary["replayed"] = _config_dict(replayed)
    summary["replay_residual"] = wrap_angle(result.target.theta - replayed.theta)
    return summary


def _plan_report(result, steps):
    summary = plan_summary(result, steps)
    lines = [
        f"{result.loops} loop(s), angle residual {result.residual:.3e}",
        f"replayed residual {summary['replay_residual']:.3e}",
    ]
    return Report("plan", summary, lines, {"plan.csv": (PATH_HEADER, plan_path_rows(result, steps))})


def cmd_plan(scenario):
    """
    On ConvergenceError the error's `best` is replaced by the report of the
    best plan reached, so the caller can still write it out.
    """
    spec = scenario.require("plan", "plan")
    l = scenario.l
    start = Config(*spec["start"], l=l)
    target = Config(*spec["target"], l=l)
    steps = PLAN_STEPS if spec["steps"] is None else spec["steps"]
    try:
        result = plan(
            start,
            target,
            tol=DEFAULT_TOLERANCE if spec["tol"] is None else spec["tol"],
            max_loops=DEFAULT_MAX_LOOPS if spec["max_loops"] is None else spec["max_loops"],
            steps=steps,
        )
    except ConvergenceError as exc:
        if exc.best is not None:
            exc.best = _plan_report(exc.best, steps)
        raise
    return _plan_report(result, steps)


# ----------------------------
# chain
# ----------------------------

def cmd_chain(scenario):
    spec = scenario.require("chain", "chain")
    curve = scenario.require_curve("chain")
    tracer = scenario.tracer(curve)
    lengths = spec["lengths"]
    angles = spec["angles"] or [scenario.theta0(curve)] * len(lengths)
    chain = TrailerChain(lengths, angles)
    result = chain_lift(tracer, chain, scenario.steps)

    rotations = (result.thetas[-1] - result.thetas[0]).tolist()
    summary = {
        "lengths": list(chain.lengths),
        "angles": list(chain.angles),
        "steps": scenario.steps,
        "rotations": rotations,
        "final_joints": result.joints[-1].tolist(),
    }
    lines = [
        f"rod {i + 1}: l = {l:g}, dtheta = {rotation:.12g}"
        for i, (l, rotation) in enumerate(zip(chain.lengths, rotations))
    ]
    return Report("chain", summary, lines, {"chain.csv": (chain_header(len(chain)), result.to_rows())})


COMMANDS = {
    "area": cmd_area,
    "holonomy": cmd_holonomy,
    "sweep": cmd_sweep,
    "geodesic": cmd_geodesic,
    "plan": cmd_plan,
    "chain": cmd_chain,
}
