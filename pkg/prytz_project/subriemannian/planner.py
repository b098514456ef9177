# subriemannian/planner.py
"""
Constructive motion planning between planimeter configurations.

The tracer first runs straight to the target position. The rod angle is then
corrected by full circular loops through the target point: a loop of radius
r turns the rod by roughly πr²/l², and the radius is solved for by a
bracketing root search on the lifted rotation. Loops turn at most
MAX_LOOP_ROTATION each, so the rotation stays monotone in r on the bracket.
"""
from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy.optimize import brentq

from core.exceptions import ConvergenceError, PreconditionError
from geometry.curves import CCW, CW, Circle, Segment
from planimeter.config import Config, wrap_angle
from planimeter.lift import lift

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_LOOPS = 20
DEFAULT_STEPS = 2000
MAX_LOOP_ROTATION = 0.5
BRACKET_GROWTH = 1.5
MAX_BRACKET_WIDENINGS = 20


@dataclass
class PlanResult:
    start: Config
    target: Config
    final: Config
    curves: list = field(default_factory=list)
    residuals: list = field(default_factory=list)

    @property
    def loops(self):
        return sum(1 for curve in self.curves if curve.kind == "circle")

    @property
    def residual(self):
        """Remaining angle error, wrapped to (−π, π]."""
        return wrap_angle(self.target.theta - self.final.theta)

    def as_dict(self):
        return {
            "curves": [curve.to_spec() for curve in self.curves],
            "residuals": list(self.residuals),
            "start": {"x": self.start.x, "y": self.start.y, "theta": self.start.theta},
            "final": {"x": self.final.x, "y": self.final.y, "theta": self.final.theta},
            "target": {"x": self.target.x, "y": self.target.y, "theta": self.target.theta},
            "loops": self.loops,
        }


def loop_through(point, radius, orientation, phase=0.0):
    """Full circle of the given radius starting and ending at `point`."""
    center = np.asarray(point, dtype=float) - radius * np.array([math.cos(phase), math.sin(phase)])
    return Circle(center=center, radius=radius, orientation=orientation, phase=phase)


def _loop_rotation(point, theta, l, orientation, steps):
    def rotation(radius):
        path = lift(loop_through(point, radius, orientation), theta, l, steps)
        return float(path.theta[-1] - path.theta[0])
    return rotation


def _solve_radius(rotation, aim, l):
    """Radius r with rotation(r) = aim, bracketed from the l²Δθ ≈ πr² guess."""
    def residual(radius):
        return rotation(radius) - aim

    hi = l * math.sqrt(abs(aim) / math.pi)
    for _ in range(MAX_BRACKET_WIDENINGS):
        if math.copysign(1.0, residual(hi)) == math.copysign(1.0, aim):
            return brentq(residual, 0.0, hi, xtol=1e-14 * l, rtol=1e-15, maxiter=200)
        hi *= BRACKET_GROWTH
    return None


def plan(start, target, tol=DEFAULT_TOLERANCE, max_loops=DEFAULT_MAX_LOOPS, steps=DEFAULT_STEPS):
    """
    Curves taking the planimeter from `start` to `target` (same rod length).

    Raises ConvergenceError carrying the best PlanResult when the angle is
    still off by more than tol after max_loops loops.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    if not math.isclose(start.l, target.l):
        raise PreconditionError("start and target must have the same rod length")
    l = start.l
    result = PlanResult(start=start, target=target, final=start)

    if np.linalg.norm(target.p - start.p) > 0.0:
        segment = Segment(start.p, target.p)
        path = lift(segment, start.theta, l, steps)
        result.curves.append(segment)
        result.final = path.final
        result.residuals.append(result.residual)
        logger.info("plan: segment to (%.6g, %.6g), angle residual %.3g", target.x, target.y, result.residual)

    while abs(result.residual) > tol:
        if result.loops >= max_loops:
            raise ConvergenceError(
                f"angle residual {result.residual:.3g} after {max_loops} loops", best=result
            )
        deficit = result.residual
        aim = math.copysign(min(abs(deficit), MAX_LOOP_ROTATION), deficit)
        orientation = CCW if aim > 0 else CW
        theta = result.final.theta
        radius = _solve_radius(_loop_rotation(target.p, theta, l, orientation, steps), aim, l)
        if radius is None:
            raise ConvergenceError(f"no loop radius turns the rod by {aim:.3g}", best=result)
        loop = loop_through(target.p, radius, orientation)
        path = lift(loop, theta, l, steps)
        result.curves.append(loop)
        result.final = path.final
        result.residuals.append(result.residual)
        logger.info("plan: loop %d radius %.6g, angle residual %.3g", result.loops, radius, result.residual)
    return result


def replay(result, steps=DEFAULT_STEPS):
    """Re-run the planned curves through the lift; returns the final Config."""
    config = result.start
    for curve in result.curves:
        config = lift(curve, config.theta, config.l, steps).final
    return config
