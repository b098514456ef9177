# planimeter/lift.py
"""
The nonholonomic lift of a tracer curve.

The rod angle obeys θ̇ = (sin θ ẋ − cos θ ẏ) / l, i.e. η(ė) = 0 with
η = −sin θ dx + cos θ dy + l dθ. It is integrated with classical RK4 on the
step nodes; the tracer position is always read from the curve.

A chain of rods (trailers) uses the same integrator: rod i is driven by the
free end of rod i − 1, so a single rod is the one-trailer case and both give
identical numbers.
"""
import logging
import math

import numpy as np

from core.exceptions import NumericError, PreconditionError
from core.integrators import ensure_finite, step_nodes
from geometry.curves import CCW, Polygon
from planimeter.config import PlanimeterPath

logger = logging.getLogger(__name__)

DEFAULT_STEPS = 100_000


def check_lift_args(lengths, steps):
    if steps < 1:
        raise PreconditionError("steps must be at least 1")
    if not lengths:
        raise PreconditionError("at least one rod is needed")
    for l in lengths:
        if not (l > 0 and math.isfinite(l)):
            raise PreconditionError(f"rod length must be positive, got {l!r}")


def tracer_drive(curve, steps):
    """
    Step nodes, tracer positions at the nodes, and the tracer velocity at
    the start (right limit), middle and end (left limit) of every step.
    """
    t = step_nodes(curve.duration, steps, curve.breakpoints())
    a, b = t[:-1], t[1:]
    position = curve.position(t)
    v_start = curve.velocity(a, side="right")
    v_mid = curve.velocity(0.5 * (a + b))
    v_end = curve.velocity(b, side="left")
    ensure_finite("tracer curve", position, v_start, v_mid, v_end)
    return t, position, (v_start, v_mid, v_end)


def _chain_rates(thetas, vx, vy, lengths):
    rates = []
    for theta, l in zip(thetas, lengths):
        s, c = math.sin(theta), math.cos(theta)
        rate = (s * vx - c * vy) / l
        rates.append(rate)
        # velocity of this rod's free end drives the next rod
        vx -= l * rate * s
        vy += l * rate * c
    return rates


def integrate_chain(t, drive, theta0, lengths):
    """
    RK4 for the rod angles of a chain pulled along by the tracer.

    Scalar arithmetic per step; the velocities are precomputed by
    `tracer_drive`. Returns θ at every node, shape (len(t), n).
    """
    v_start, v_mid, v_end = (v.tolist() for v in drive)
    lengths = [float(l) for l in lengths]
    state = [float(theta) for theta in theta0]
    out = np.empty((len(t), len(state)))
    out[0] = state
    try:
        for k, h in enumerate(np.diff(t).tolist()):
            k1 = _chain_rates(state, *v_start[k], lengths)
            k2 = _chain_rates([y + 0.5 * h * d for y, d in zip(state, k1)], *v_mid[k], lengths)
            k3 = _chain_rates([y + 0.5 * h * d for y, d in zip(state, k2)], *v_mid[k], lengths)
            k4 = _chain_rates([y + h * d for y, d in zip(state, k3)], *v_end[k], lengths)
            state = [
                y + h * (d1 / 6 + d2 / 3 + d3 / 3 + d4 / 6)
                for y, d1, d2, d3, d4 in zip(state, k1, k2, k3, k4)
            ]
            out[k + 1] = state
    except (OverflowError, ValueError) as exc:
        # math.sin of an infinite angle
        raise NumericError(f"rod angles overflowed at step {k}") from exc
    ensure_finite("rod angles", out)
    return out


def lift(curve, theta0=0.0, l=1.0, steps=DEFAULT_STEPS):
    """
    Horizontal lift of `curve` starting with the rod at angle theta0.

    `steps` counts the intervals of the uniform grid; the curve's
    breakpoints are inserted on top, so a polygon gets a few extra nodes.
    """
    check_lift_args([l], steps)
    t, position, drive = tracer_drive(curve, steps)
    logger.debug("lift of %s: %d nodes, l=%g", curve.kind, len(t), l)
    theta = integrate_chain(t, drive, [theta0], [l])[:, 0]
    return PlanimeterPath(t=t, p=position, theta=theta, l=float(l), curve=curve, steps=steps)


def delta_theta(path):
    """Total rotation θ(T) − θ(0), unwrapped."""
    return float(path.theta[-1] - path.theta[0])


def horizontal_project(v, config):
    """
    Vertical coefficient of Φ(v) = (η(v)/l) ∂θ for v = (dx, dy, dθ) at
    `config`. Horizontal vectors map to 0.
    """
    dx, dy, dtheta = v
    s, c = math.sin(config.theta), math.cos(config.theta)
    return (-s * dx + c * dy + config.l * dtheta) / config.l


def lifted_fields(theta, l):
    """Horizontal lifts of ∂x and ∂y as (dx, dy, dθ) coefficients."""
    X = np.array([1.0, 0.0, math.sin(theta) / l])
    Y = np.array([0.0, 1.0, -math.cos(theta) / l])
    return X, Y


def field_bracket(theta, l):
    """
    ⟦X, Y⟧ = X(Y) − Y(X). The coefficients depend on θ only, so just the
    θ-components of X and Y differentiate.
    """
    X, Y = lifted_fields(theta, l)
    dX = np.array([0.0, 0.0, math.cos(theta) / l])
    dY = np.array([0.0, 0.0, math.sin(theta) / l])
    return X[2] * dY - Y[2] * dX


def curvature_vertical(u, w, l):
    """Rotation per unit enclosed area: vol(πu, πw) / l² for u, w tangent to C."""
    return (u[0] * w[1] - u[1] * w[0]) / (l * l)


def constraint_residual(path):
    """
    max |η(ė)| over the steps, using midpoint differences of the samples
    (second order in the step).
    """
    dt = np.diff(path.t)
    dp = np.diff(path.p, axis=0)
    dtheta = np.diff(path.theta)
    mid = 0.5 * (path.theta[1:] + path.theta[:-1])
    eta = (-np.sin(mid) * dp[:, 0] + np.cos(mid) * dp[:, 1] + path.l * dtheta) / dt
    return float(np.max(np.abs(eta))) if len(eta) else 0.0


def square_loop(eps, orientation=CCW):
    """Axis-aligned square of side eps with a corner at the origin."""
    corners = [(0.0, 0.0), (eps, 0.0), (eps, eps), (0.0, eps)]
    if orientation != CCW:
        corners = corners[:1] + corners[:0:-1]
    return Polygon(corners)


def small_square_holonomy(eps, theta0=0.0, l=1.0, steps=4000, orientation=CCW):
    """Rotation of the rod after the tracer runs once around a small square."""
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    return delta_theta(lift(square_loop(eps, orientation), theta0, l, steps))
