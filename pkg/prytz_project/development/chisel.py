# development/chisel.py
"""
The chisel path as a development of the tracer path.

The chisel moves with the tracer velocity projected onto the rod direction,

    q̇ = (cos²θ ẋ + sin θ cos θ ẏ,  sin θ cos θ ẋ + sin²θ ẏ),

with θ the lifted rod angle. `develop` integrates q and θ together and so
rebuilds q = p + l(cos θ, sin θ) without reading it off the rod.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np

from core.exceptions import NumericError
from core.integrators import ensure_finite
from development.se2 import SE2Element, SE2Vector
from planimeter.lift import DEFAULT_STEPS, check_lift_args, tracer_drive

logger = logging.getLogger(__name__)


def pseudoconnection(v, config):
    """
    Affine se(2)-valued form at `config` applied to v = (dx, dy, dθ).

    The translational parts carry a factor l relative to chisel_velocity;
    the rotational part is the constraint form η, so it vanishes on
    horizontal vectors.
    """
    dx, dy, dtheta = v
    l = config.l
    s, c = math.sin(config.theta), math.cos(config.theta)
    along = c * dx + s * dy
    return SE2Vector(
        l * c * along - l * s * dtheta,
        l * s * along + l * c * dtheta,
        -s * dx + c * dy + l * dtheta,
    )


def chisel_velocity(theta, v):
    """Tracer velocity v projected onto the rod direction at angle θ."""
    s, c = np.sin(theta), np.cos(theta)
    vx, vy = v[..., 0], v[..., 1]
    along = c * vx + s * vy
    return np.stack([c * along, s * along], axis=-1)


@dataclass(frozen=True, eq=False)
class DevelopmentPath:
    t: np.ndarray
    chisel: np.ndarray
    theta: np.ndarray
    l: float

    @property
    def rotation(self):
        """Frame rotation θ(t) − θ0."""
        return self.theta - self.theta[0]

    def frames(self):
        """Rod frame at every sample: x-axis along the rod, origin at the chisel."""
        return [SE2Element(float(a), float(x), float(y)) for a, (x, y) in zip(self.theta, self.chisel)]


def _rates(theta, vx, vy, l):
    s, c = math.sin(theta), math.cos(theta)
    along = c * vx + s * vy
    return (s * vx - c * vy) / l, c * along, s * along


def develop(curve, theta0, l, steps=DEFAULT_STEPS):
    """RK4 on (θ, qx, qy) driven by the tracer velocity."""
    check_lift_args([l], steps)
    t, position, drive = tracer_drive(curve, steps)
    v_start, v_mid, v_end = (v.tolist() for v in drive)
    state = (
        float(theta0),
        float(position[0, 0] + l * math.cos(theta0)),
        float(position[0, 1] + l * math.sin(theta0)),
    )
    out = np.empty((len(t), 3))
    out[0] = state
    try:
        for k, h in enumerate(np.diff(t).tolist()):
            k1 = _rates(state[0], *v_start[k], l)
            k2 = _rates(state[0] + 0.5 * h * k1[0], *v_mid[k], l)
            k3 = _rates(state[0] + 0.5 * h * k2[0], *v_mid[k], l)
            k4 = _rates(state[0] + h * k3[0], *v_end[k], l)
            state = tuple(
                y + h * (d1 / 6 + d2 / 3 + d3 / 3 + d4 / 6)
                for y, d1, d2, d3, d4 in zip(state, k1, k2, k3, k4)
            )
            out[k + 1] = state
    except (OverflowError, ValueError) as exc:
        raise NumericError(f"development overflowed at step {k}") from exc
    ensure_finite("development", out)
    logger.debug("develop %s: %d nodes", curve.kind, len(t))
    return DevelopmentPath(t=t, chisel=out[:, 1:], theta=out[:, 0], l=float(l))
