# planimeter/config.py
"""
Planimeter configurations (x, y, θ) with rod length l, and the sampled
horizontal lifts built from them.
"""
from dataclasses import dataclass, field
import math

import numpy as np

PATH_HEADER = "t,px,py,qx,qy,theta"


def wrap_angle(theta):
    """Representative of θ in (-π, π]; display only, state stays unwrapped."""
    wrapped = math.remainder(theta, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class Config:
    """
    Tracer at (x, y), rod at angle θ (unwrapped), chisel at distance l.
    """
    x: float
    y: float
    theta: float
    l: float = 1.0

    def __post_init__(self):
        if not self.l > 0:
            raise ValueError("rod length l must be positive")

    @property
    def p(self):
        return np.array([self.x, self.y])

    @property
    def q(self):
        return np.array([self.x + self.l * math.cos(self.theta), self.y + self.l * math.sin(self.theta)])

    @property
    def wrapped_theta(self):
        return wrap_angle(self.theta)

    def at(self, point):
        """Same rod, tracer moved to `point`."""
        return Config(float(point[0]), float(point[1]), self.theta, self.l)

    def with_theta(self, theta):
        return Config(self.x, self.y, float(theta), self.l)


@dataclass(frozen=True, eq=False)
class PlanimeterPath:
    """
    Horizontal lift sampled on the step nodes `t`.

    `p` is read from the tracer curve at every node, never integrated; only
    θ comes from the integrator. Arrays are read-only.
    """
    t: np.ndarray
    p: np.ndarray
    theta: np.ndarray
    l: float
    curve: object
    steps: int
    q: np.ndarray = field(init=False)

    def __post_init__(self):
        rod = self.l * np.stack([np.cos(self.theta), np.sin(self.theta)], axis=-1)
        object.__setattr__(self, "q", self.p + rod)
        for values in (self.t, self.p, self.theta, self.q):
            values.setflags(write=False)

    def __len__(self):
        return len(self.t)

    @property
    def x(self):
        return self.p[:, 0]

    @property
    def y(self):
        return self.p[:, 1]

    def velocity(self, side="right"):
        """Tracer velocity at every node (one-sided at corners)."""
        return self.curve.velocity(self.t, side=side)

    def thetadot(self, side="right"):
        """θ̇ from the lift equation evaluated on the stored samples."""
        v = self.velocity(side)
        return (np.sin(self.theta) * v[:, 0] - np.cos(self.theta) * v[:, 1]) / self.l

    def config(self, index):
        return Config(float(self.p[index, 0]), float(self.p[index, 1]), float(self.theta[index]), self.l)

    @property
    def initial(self):
        return self.config(0)

    @property
    def final(self):
        return self.config(-1)

    def to_rows(self):
        """Columns t, px, py, qx, qy, theta."""
        return np.column_stack([self.t, self.p, self.q, self.theta])

    def pieces(self):
        """Index ranges (start, stop) of the smooth stretches between corners."""
        corners = np.flatnonzero(np.isin(self.t, self.curve.breakpoints()))
        edges = np.unique(np.concatenate([[0], corners, [len(self.t) - 1]]))
        return list(zip(edges[:-1], edges[1:] + 1))
