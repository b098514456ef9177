# subriemannian/hamiltonian.py
"""
Normal geodesics of the planimeter's sub-Riemannian structure.

The horizontal frame X = ∂x + (sin θ / l) ∂θ, Y = ∂y − (cos θ / l) ∂θ is
declared orthonormal. With P_X = px + (sin θ / l) pθ and P_Y = py − (cos θ / l) pθ
the Hamiltonian is H = ½(P_X² + P_Y²), and its flow is

    ẋ = P_X      ẏ = P_Y      θ̇ = (sin θ P_X − cos θ P_Y) / l
    ṗx = 0       ṗy = 0       ṗθ = −(cos θ px + sin θ py) pθ / l

Integrated with plain RK4; H is monitored, not enforced.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np

from core.exceptions import PreconditionError
from core.integrators import rk4
from planimeter.lift import field_bracket, lifted_fields

logger = logging.getLogger(__name__)

DEFAULT_STEPS = 100_000

TRAJECTORY_HEADER = "t,x,y,theta,px,py,ptheta,H"


@dataclass(frozen=True)
class CotangentState:
    x: float
    y: float
    theta: float
    px: float
    py: float
    ptheta: float
    l: float = 1.0

    def __post_init__(self):
        if not self.l > 0:
            raise PreconditionError("rod length must be positive")

    @classmethod
    def from_array(cls, values, l):
        return cls(*(float(v) for v in values), l=l)

    def as_array(self):
        return np.array([self.x, self.y, self.theta, self.px, self.py, self.ptheta])

    @property
    def frame_momenta(self):
        """(P_X, P_Y): the momenta paired with the horizontal frame."""
        s, c = math.sin(self.theta), math.cos(self.theta)
        return self.px + s * self.ptheta / self.l, self.py - c * self.ptheta / self.l


def hamiltonian(s):
    """H = ½(px² + py² + pθ²/l²) + (1/l)(sin θ px − cos θ py) pθ."""
    return (
        0.5 * (s.px ** 2 + s.py ** 2 + s.ptheta ** 2 / s.l ** 2)
        + (math.sin(s.theta) * s.px - math.cos(s.theta) * s.py) * s.ptheta / s.l
    )


def hamiltonian_frame_form(s):
    """The same energy as ½(P_X² + P_Y²)."""
    PX, PY = s.frame_momenta
    return 0.5 * (PX * PX + PY * PY)


def hamiltonian_vector_field(l):
    def field(t, y):
        _, _, theta, px, py, ptheta = y
        s, c = math.sin(theta), math.cos(theta)
        PX = px + s * ptheta / l
        PY = py - c * ptheta / l
        return np.array([
            PX,
            PY,
            (s * PX - c * PY) / l,
            0.0,
            0.0,
            -(c * px + s * py) * ptheta / l,
        ])
    return field


@dataclass(frozen=True, eq=False)
class GeodesicTrajectory:
    t: np.ndarray
    states: np.ndarray
    l: float

    def __len__(self):
        return len(self.t)

    @property
    def p(self):
        return self.states[:, 0:2]

    @property
    def theta(self):
        return self.states[:, 2]

    @property
    def momenta(self):
        return self.states[:, 3:6]

    @property
    def energy(self):
        """H at every sample."""
        theta, px, py, ptheta = self.theta, self.states[:, 3], self.states[:, 4], self.states[:, 5]
        return (
            0.5 * (px ** 2 + py ** 2 + ptheta ** 2 / self.l ** 2)
            + (np.sin(theta) * px - np.cos(theta) * py) * ptheta / self.l
        )

    def state(self, index):
        return CotangentState.from_array(self.states[index], self.l)

    def chisel(self):
        """q(t) = p(t) + l (cos θ, sin θ)."""
        return self.p + self.l * np.stack([np.cos(self.theta), np.sin(self.theta)], axis=-1)

    def to_rows(self):
        """Columns t, x, y, theta, px, py, ptheta, H."""
        return np.column_stack([self.t, self.states, self.energy])


def geodesic(s0, duration, steps=DEFAULT_STEPS):
    """Integrate the Hamiltonian flow from s0 over [0, duration]."""
    if steps < 1:
        raise PreconditionError("steps must be at least 1")
    t, states = rk4(hamiltonian_vector_field(s0.l), s0.as_array(), duration, steps, label="geodesic")
    trajectory = GeodesicTrajectory(t=t, states=states, l=s0.l)
    logger.debug("geodesic: H drift %.3g", abs(trajectory.energy[-1] - trajectory.energy[0]))
    return trajectory


def reduced_theta_accel(theta, px, py, l):
    """
    θ̈ along a normal geodesic, which depends on θ alone once px, py are fixed:

        θ̈ = ((px² − py²) sin 2θ − 2 px py cos 2θ) / 2l²
    """
    return ((px * px - py * py) * np.sin(2.0 * theta) - 2.0 * px * py * np.cos(2.0 * theta)) / (2.0 * l * l)


def integrate_reduced(theta0, omega0, px, py, l, duration, steps=DEFAULT_STEPS):
    """θ(t) from the reduced second-order equation, RK4 on (θ, θ̇)."""
    def field(t, y):
        return np.array([y[1], reduced_theta_accel(y[0], px, py, l)])

    t, y = rk4(field, np.array([theta0, omega0], dtype=float), duration, steps, label="reduced")
    return t, y[:, 0]


def initial_theta_rate(s):
    """θ̇(0) of the geodesic from s, to seed integrate_reduced."""
    PX, PY = s.frame_momenta
    return (math.sin(s.theta) * PX - math.cos(s.theta) * PY) / s.l


def horizontal_frame(theta, l):
    """X, Y and ⟦X, Y⟧ as rows of (dx, dy, dθ) coefficients."""
    X, Y = lifted_fields(theta, l)
    return np.stack([X, Y, field_bracket(theta, l)])


def bracket_generating(theta, l):
    """True when X, Y, ⟦X, Y⟧ span the tangent space at angle θ."""
    return int(np.linalg.matrix_rank(horizontal_frame(theta, l))) == 3
