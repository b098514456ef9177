# development/se2.py
"""
SE(2) in homogeneous coordinates (1, x, y) and its algebra se(2).

    e1 = E21        e2 = E31        e3 = [[0, 0, 0], [0, 0, -1], [0, 1, 0]]

e1, e2 translate along x and y; e3 rotates. [e3, e1] = e2, [e3, e2] = −e1,
[e1, e2] = 0.
"""
from dataclasses import dataclass
import math

import numpy as np

BASIS = (
    np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
    np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]),
    np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]),
)


@dataclass(frozen=True)
class SE2Vector:
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    @classmethod
    def from_matrix(cls, m):
        return cls(float(m[1, 0]), float(m[2, 0]), float(m[2, 1]))

    def matrix(self):
        return self.c1 * BASIS[0] + self.c2 * BASIS[1] + self.c3 * BASIS[2]

    def __add__(self, other):
        return SE2Vector(self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3)

    def __mul__(self, k):
        return SE2Vector(k * self.c1, k * self.c2, k * self.c3)

    __rmul__ = __mul__

    def bracket(self, other):
        x1, x2, x3 = self.c1, self.c2, self.c3
        y1, y2, y3 = other.c1, other.c2, other.c3
        return SE2Vector(x2 * y3 - x3 * y2, x3 * y1 - x1 * y3, 0.0)

    @property
    def coefficients(self):
        return np.array([self.c1, self.c2, self.c3])

    def as_dict(self):
        return {"e1": self.c1, "e2": self.c2, "e3": self.c3}


@dataclass(frozen=True)
class SE2Element:
    """Rotation by phi followed by translation by (tx, ty)."""
    phi: float = 0.0
    tx: float = 0.0
    ty: float = 0.0

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_matrix(cls, m):
        return cls(math.atan2(m[2, 1], m[1, 1]), float(m[1, 0]), float(m[2, 0]))

    @property
    def translation(self):
        return np.array([self.tx, self.ty])

    def rotation(self):
        c, s = math.cos(self.phi), math.sin(self.phi)
        return np.array([[c, -s], [s, c]])

    def matrix(self):
        m = np.eye(3)
        m[1:, 0] = self.translation
        m[1:, 1:] = self.rotation()
        return m

    def compose(self, other):
        """self ∘ other: apply other first."""
        tx, ty = self.act(other.translation)
        return SE2Element(self.phi + other.phi, float(tx), float(ty))

    __mul__ = compose

    def inverse(self):
        back = self.rotation().T @ self.translation
        return SE2Element(-self.phi, float(-back[0]), float(-back[1]))

    def act(self, point):
        """Image of a point (or an (N, 2) array of points)."""
        return np.asarray(point, dtype=float) @ self.rotation().T + self.translation

    def close_to(self, other, tol=1e-12):
        return (
            abs(math.remainder(self.phi - other.phi, 2.0 * math.pi)) <= tol
            and abs(self.tx - other.tx) <= tol
            and abs(self.ty - other.ty) <= tol
        )
