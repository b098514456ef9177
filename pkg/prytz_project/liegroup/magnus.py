# liegroup/magnus.py
"""
Closed-form Magnus terms of the holonomy of a closed loop, from the area
moments of the region it bounds.

With moments taken about the loop's base point and l the rod length,

    U1 = −(1/2l)(Δx e1 + Δy e2)       (zero for closed loops)
    U2 = (A / 2l²) e3
    U3 = (1/2l³)(My e1 − Mx e2)
    U4 = (M2 / 4l⁴) e3

and Γ ≈ exp(U1 + U2 + U3 + U4) with an O(l⁻⁵) remainder. For a region
centred on the base point U3 vanishes and Δθ ≈ A/l² + M2/(2l⁴).
"""
from dataclasses import dataclass
import math

import numpy as np

from geometry.moments import moments
from liegroup.su11 import SU11Vector, act, exp


@dataclass(frozen=True)
class MagnusTerms:
    U1: SU11Vector
    U2: SU11Vector
    U3: SU11Vector
    U4: SU11Vector

    @property
    def total(self):
        return self.U1 + self.U2 + self.U3 + self.U4

    @property
    def element(self):
        return exp(self.total)

    def predicted_rotation(self, theta0):
        """Δθ(θ0) of the truncated holonomy, elementwise on arrays."""
        return act(self.element, theta0) - np.asarray(theta0, dtype=float)

    def as_dict(self):
        return {name: getattr(self, name).as_dict() for name in ("U1", "U2", "U3", "U4")}


def magnus_terms(m, l, displacement=(0.0, 0.0)):
    """
    Terms from moments `m` about the base point; `displacement` is the
    tracer's net displacement (zero for a closed loop).
    """
    dx, dy = displacement
    return MagnusTerms(
        U1=SU11Vector(-dx / (2.0 * l), -dy / (2.0 * l), 0.0),
        U2=SU11Vector(0.0, 0.0, m.A / (2.0 * l ** 2)),
        U3=SU11Vector(m.My / (2.0 * l ** 3), -m.Mx / (2.0 * l ** 3), 0.0),
        U4=SU11Vector(0.0, 0.0, m.M2 / (4.0 * l ** 4)),
    )


def loop_magnus_terms(curve, l, samples=None):
    """magnus_terms for a closed tracer loop, based at the loop's start."""
    m = moments(curve) if samples is None else moments(curve, samples)
    x0, y0 = curve.start
    x1, y1 = curve.end
    return magnus_terms(m.translated(-x0, -y0), l, (x1 - x0, y1 - y0))


def predicted_rotation(m, l, theta0=0.0):
    """Δθ predicted from moments about the base point."""
    return magnus_terms(m, l).predicted_rotation(theta0)


def circle_holonomy(radius, l):
    """
    Exact holonomy of a circle of the given radius traced once CCW from
    its start point: exp(−π(e3 + (r/l) e2)) up to sign. Elliptic for r < l
    with rotation number 2π(1 − √(1 − r²/l²)).
    """
    return exp(SU11Vector(0.0, -math.pi * radius / l, -math.pi))


def circle_rotation_number(radius, l):
    """Average Δθ per loop of a circle of radius r < l."""
    return 2.0 * math.pi * (1.0 - math.sqrt(1.0 - (radius / l) ** 2))
