# planimeter/areas.py
"""
Area readings of a lift and the moving-segment identities.

For a closed tracer curve p with rod angle change Δθ:

    area(p) = l²Δθ + A_q        (A_q: chisel path closed by an arc of radius l)
    A_ℓ     = A_p − A_q         (A_ℓ: signed area swept by the rod)

Path integrals are composite Simpson on the lift's own nodes, one smooth
stretch at a time.
"""
import math

import numpy as np
from scipy.integrate import simpson

from core.exceptions import PreconditionError


def area_estimate_angle(path):
    """l²Δθ."""
    return path.l ** 2 * float(path.theta[-1] - path.theta[0])


def area_estimate_chord(path):
    """l·‖q(0) − q(T)‖: the chord reading, always non-negative."""
    return path.l * float(np.linalg.norm(path.q[-1] - path.q[0]))


def _piecewise_simpson(path, integrand):
    """
    ∫ integrand dt over the path. `integrand(slice, side_velocity)` gets the
    tracer velocity as one-sided limits inside each smooth stretch.
    """
    total = 0.0
    for start, stop in path.pieces():
        t = path.t[start:stop]
        if len(t) < 2:
            continue
        v = path.curve.velocity(t, side="right")
        v[-1] = path.curve.velocity(t[-1], side="left")
        values = integrand(slice(start, stop), v)
        if len(t) == 2:
            total += 0.5 * float(values[0] + values[1]) * float(t[1] - t[0])
        else:
            total += float(simpson(values, x=t))
    return total


def segment_swept_area(t, p, pdot, q, qdot):
    """
    Signed area swept by the segment from p(t) to q(t):

        A_ℓ = ∫ ½ det(ṗ + q̇, q − p) dt

    The segment at parameter s along it is r = p + s(q − p); the ruled
    surface Jacobian det(∂r/∂t, ∂r/∂s) integrates over s ∈ [0, 1] to this.
    """
    d = q - p
    w = pdot + qdot
    return float(simpson(0.5 * (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0]), x=t))


def _rod_velocity(path, index, v):
    theta = path.theta[index]
    s, c = np.sin(theta), np.cos(theta)
    rate = (s * v[:, 0] - c * v[:, 1]) / path.l
    return np.stack([-s, c], axis=-1) * (path.l * rate)[:, None]


def swept_area(path):
    """
    Signed area swept by the rod along the lift. When the tracer curve is
    closed the rod is also turned about p(T) back to its initial angle, so
    the swept region is closed and A_ℓ = A_p − A_q.
    """
    def integrand(index, v):
        d = path.q[index] - path.p[index]
        w = 2.0 * v + _rod_velocity(path, index, v)
        return 0.5 * (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0])

    area = _piecewise_simpson(path, integrand)
    if path.curve.closed:
        # rigid turn about the tracer: ½ det(q̇, q − p) = −½ l² dθ, θ(T) → θ(0)
        area += 0.5 * path.l ** 2 * float(path.theta[-1] - path.theta[0])
    return area


def _arc_green_integral(center, radius, alpha, beta):
    """½∮(x dy − y dx) along the arc of angle α → β about `center`."""
    cx, cy = center
    return 0.5 * (
        radius * radius * (beta - alpha)
        + radius * (cx * (math.sin(beta) - math.sin(alpha)) - cy * (math.cos(beta) - math.cos(alpha)))
    )


def chisel_closure_area(path):
    """
    Signed area bounded by the chisel path followed by the arc of radius l
    about p(0) from q(T) back to q(0).
    """
    if not path.curve.closed:
        raise PreconditionError("chisel closure needs a closed tracer curve")

    def integrand(index, v):
        q = path.q[index]
        qdot = v + _rod_velocity(path, index, v)
        return 0.5 * (q[:, 0] * qdot[:, 1] - q[:, 1] * qdot[:, 0])

    area = _piecewise_simpson(path, integrand)
    return area + _arc_green_integral(path.p[0], path.l, float(path.theta[-1]), float(path.theta[0]))
