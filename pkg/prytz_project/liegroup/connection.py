# liegroup/connection.py
"""
The principal connection of the planimeter bundle and its holonomy.

Over a tracer curve γ the frame Γ(t) ∈ PSU(1,1) solves the equation of Lie
type Γ̇ = −ξ(t) Γ with ξ(t) = ϖ(γ̇(t)), ϖ = (1/2l)(e1 dx + e2 dy). The rod
angle of the lift is then θ(t) = act(Γ(t), θ0) for every start angle at once.
"""
import logging
import math

import numpy as np

from core.exceptions import PreconditionError
from core.integrators import ensure_finite, step_nodes
from liegroup.su11 import PSU11Element, SU11Vector, exp_coefficients

logger = logging.getLogger(__name__)

DEFAULT_STEPS = 100_000

GAUSS_OFFSET = math.sqrt(3.0) / 6.0


def connection_form(v, l):
    """ϖ(v) = (1/2l)(vx e1 + vy e2)."""
    return SU11Vector(v[0] / (2.0 * l), v[1] / (2.0 * l), 0.0)


def principal_form(v, xi, g, l):
    """ω(v, X_ξ) = ξ + Ad_{g⁻¹} ϖ(v) at the point (p, g) of the bundle."""
    return xi + g.adjoint_inverse(connection_form(v, l))


def curvature_base(u, v, l):
    """Ω̄(u, v) = −(det[u v] / 2l²) e3."""
    return SU11Vector(0.0, 0.0, -(u[0] * v[1] - u[1] * v[0]) / (2.0 * l * l))


def curvature_principal(u, v, g, l):
    """Ω(u, v) at (p, g): Ad_{g⁻¹} Ω̄(u, v)."""
    return g.adjoint_inverse(curvature_base(u, v, l))


def holonomy(curve, l, steps=DEFAULT_STEPS):
    """
    Γ(T) for Γ(0) = I, by the two-point Gauss–Magnus method (order 4):

        Ω = −h/2 (ξ1 + ξ2) − (√3 h²/12) [ξ1, ξ2],   Γ ← exp(Ω) Γ

    with ξ1, ξ2 at the Gauss nodes of each step. Steps are cut at the
    curve's corners; Γ is renormalized after every step.
    """
    if steps < 1:
        raise PreconditionError("steps must be at least 1")
    if not l > 0:
        raise PreconditionError("rod length must be positive")
    t = step_nodes(curve.duration, steps, curve.breakpoints())
    h = np.diff(t)
    mid = t[:-1] + 0.5 * h
    v1 = curve.velocity(mid - GAUSS_OFFSET * h)
    v2 = curve.velocity(mid + GAUSS_OFFSET * h)
    ensure_finite("tracer velocity", v1, v2)
    logger.debug("holonomy of %s: %d steps, l=%g", curve.kind, len(h), l)

    # ξ = (vx e1 + vy e2)/2l; [ξ1, ξ2] only has an e3 part
    k = 1.0 / (2.0 * l)
    c1 = -0.5 * h * k * (v1[:, 0] + v2[:, 0])
    c2 = -0.5 * h * k * (v1[:, 1] + v2[:, 1])
    c3 = (math.sqrt(3.0) / 6.0) * h * h * k * k * (v1[:, 0] * v2[:, 1] - v1[:, 1] * v2[:, 0])

    a, b = 1 + 0j, 0j
    for x1, x2, x3 in zip(c1.tolist(), c2.tolist(), c3.tolist()):
        ea, eb = exp_coefficients(x1, x2, x3)
        a, b = ea * a + eb * b.conjugate(), ea * b + eb * a.conjugate()
        scale = math.sqrt(abs(a) ** 2 - abs(b) ** 2)
        a, b = a / scale, b / scale
    ensure_finite("holonomy", np.array([a, b]))
    return PSU11Element(a, b)
