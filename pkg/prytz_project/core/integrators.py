"""
Fixed-step integrators and checks shared by the simulator apps.

All runs use a uniform grid: outputs are reproducible bit-for-bit and the
quadratures downstream reuse the same samples.
"""
import logging

import numpy as np

from core.exceptions import NumericError

logger = logging.getLogger(__name__)


def step_grid(duration, steps):
    """Uniform grid of `steps` intervals on [0, duration]."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    return np.linspace(0.0, duration, steps + 1)


def step_nodes(duration, steps, breakpoints=()):
    """
    The uniform grid of `steps` intervals with interior breakpoints of the
    driving curve inserted, so no step straddles a corner. Breakpoints that
    already sit on the grid up to round-off replace that grid node, so
    one-sided velocities at the node select the right piece.
    """
    grid = step_grid(duration, steps)
    cuts = np.asarray(breakpoints, dtype=float)
    cuts = cuts[(cuts > 0.0) & (cuts < duration)]
    if cuts.size == 0:
        return grid
    h = duration / steps
    nearest = np.clip(np.rint(cuts / h).astype(int), 0, steps)
    snap = (np.abs(cuts - grid[nearest]) <= 1e-9 * h) & (nearest > 0) & (nearest < steps)
    grid[nearest[snap]] = cuts[snap]
    return np.union1d(grid, cuts[~snap])


def ensure_finite(label, *arrays):
    for values in arrays:
        if not np.all(np.isfinite(values)):
            raise NumericError(f"non-finite values in {label}")


def rk4_step(f, t0, h, y0):
    """classic 4th order method"""
    k1 = f(t0, y0)
    k2 = f(t0 + 0.5*h, y0 + 0.5*h*k1)
    k3 = f(t0 + 0.5*h, y0 + 0.5*h*k2)
    k4 = f(t0 + h, y0 + h*k3)
    return y0 + h * (k1/6 + k2/3 + k3/3 + k4/6)


def rk4(f, y0, duration, steps, label="rk4"):
    """
    Integrate y' = f(t, y) on [0, duration] with `steps` RK4 steps.

    Returns the time grid and an array of shape (steps + 1, len(y0)).
    """
    t = step_grid(duration, steps)
    h = duration / steps
    y = np.empty((steps + 1, len(y0)))
    y[0] = y0
    logger.debug("%s: %d steps of %.3g", label, steps, h)
    for k in range(steps):
        y[k + 1] = rk4_step(f, t[k], h, y[k])
    ensure_finite(label, y)
    return t, y
