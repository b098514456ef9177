# geometry/moments.py
"""
Area moments of regions bounded by closed curves, computed from boundary
line integrals (Green's theorem), plus the centroid and the tracer loop used
to operate a planimeter from an interior start point.
"""
from dataclasses import dataclass
import logging

import numpy as np

from core.exceptions import DegenerateRegionError, PreconditionError
from geometry.curves import DEFAULT_SAMPLES, Composite, Reversed, Segment

logger = logging.getLogger(__name__)

DEGENERATE_AREA = 1e-12


@dataclass(frozen=True)
class Moments:
    """
    A: signed area, Mx = ∫x dA, My = ∫y dA, M2 = ∫(x²+y²) dA.
    """
    A: float
    Mx: float
    My: float
    M2: float

    def translated(self, dx, dy):
        """Moments of the same region shifted by (dx, dy)."""
        return Moments(
            A=self.A,
            Mx=self.Mx + dx * self.A,
            My=self.My + dy * self.A,
            M2=self.M2 + 2.0 * (dx * self.Mx + dy * self.My) + (dx * dx + dy * dy) * self.A,
        )

    def as_dict(self):
        return {"A": self.A, "Mx": self.Mx, "My": self.My, "M2": self.M2}


def moments(curve, samples=DEFAULT_SAMPLES):
    """All four moments of the region bounded by a closed curve, in one pass."""
    if not curve.closed:
        raise PreconditionError(f"moments need a closed curve, got an open {curve.kind}")
    A, Mx, My, M2 = (float(v) for v in curve.line_integrals(samples))
    logger.debug("moments of %s: A=%.17g", curve.kind, A)
    return Moments(A, Mx, My, M2)


def centroid(curve, samples=DEFAULT_SAMPLES):
    m = moments(curve, samples)
    if abs(m.A) < DEGENERATE_AREA * curve.diameter ** 2:
        raise DegenerateRegionError(f"region of {curve.kind} has (numerically) zero area")
    return np.array([m.Mx / m.A, m.My / m.A])


def prytz_loop(region_boundary, start):
    """
    Straight out from `start` to the boundary's first point, once around the
    boundary, then back along the same segment. The retraced segment adds no
    signed area, so the loop bounds the same region.
    """
    b0 = region_boundary.start
    spoke = Segment(start, b0)
    return Composite([spoke, region_boundary, Reversed(spoke)])
