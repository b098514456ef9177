# geometry/curves.py
"""
Piecewise-smooth parametric plane curves with exact derivatives.

Every curve is defined on [0, T]; T is a dimensionless parameter range, not a
time. Positions and velocities are vectorized over numpy arrays of parameters
and are exact for every primitive: nothing is differentiated numerically.
Curves are immutable once built.
"""
from functools import cached_property
import math

import numpy as np
from scipy.integrate import simpson

from core.exceptions import DomainError, GeometryError

CCW = 1
CW = -1

# Boundary quadrature nodes per primitive
DEFAULT_SAMPLES = 4096

CLOSED_TOLERANCE = 1e-12
JUNCTION_TOLERANCE = 1e-10


def _as_point(value, name):
    try:
        x, y = (float(v) for v in value)
    except (TypeError, ValueError):
        raise GeometryError(f"{name} must be a pair of numbers")
    return np.array([x, y])


def _flip(side):
    return "left" if side == "right" else "right"


class ParamCurve:
    """
    Base class of all curves.

    Subclasses implement `position`, `velocity`, `length`, `bounds` and
    `to_spec`; leaf primitives inherit the boundary line integrals below.
    """
    kind = None

    def __init__(self, duration=1.0):
        duration = float(duration)
        if not duration > 0:
            raise GeometryError("duration must be positive")
        self._duration = duration

    @property
    def duration(self):
        return self._duration

    # -----------------------
    # Evaluation
    # -----------------------
    def position(self, t):
        raise NotImplementedError

    def velocity(self, t, side="right"):
        """
        Exact derivative dp/dt. At a junction between pieces `side` selects
        the one-sided limit: "right" uses the piece starting there.
        """
        raise NotImplementedError

    def evaluate(self, t):
        """Checked evaluation: returns (position, velocity) for t in [0, T]."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0) or np.any(t_arr > self.duration) or not np.all(np.isfinite(t_arr)):
            raise DomainError(f"parameter outside [0, {self.duration!r}]")
        return self.position(t_arr), self.velocity(t_arr)

    @property
    def start(self):
        return self.position(0.0)

    @property
    def end(self):
        return self.position(self.duration)

    # -----------------------
    # Shape
    # -----------------------
    @property
    def length(self):
        raise NotImplementedError

    def bounds(self):
        """Axis-aligned bounding box (xmin, ymin, xmax, ymax)."""
        raise NotImplementedError

    @cached_property
    def diameter(self):
        xmin, ymin, xmax, ymax = self.bounds()
        return math.hypot(xmax - xmin, ymax - ymin)

    @cached_property
    def closed(self):
        gap = np.linalg.norm(self.end - self.start)
        return bool(gap <= CLOSED_TOLERANCE * (1.0 + self.diameter))

    # -----------------------
    # Green's theorem integrals
    # -----------------------
    def line_integrals(self, samples=DEFAULT_SAMPLES):
        """
        Boundary integrals whose sum over a closed curve gives the moments
        of the enclosed region:

            A  = 1/2 ∮ (x dy - y dx)
            Mx = 1/2 ∮ x² dy
            My = -1/2 ∮ y² dx
            M2 = 1/3 ∮ (x³ dy - y³ dx)

        Composite Simpson with `samples` intervals on this primitive.
        """
        n = max(2, int(samples) + int(samples) % 2)
        t = np.linspace(0.0, self.duration, n + 1)
        p = self.position(t)
        v = self.velocity(t)
        x, y = p[:, 0], p[:, 1]
        vx, vy = v[:, 0], v[:, 1]
        integrands = np.stack([
            0.5 * (x * vy - y * vx),
            0.5 * x * x * vy,
            -0.5 * y * y * vx,
            (x ** 3 * vy - y ** 3 * vx) / 3.0,
        ])
        return simpson(integrands, x=t, axis=-1)

    def breakpoints(self):
        """Interior parameters where the velocity may jump (empty for smooth curves)."""
        return np.empty(0)

    def to_spec(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec()!r})"


class Circle(ParamCurve):
    kind = "circle"

    def __init__(self, center=(0.0, 0.0), radius=1.0, orientation=CCW, phase=0.0, duration=1.0):
        super().__init__(duration)
        self.center = _as_point(center, "center")
        self.radius = float(radius)
        if self.radius < 0:
            raise GeometryError("radius must be non-negative")
        if orientation not in (CCW, CW):
            raise GeometryError("orientation must be CCW (+1) or CW (-1)")
        self.orientation = orientation
        self.phase = float(phase)
        self.center.setflags(write=False)

    @property
    def angular_speed(self):
        return self.orientation * 2.0 * math.pi / self.duration

    def position(self, t):
        angle = self.phase + self.angular_speed * np.asarray(t, dtype=float)
        return self.center + self.radius * np.stack([np.cos(angle), np.sin(angle)], axis=-1)

    def velocity(self, t, side="right"):
        angle = self.phase + self.angular_speed * np.asarray(t, dtype=float)
        speed = self.radius * self.angular_speed
        return speed * np.stack([-np.sin(angle), np.cos(angle)], axis=-1)

    @property
    def length(self):
        return 2.0 * math.pi * self.radius

    def bounds(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, cy - r, cx + r, cy + r)

    def to_spec(self):
        return {
            "kind": self.kind,
            "center": [float(self.center[0]), float(self.center[1])],
            "radius": self.radius,
            "orientation": "ccw" if self.orientation == CCW else "cw",
            "phase": self.phase,
            "duration": self.duration,
        }


class Segment(ParamCurve):
    kind = "segment"

    def __init__(self, start, end, duration=1.0):
        super().__init__(duration)
        self.a = _as_point(start, "start")
        self.b = _as_point(end, "end")
        self.a.setflags(write=False)
        self.b.setflags(write=False)

    def position(self, t):
        s = np.asarray(t, dtype=float)[..., None] / self.duration
        return self.a + s * (self.b - self.a)

    def velocity(self, t, side="right"):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to((self.b - self.a) / self.duration, t.shape + (2,)).copy()

    @property
    def length(self):
        return float(np.linalg.norm(self.b - self.a))

    def bounds(self):
        lo = np.minimum(self.a, self.b)
        hi = np.maximum(self.a, self.b)
        return (lo[0], lo[1], hi[0], hi[1])

    def to_spec(self):
        return {
            "kind": self.kind,
            "start": [float(self.a[0]), float(self.a[1])],
            "end": [float(self.b[0]), float(self.b[1])],
            "duration": self.duration,
        }


class Reversed(ParamCurve):
    """The child traversed backwards: p(t) = c(T - t)."""
    kind = "reversed"

    def __init__(self, child):
        super().__init__(child.duration)
        self.child = child

    def position(self, t):
        return self.child.position(self.duration - np.asarray(t, dtype=float))

    def velocity(self, t, side="right"):
        return -self.child.velocity(self.duration - np.asarray(t, dtype=float), _flip(side))

    @property
    def length(self):
        return self.child.length

    def bounds(self):
        return self.child.bounds()

    def line_integrals(self, samples=DEFAULT_SAMPLES):
        return -self.child.line_integrals(samples)

    def breakpoints(self):
        return np.sort(self.duration - self.child.breakpoints())

    def to_spec(self):
        return {"kind": self.kind, "child": self.child.to_spec()}


class Composite(ParamCurve):
    """
    Ordered children traced one after the other.

    The parameter range is split between children in proportion to their arc
    length; zero-length children get an empty slice and are never evaluated.
    """
    kind = "composite"

    def __init__(self, children, duration=1.0):
        super().__init__(duration)
        self.children = tuple(children)
        if not self.children:
            raise GeometryError("a composite needs at least one child")
        self._check_junctions()

        lengths = np.array([child.length for child in self.children])
        total = lengths.sum()
        if total > 0:
            active = [i for i, length in enumerate(lengths) if length > 0]
            weights = lengths[active] / total
        else:
            active = list(range(len(self.children)))
            weights = np.full(len(active), 1.0 / len(active))
        edges = np.concatenate([[0.0], np.cumsum(weights) * self.duration])
        edges[-1] = self.duration
        self._active = [self.children[i] for i in active]
        self._starts = edges[:-1]
        self._widths = np.diff(edges)
        self._junctions = edges[1:-1]

    def _check_junctions(self):
        for left, right in zip(self.children, self.children[1:]):
            gap = np.linalg.norm(left.end - right.start)
            scale = 1.0 + max(np.max(np.abs(left.end)), np.max(np.abs(right.start)))
            if gap > JUNCTION_TOLERANCE * scale:
                raise GeometryError(f"children do not meet: gap {gap:.3g} between {left.kind} and {right.kind}")

    @property
    def junctions(self):
        """Parameters at which consecutive (non-empty) pieces meet."""
        return self._junctions.copy()

    def _dispatch(self, t, side):
        return np.searchsorted(self._junctions, t, side=side)

    def _map(self, fn, t, side):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).ravel()
        out = np.empty(flat.shape + (2,))
        index = self._dispatch(flat, side)
        for j, child in enumerate(self._active):
            mask = index == j
            if not np.any(mask):
                continue
            rate = child.duration / self._widths[j]
            local = np.clip((flat[mask] - self._starts[j]) * rate, 0.0, child.duration)
            out[mask] = fn(child, local, rate)
        return out.reshape(t.shape + (2,))

    def position(self, t):
        return self._map(lambda child, s, rate: child.position(s), t, "right")

    def velocity(self, t, side="right"):
        return self._map(lambda child, s, rate: rate * child.velocity(s, side), t, side)

    @property
    def length(self):
        return float(sum(child.length for child in self.children))

    def bounds(self):
        boxes = np.array([child.bounds() for child in self.children])
        return (boxes[:, 0].min(), boxes[:, 1].min(), boxes[:, 2].max(), boxes[:, 3].max())

    def line_integrals(self, samples=DEFAULT_SAMPLES):
        return sum(child.line_integrals(samples) for child in self.children)

    def breakpoints(self):
        inner = [
            start + child.breakpoints() * (width / child.duration)
            for child, start, width in zip(self._active, self._starts, self._widths)
        ]
        return np.unique(np.concatenate([self._junctions, *inner]))

    def to_spec(self):
        return {
            "kind": self.kind,
            "children": [child.to_spec() for child in self.children],
            "duration": self.duration,
        }


class Polygon(Composite):
    """Closed polygon through the vertices in order, last edge back to the first."""
    kind = "polygon"

    def __init__(self, vertices, duration=1.0):
        self.vertices = np.array([_as_point(v, "vertex") for v in vertices]).reshape(-1, 2)
        if len(self.vertices) < 2:
            raise GeometryError("a polygon needs at least two vertices")
        self.vertices.setflags(write=False)
        rolled = np.roll(self.vertices, -1, axis=0)
        super().__init__([Segment(a, b) for a, b in zip(self.vertices, rolled)], duration)

    def to_spec(self):
        return {
            "kind": self.kind,
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "duration": self.duration,
        }


class Star(Polygon):
    """
    Regular n-pointed star: a 2n-gon with vertices at angles πk/n, alternating
    between the outer radius (even k, starting at angle 0) and the inner radius.
    """
    kind = "star"

    def __init__(self, points=5, outer_radius=1.0, inner_radius=0.4, center=(0.0, 0.0), duration=1.0):
        self.points = int(points)
        if self.points < 2:
            raise GeometryError("a star needs at least two points")
        self.outer_radius = float(outer_radius)
        self.inner_radius = float(inner_radius)
        self.center = _as_point(center, "center")
        k = np.arange(2 * self.points)
        radii = np.where(k % 2 == 0, self.outer_radius, self.inner_radius)
        angles = math.pi * k / self.points
        vertices = self.center + radii[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        super().__init__(vertices, duration)

    def to_spec(self):
        return {
            "kind": self.kind,
            "points": self.points,
            "outer_radius": self.outer_radius,
            "inner_radius": self.inner_radius,
            "center": [float(self.center[0]), float(self.center[1])],
            "duration": self.duration,
        }


CURVE_KINDS = {
    cls.kind: cls for cls in (Circle, Segment, Reversed, Composite, Polygon, Star)
}


def curve_from_spec(spec):
    """Build a curve from a validated spec dict (see geometry.serializers)."""
    kind = spec["kind"]
    duration = spec.get("duration", 1.0)
    if kind == "circle":
        orientation = CW if spec.get("orientation", "ccw") == "cw" else CCW
        return Circle(spec.get("center", (0.0, 0.0)), spec.get("radius", 1.0), orientation,
                      spec.get("phase", 0.0), duration)
    if kind == "segment":
        return Segment(spec["start"], spec["end"], duration)
    if kind == "polygon":
        return Polygon(spec["vertices"], duration)
    if kind == "star":
        return Star(spec.get("points", 5), spec.get("outer_radius", 1.0), spec.get("inner_radius", 0.4),
                    spec.get("center", (0.0, 0.0)), duration)
    if kind == "composite":
        return Composite([curve_from_spec(child) for child in spec["children"]], duration)
    if kind == "reversed":
        return Reversed(curve_from_spec(spec["child"]))
    raise GeometryError(f"unknown curve kind {kind!r}")
