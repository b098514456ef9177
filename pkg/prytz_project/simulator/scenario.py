"""
A validated scenario document and the objects the commands build from it.
"""
from dataclasses import dataclass
import json
import logging
import math

from django.conf import settings
from rest_framework import serializers

from geometry.curves import curve_from_spec
from geometry.moments import centroid, prytz_loop
from simulator.serializers import ScenarioSerializer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    data: dict

    @classmethod
    def from_dict(cls, data):
        """Validate and normalize a scenario document; raises ValidationError."""
        serializer = ScenarioSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return cls(serializer.validated_data)

    def to_dict(self):
        """The normalized document; from_dict(to_dict()) gives the same scenario."""
        return json.loads(json.dumps(self.data))

    def __getitem__(self, key):
        return self.data[key]

    # -----------------------
    # Resolved parameters
    # -----------------------

    @property
    def l(self):
        return self.data["l"]

    @property
    def steps(self):
        steps = self.data["steps"]
        return settings.PRYTZ_STEPS if steps is None else steps

    @property
    def samples(self):
        samples = self.data["samples"]
        return settings.PRYTZ_SAMPLES if samples is None else samples

    @property
    def theta_grid(self):
        n = self.data["theta_grid"]
        return [2.0 * math.pi * k / n for k in range(n)]

    def require(self, key, command):
        if self.data[key] is None:
            raise serializers.ValidationError({key: f"This field is required by the {command} command."})
        return self.data[key]

    # -----------------------
    # Curves
    # -----------------------

    @property
    def curve(self):
        spec = self.data["curve"]
        return None if spec is None else curve_from_spec(spec)

    def start_point(self, curve):
        start = self.data["start"]
        if start is None:
            return None
        if start == "centroid":
            return centroid(curve, self.samples)
        return start

    def tracer(self, curve):
        """The curve the tracer follows: the region boundary, or a loop to it from `start`."""
        start = self.start_point(curve)
        if start is None:
            return curve
        logger.debug("tracer loop from (%.6g, %.6g)", start[0], start[1])
        return prytz_loop(curve, start)

    def theta0(self, curve):
        """
        Initial rod angle. Unless given, the rod points along the outward
        spoke from the start point to the boundary; 0 without a spoke.
        """
        if self.data["theta0"] is not None:
            return self.data["theta0"]
        start = self.start_point(curve)
        if start is None:
            return 0.0
        dx, dy = curve.start - start
        if math.hypot(dx, dy) == 0.0:
            return 0.0
        return math.atan2(float(dy), float(dx))

    def require_curve(self, command):
        self.require("curve", command)
        return self.curve
