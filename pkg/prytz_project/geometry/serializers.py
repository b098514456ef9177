# geometry/serializers.py
from rest_framework import serializers

from core.serializers import PointField, StrictSerializer, positive
from geometry.curves import curve_from_spec


class CircleSpecSerializer(StrictSerializer):
    kind = serializers.CharField()
    center = PointField(default=[0.0, 0.0])
    radius = serializers.FloatField(min_value=0.0, default=1.0)
    orientation = serializers.ChoiceField(choices=("ccw", "cw"), default="ccw")
    phase = serializers.FloatField(default=0.0)
    duration = serializers.FloatField(default=1.0, validators=[positive])


class SegmentSpecSerializer(StrictSerializer):
    kind = serializers.CharField()
    start = PointField()
    end = PointField()
    duration = serializers.FloatField(default=1.0, validators=[positive])


class PolygonSpecSerializer(StrictSerializer):
    kind = serializers.CharField()
    vertices = serializers.ListField(child=PointField(), min_length=2)
    duration = serializers.FloatField(default=1.0, validators=[positive])


class StarSpecSerializer(StrictSerializer):
    kind = serializers.CharField()
    points = serializers.IntegerField(min_value=2, default=5)
    outer_radius = serializers.FloatField(min_value=0.0, default=1.0)
    inner_radius = serializers.FloatField(min_value=0.0, default=0.4)
    center = PointField(default=[0.0, 0.0])
    duration = serializers.FloatField(default=1.0, validators=[positive])


class CurveSpecField(serializers.Field):
    """
    A curve spec: {"kind": "circle" | "star" | "polygon" | "segment" |
    "composite" | "reversed", ...}. Composite and reversed specs nest.
    """
    default_error_messages = {
        "not_a_dict": "Expected a curve spec object.",
        "bad_kind": "Unknown curve kind {kind!r}.",
    }

    def _serializer_for(self, kind):
        return {
            "circle": CircleSpecSerializer,
            "segment": SegmentSpecSerializer,
            "polygon": PolygonSpecSerializer,
            "star": StarSpecSerializer,
            "composite": CompositeSpecSerializer,
            "reversed": ReversedSpecSerializer,
        }.get(kind)

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            self.fail("not_a_dict")
        serializer_class = self._serializer_for(data.get("kind"))
        if serializer_class is None:
            self.fail("bad_kind", kind=data.get("kind"))
        serializer = serializer_class(data=data)
        if not serializer.is_valid():
            raise serializers.ValidationError(serializer.errors)
        return _plain(serializer.validated_data)

    def to_representation(self, value):
        if hasattr(value, "to_spec"):
            return value.to_spec()
        return value


class CompositeSpecSerializer(StrictSerializer):
    kind = serializers.CharField()
    children = serializers.ListField(child=CurveSpecField(), min_length=1)
    duration = serializers.FloatField(default=1.0, validators=[positive])


class ReversedSpecSerializer(StrictSerializer):
    kind = serializers.CharField()
    child = CurveSpecField()


class CurveSpecSerializer(StrictSerializer):
    """Wraps a single curve spec under the key "curve"."""
    curve = CurveSpecField()

    def validate_curve(self, value):
        try:
            curve_from_spec(value)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return value


def _plain(value):
    # OrderedDict / ReturnDict -> dict, recursively
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_plain(item) for item in value]
    return value


def parse_curve(spec):
    """Validate a curve spec and build the curve; raises ValidationError."""
    serializer = CurveSpecSerializer(data={"curve": spec})
    serializer.is_valid(raise_exception=True)
    return curve_from_spec(serializer.validated_data["curve"])
