from rest_framework import serializers

from core.serializers import PointField, StrictSerializer, positive
from geometry.curves import curve_from_spec
from geometry.serializers import CurveSpecField, _plain

DEFAULT_L = 5.0
DEFAULT_L_VALUES = (4.0, 8.0, 16.0, 32.0)
DEFAULT_THETA_GRID = 16
DEFAULT_GEODESIC_DURATION = 10.0


class ConfigField(serializers.ListField):
    """A planimeter configuration written as [x, y, theta]."""

    def __init__(self, **kwargs):
        kwargs.setdefault("child", serializers.FloatField())
        kwargs.setdefault("min_length", 3)
        kwargs.setdefault("max_length", 3)
        super().__init__(**kwargs)


class StartField(serializers.Field):
    """Where the tracer starts its loop: "centroid" or a point [x, y]."""
    default_error_messages = {
        "invalid": 'Expected "centroid" or a point [x, y].',
    }

    def to_internal_value(self, data):
        if data == "centroid":
            return data
        if isinstance(data, str):
            self.fail("invalid")
        try:
            return PointField().run_validation(data)
        except serializers.ValidationError:
            self.fail("invalid")

    def to_representation(self, value):
        return value


class GeodesicSpecSerializer(StrictSerializer):
    start = ConfigField(default=[0.0, 0.0, 0.0])
    momentum = ConfigField()
    duration = serializers.FloatField(default=DEFAULT_GEODESIC_DURATION, validators=[positive])


class PlanSpecSerializer(StrictSerializer):
    start = ConfigField()
    target = ConfigField()
    tol = serializers.FloatField(default=None, allow_null=True, validators=[positive])
    max_loops = serializers.IntegerField(default=None, allow_null=True, min_value=0)
    steps = serializers.IntegerField(default=None, allow_null=True, min_value=1)


class ChainSpecSerializer(StrictSerializer):
    lengths = serializers.ListField(
        child=serializers.FloatField(validators=[positive]), min_length=1
    )
    angles = serializers.ListField(
        child=serializers.FloatField(), default=None, allow_null=True
    )

    def validate(self, data):
        angles = data.get("angles")
        if angles is not None and len(angles) != len(data["lengths"]):
            raise serializers.ValidationError({
                "angles": "Give one angle per rod."
            })
        return data


class ScenarioSerializer(StrictSerializer):
    """
    One simulation run. Only `curve` is needed by most commands; the nested
    blocks feed the geodesic, plan and chain commands.
    """
    curve = CurveSpecField(default=None, allow_null=True)
    l = serializers.FloatField(default=DEFAULT_L, validators=[positive])
    theta0 = serializers.FloatField(default=None, allow_null=True)
    steps = serializers.IntegerField(default=None, allow_null=True, min_value=1)
    samples = serializers.IntegerField(default=None, allow_null=True, min_value=2)
    start = StartField(default=None, allow_null=True)
    theta_grid = serializers.IntegerField(default=DEFAULT_THETA_GRID, min_value=1)
    l_values = serializers.ListField(
        child=serializers.FloatField(validators=[positive]),
        min_length=2,
        default=list(DEFAULT_L_VALUES),
    )
    workers = serializers.IntegerField(default=1, min_value=1)
    geodesic = GeodesicSpecSerializer(default=None, allow_null=True)
    plan = PlanSpecSerializer(default=None, allow_null=True)
    chain = ChainSpecSerializer(default=None, allow_null=True)
    out = serializers.CharField(default=None, allow_null=True)

    def validate_curve(self, value):
        if value is None:
            return value
        try:
            curve_from_spec(value)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return value

    def validate(self, data):
        if data.get("start") is not None and data.get("curve") is None:
            raise serializers.ValidationError({
                "start": "A start point needs a curve to loop around."
            })
        return _plain(dict(data))
