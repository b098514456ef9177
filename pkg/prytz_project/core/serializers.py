from rest_framework import serializers


class StrictSerializer(serializers.Serializer):
    """
    Serializer that refuses keys it does not declare, so a misspelled
    scenario key fails loudly instead of silently falling back to a default.
    """

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: "Unknown key." for key in unknown})
        return super().to_internal_value(data)


class PointField(serializers.ListField):
    """A point or vector of the plane written as [x, y]."""

    def __init__(self, **kwargs):
        kwargs.setdefault("child", serializers.FloatField())
        kwargs.setdefault("min_length", 2)
        kwargs.setdefault("max_length", 2)
        super().__init__(**kwargs)


def positive(value):
    if not value > 0:
        raise serializers.ValidationError("Must be positive.")
    return value
