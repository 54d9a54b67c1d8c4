"""DRF serializers for curve/field input files and computed reports."""
from rest_framework import serializers

from .services.presets import PRESETS
from .validators import FiniteVectorsValidator, validate_curve_samples, validate_vectors

SPACE_CHOICES = ['r3', 's3', 'h3']
FORMAT_CHOICES = ['parallel', 'left']


def _vectors(**kwargs):
    return serializers.ListField(child=serializers.ListField(child=serializers.FloatField()), **kwargs)


def _check_dimension(space, vectors, label):
    expected = 3 if space == 'r3' else 4
    if vectors and len(vectors[0]) != expected:
        raise serializers.ValidationError(
            {label: f"dimension mismatch: {space} needs {expected}-vectors, got {len(vectors[0])}"}
        )


class PresetRefSerializer(serializers.Serializer):
    name = serializers.CharField()
    params = serializers.DictField(required=False, default=dict)

    def validate_name(self, value):
        if value not in PRESETS:
            raise serializers.ValidationError(f"Unknown preset '{value}'")
        return value


class CurveFileSerializer(serializers.Serializer):
    """
    A closed curve as samples (optionally with a normal field and ribbon
    width) or a reference to a built-in preset. When `length` is present the
    samples are taken as already uniform in arclength and loaded unchanged.
    """
    space = serializers.ChoiceField(choices=SPACE_CHOICES)
    kind = serializers.ChoiceField(choices=['samples', 'preset'], default='samples')
    samples = _vectors(required=False, validators=[validate_curve_samples])
    length = serializers.FloatField(required=False, min_value=0.0)
    normal = _vectors(required=False, validators=[validate_vectors])
    width = serializers.FloatField(required=False)
    preset = PresetRefSerializer(required=False)

    def validate_width(self, value):
        if not value > 0:
            raise serializers.ValidationError("width must be positive")
        return value

    def validate(self, attrs):
        space = attrs['space']
        if attrs['kind'] == 'preset':
            if 'preset' not in attrs:
                raise serializers.ValidationError({'preset': "required when kind is 'preset'"})
            return attrs
        samples = attrs.get('samples')
        if not samples:
            raise serializers.ValidationError({'samples': "required when kind is 'samples'"})
        _check_dimension(space, samples, 'samples')
        normal = attrs.get('normal')
        if normal is not None:
            _check_dimension(space, normal, 'normal')
            if len(normal) != len(samples):
                raise serializers.ValidationError(
                    {'normal': f"needs one vector per sample ({len(samples)}), got {len(normal)}"}
                )
        if 'width' in attrs and normal is None:
            raise serializers.ValidationError({'width': "a ribbon width needs a normal field"})
        return attrs


class CurvePairFileSerializer(serializers.Serializer):
    curves = CurveFileSerializer(many=True)

    def validate_curves(self, value):
        if len(value) != 2:
            raise serializers.ValidationError(f"expected exactly two curves, got {len(value)}")
        if value[0]['space'] != value[1]['space']:
            raise serializers.ValidationError("both curves must live in the same space")
        return value


class FieldFileSerializer(serializers.Serializer):
    space = serializers.ChoiceField(choices=SPACE_CHOICES)
    points = _vectors(validators=[validate_vectors])
    vectors = _vectors(validators=[validate_vectors])
    weights = serializers.ListField(child=serializers.FloatField(), min_length=1)
    divergence_free = serializers.BooleanField(default=False)
    spacing = serializers.FloatField(required=False, allow_null=True, min_value=0.0)

    def validate_weights(self, value):
        if any(not w > 0 for w in value):
            raise serializers.ValidationError("weights must be positive")
        return value

    def validate(self, attrs):
        space = attrs['space']
        _check_dimension(space, attrs['points'], 'points')
        _check_dimension(space, attrs['vectors'], 'vectors')
        n = len(attrs['points'])
        if len(attrs['vectors']) != n or len(attrs['weights']) != n:
            raise serializers.ValidationError(
                f"points ({n}), vectors ({len(attrs['vectors'])}) and weights "
                f"({len(attrs['weights'])}) must have equal lengths"
            )
        return attrs


class EvaluationPointSerializer(serializers.Serializer):
    at = serializers.ListField(child=serializers.FloatField(), min_length=3, max_length=4)

    def validate_at(self, value):
        FiniteVectorsValidator(dims=(3, 4))([value])
        return value


class LinkingResultSerializer(serializers.Serializer):
    lk = serializers.FloatField()
    lk_rounded = serializers.IntegerField()
    distance_to_integer = serializers.FloatField()
    n_outer = serializers.IntegerField()
    n_inner = serializers.IntegerField()
    min_distance = serializers.FloatField()
    format = serializers.CharField()


class LtwReportSerializer(serializers.Serializer):
    space = serializers.CharField()
    format = serializers.CharField()
    width = serializers.FloatField()
    n = serializers.IntegerField()
    lk = serializers.FloatField()
    lk_rounded = serializers.IntegerField()
    tw = serializers.FloatField()
    wr = serializers.FloatField()
    residual = serializers.FloatField()


class HelicityReportSerializer(serializers.Serializer):
    space = serializers.CharField()
    format = serializers.CharField()
    samples = serializers.IntegerField()
    outer_points = serializers.IntegerField(allow_null=True)
    helicity = serializers.FloatField()
    energy = serializers.FloatField()
    volume = serializers.FloatField()
    equivalent_radius = serializers.FloatField()
    bound = serializers.FloatField()


class BoundReportSerializer(serializers.Serializer):
    space = serializers.CharField()
    radius = serializers.FloatField()
    volume = serializers.FloatField()
    n = serializers.FloatField()
    curl_eigenvalue_lower_bound = serializers.FloatField()
