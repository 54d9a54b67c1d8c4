"""Reading and writing curve, ribbon and field JSON files."""
import json
import logging
from pathlib import Path

import numpy as np
from django.core.files import File

from ..serializers import CurveFileSerializer, CurvePairFileSerializer, FieldFileSerializer
from ..validators import validate_json_file
from .curves import ClosedCurve, NormalField, Ribbon, from_samples
from .fields import FieldSample
from .presets import build_preset

logger = logging.getLogger(__name__)


def read_json(path):
    """Validate and parse a JSON input file."""
    path = Path(path)
    with path.open('rb') as handle:
        wrapped = File(handle, name=path.name)
        validate_json_file(wrapped)
        document = json.loads(handle.read().decode('utf-8'))
    logger.debug("Read %s (%d top-level keys)", path, len(document))
    return document


def _validated(serializer_class, document):
    serializer = serializer_class(data=document)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def _curve_from_data(data, n=None):
    space = data['space']
    if data['kind'] == 'preset':
        preset = data['preset']
        return build_preset(preset['name'], n, **preset.get('params', {}))

    samples = np.asarray(data['samples'], dtype=float)
    normal = data.get('normal')
    if 'length' in data:
        curve = ClosedCurve(space, samples, data['length'])
    elif normal is not None:
        # Ribbon samples are taken as uniform in arclength
        curve = ClosedCurve(space, samples)
    else:
        curve = from_samples(space, samples, n=n)
    if normal is None:
        return curve
    field = NormalField(curve, np.asarray(normal, dtype=float))
    if 'width' in data:
        return Ribbon(curve, field, data['width'])
    return field


def load_curve_document(document, n=None):
    """
    Build the object a curve document describes: a ClosedCurve, a NormalField,
    a Ribbon, a pair of curves, or whatever a referenced preset builds.
    """
    if 'curves' in document:
        data = _validated(CurvePairFileSerializer, document)
        return tuple(_curve_from_data(item, n) for item in data['curves'])
    return _curve_from_data(_validated(CurveFileSerializer, document), n)


def load_curve(path, n=None):
    return load_curve_document(read_json(path), n)


def load_field_document(document):
    data = _validated(FieldFileSerializer, document)
    return FieldSample(
        data['space'],
        np.asarray(data['points'], dtype=float),
        np.asarray(data['vectors'], dtype=float),
        np.asarray(data['weights'], dtype=float),
        divergence_free=data['divergence_free'],
        spacing=data.get('spacing'),
    )


def load_field(path):
    return load_field_document(read_json(path))


def load_any(path, n=None):
    """Curve or field file, told apart by the presence of `weights`."""
    document = read_json(path)
    if 'weights' in document:
        return load_field_document(document)
    return load_curve_document(document, n)


def _curve_document(obj):
    if isinstance(obj, Ribbon):
        document = _curve_document(obj.normal)
        document['width'] = obj.width
        return document
    if isinstance(obj, NormalField):
        document = _curve_document(obj.curve)
        document['normal'] = obj.vectors.tolist()
        return document
    if isinstance(obj, ClosedCurve):
        return {
            'space': obj.space.value,
            'kind': 'samples',
            'samples': obj.samples.tolist(),
            'length': obj.length,
        }
    raise TypeError(f"Cannot serialize {type(obj).__name__} as a curve file")


def to_document(obj):
    """JSON-ready document for a curve, normal field, ribbon, curve pair or field sample."""
    if isinstance(obj, tuple):
        document = {'curves': [_curve_document(item) for item in obj]}
        return CurvePairFileSerializer(document).data
    if isinstance(obj, FieldSample):
        document = {
            'space': obj.space.value,
            'points': obj.points.tolist(),
            'vectors': obj.vectors.tolist(),
            'weights': obj.weights.tolist(),
            'divergence_free': obj.divergence_free,
            'spacing': obj.spacing,
        }
        return FieldFileSerializer(document).data
    return CurveFileSerializer(_curve_document(obj)).data


def dump(obj, path):
    """
    Write any loadable object to a JSON file. Floats are written with repr,
    the shortest decimal that reads back to the same double.
    """
    path = Path(path)
    document = to_document(obj)
    path.write_text(json.dumps(document, indent=1))
    logger.info("Wrote %s", path)
    return path
