"""Custom validators for the ribbons app."""
import math

from django.conf import settings
from django.core.exceptions import ValidationError
from django.utils.deconstruct import deconstructible


@deconstructible
class JSONFileValidator:
    """
    Validator that checks if an input file looks like a JSON document.
    Checks size, extension and the first non-blank byte before parsing.
    """
    allowed_extensions = ['.json']
    max_size = None

    def __init__(self, max_size=None):
        if max_size is not None:
            self.max_size = max_size

    def __call__(self, file):
        max_size = self.max_size or getattr(settings, 'RIBBON_MAX_INPUT_SIZE', 10 * 1024 * 1024)
        # Check file size
        if file.size > max_size:
            raise ValidationError(
                f'File size ({file.size / 1024 / 1024:.1f} MB) exceeds maximum allowed size '
                f'({max_size / 1024 / 1024:.1f} MB).'
            )

        name = getattr(file, 'name', '') or ''
        ext = '.' + name.lower().split('.')[-1] if '.' in name else ''
        if ext not in self.allowed_extensions:
            raise ValidationError(
                f'Invalid file extension: {ext or "(none)"}. Allowed: {", ".join(self.allowed_extensions)}'
            )

        file.seek(0)
        file_header = file.read(2048)
        file.seek(0)
        if isinstance(file_header, str):
            file_header = file_header.encode()

        # Curve and field files are JSON objects
        if not file_header.lstrip().startswith(b'{'):
            raise ValidationError('Invalid JSON file. The content must be a JSON object.')

    def __eq__(self, other):
        return (
            isinstance(other, JSONFileValidator) and
            self.max_size == other.max_size
        )


@deconstructible
class FiniteVectorsValidator:
    """
    Validator for a list of coordinate vectors: every entry must be a list of
    `dims` finite numbers (any of the given lengths).
    """

    def __init__(self, dims=(3, 4), min_length=1):
        self.dims = tuple(dims)
        self.min_length = min_length

    def __call__(self, value):
        if len(value) < self.min_length:
            raise ValidationError(f'Expected at least {self.min_length} vectors, got {len(value)}.')
        lengths = {len(v) for v in value}
        if len(lengths) > 1:
            raise ValidationError('All vectors must have the same dimension.')
        if lengths and lengths.pop() not in self.dims:
            raise ValidationError(
                f'Vectors must have {" or ".join(str(d) for d in self.dims)} components.'
            )
        for i, vector in enumerate(value):
            if not all(math.isfinite(c) for c in vector):
                raise ValidationError(f'Vector {i} has a non-finite component.')

    def __eq__(self, other):
        return (
            isinstance(other, FiniteVectorsValidator) and
            self.dims == other.dims and
            self.min_length == other.min_length
        )


# Convenience instances
validate_json_file = JSONFileValidator()
validate_curve_samples = FiniteVectorsValidator(min_length=8)
validate_vectors = FiniteVectorsValidator()
