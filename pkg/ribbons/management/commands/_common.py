"""Shared plumbing for the ribbons management commands."""
import json
import logging

from django.core.exceptions import ValidationError as DjangoValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from ...exceptions import RibbonError
from ...services.curve_io import load_any
from ...services.curves import ClosedCurve, NormalField, Ribbon
from ...services.export_service import write_json_report
from ...services.fields import FieldSample
from ...services.presets import get_preset
from ...services.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

INPUT_ERROR = 2
PRECONDITION_ERROR = 3

DEFAULT_RIBBON_WIDTH = 0.1


def fixed(value, digits=6):
    """Fixed-point text without a negative zero."""
    text = f"{value:.{digits}f}"
    return text[1:] if text.startswith('-') and not text.strip('-0.') else text


def as_pair(obj):
    if isinstance(obj, tuple) and len(obj) == 2:
        return obj
    if isinstance(obj, Ribbon):
        return obj.base, obj.edge_loop()
    raise ValueError("Linking needs two curves or a ribbon")


def as_curve(obj):
    if isinstance(obj, ClosedCurve):
        return obj
    if isinstance(obj, NormalField):
        return obj.curve
    if isinstance(obj, Ribbon):
        return obj.base
    raise ValueError("Expected a single closed curve")


def as_normal(obj):
    if isinstance(obj, NormalField):
        return obj
    if isinstance(obj, Ribbon):
        return obj.normal
    raise ValueError("Expected a curve with a normal field")


def as_ribbon(obj, eps=None):
    if isinstance(obj, Ribbon):
        return obj.with_width(eps) if eps else obj
    if isinstance(obj, NormalField):
        return Ribbon(obj.curve, obj, eps or DEFAULT_RIBBON_WIDTH)
    raise ValueError("Expected a ribbon or a curve with a normal field")


def as_field(obj):
    if isinstance(obj, FieldSample):
        return obj
    raise ValueError("Expected a field file or field preset")


class RibbonCommand(BaseCommand):
    """
    Base class: source arguments (files or --preset), common flags, and the
    mapping of errors to exit codes (2 for bad input, 3 for failed
    geometric preconditions).
    """
    files = '?'
    uses_format = True

    def add_arguments(self, parser):
        parser.add_argument('files', nargs=self.files, help='Curve or field JSON file(s)')
        parser.add_argument('--preset', help='Built-in preset name (see `presets list`)')
        if self.uses_format:
            parser.add_argument('--format', default='parallel', choices=['parallel', 'left'],
                                help='Transport format of the kernels')
        parser.add_argument('--n', type=int, help='Quadrature nodes / preset samples per axis')
        parser.add_argument('--out', help='Write a JSON report to this path')

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except RibbonError as e:
            logger.warning("%s failed: %s", self.__module__.rsplit('.', 1)[-1], e)
            raise CommandError(str(e), returncode=PRECONDITION_ERROR)
        except ValidationError as e:
            raise CommandError(f"Invalid input: {e.detail}", returncode=INPUT_ERROR)
        except DjangoValidationError as e:
            raise CommandError(f"Invalid input: {'; '.join(e.messages)}", returncode=INPUT_ERROR)
        except json.JSONDecodeError as e:
            raise CommandError(f"Invalid JSON: {e}", returncode=INPUT_ERROR)
        except (OSError, ValueError, TypeError) as e:
            raise CommandError(str(e), returncode=INPUT_ERROR)

    def run(self, **options):
        raise NotImplementedError

    def preset_params(self, preset, options):
        params = {}
        for key in ('eps', 'seed'):
            if options.get(key) is not None and preset.accepts(key):
                params[key] = options[key]
        return params

    def load_source(self, options):
        files = options.get('files') or []
        if isinstance(files, str):
            files = [files]
        if options.get('preset'):
            if files:
                raise ValueError("Give either input files or --preset, not both")
            preset = get_preset(options['preset'])
            return preset.build(options.get('n'), **self.preset_params(preset, options))
        if not files:
            raise ValueError("An input file or --preset is required")
        if len(files) == 1:
            return load_any(files[0], options.get('n'))
        return tuple(as_curve(load_any(path, options.get('n'))) for path in files)

    def quadrature(self, options, **overrides):
        return QuadratureConfig.from_settings(n=options.get('n'), **overrides)

    def write_report(self, options, data):
        if options.get('out'):
            write_json_report(data, options['out'])
            self.stdout.write(f"Report written to {options['out']}")
