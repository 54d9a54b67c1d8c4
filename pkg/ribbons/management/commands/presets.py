"""List the built-in presets or write one out as an input file."""
import json

from ...services.curve_io import dump, to_document
from ...services.presets import PRESETS, get_preset
from ._common import RibbonCommand


class Command(RibbonCommand):
    help = 'List built-in presets, or write one as a curve/field JSON file'

    def add_arguments(self, parser):
        parser.add_argument('action', choices=['list', 'show'])
        parser.add_argument('name', nargs='?', help='Preset to show')
        parser.add_argument('--n', type=int, help='Samples per axis')
        parser.add_argument('--eps', type=float, help='Ribbon width')
        parser.add_argument('--seed', type=int, help='Seed for random presets')
        parser.add_argument('--out', help='Write the preset to this JSON file')

    def run(self, **options):
        if options['action'] == 'list':
            for name in sorted(PRESETS):
                preset = PRESETS[name]
                self.stdout.write(f"{name:20s} {preset.kind:7s} {preset.space.value}  {preset.description}")
            return

        if not options.get('name'):
            raise ValueError("presets show needs a preset name")
        preset = get_preset(options['name'])
        obj = preset.build(options.get('n'), **self.preset_params(preset, options))
        if options.get('out'):
            dump(obj, options['out'])
            self.stdout.write(f"Preset {preset.name} written to {options['out']}")
        else:
            self.stdout.write(json.dumps(to_document(obj)))
