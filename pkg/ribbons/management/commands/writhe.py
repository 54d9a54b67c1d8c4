"""Writhe of a closed curve."""
from ...services.linkage import writhe
from ._common import RibbonCommand, as_curve, fixed


class Command(RibbonCommand):
    help = 'Writhe Wr(K) of a simple closed curve'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--tolerance', type=float,
                            help='Extrapolate over n when below 1e-4')

    def run(self, **options):
        curve = as_curve(self.load_source(options))
        cfg = self.quadrature(options, tolerance=options.get('tolerance'))
        value = writhe(curve, options['format'], cfg)
        self.stdout.write(f"Wr = {fixed(value)}")
        self.write_report(options, {'wr': value, 'format': options['format'],
                                    'space': curve.space.value, 'n': cfg.n_outer})
