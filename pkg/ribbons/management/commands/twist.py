"""Twist of a unit normal field along a closed curve."""
from ...services.linkage import twist
from ._common import RibbonCommand, as_normal, fixed


class Command(RibbonCommand):
    help = 'Twist Tw(v) of a unit normal field'

    def run(self, **options):
        field = as_normal(self.load_source(options))
        cfg = self.quadrature(options)
        value = twist(field, options['format'], cfg)
        self.stdout.write(f"Tw = {fixed(value)}")
        self.write_report(options, {'tw': value, 'format': options['format'],
                                    'space': field.space.value, 'n': cfg.n_outer})
