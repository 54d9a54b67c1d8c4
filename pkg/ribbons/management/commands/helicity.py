"""Helicity of a sampled vector field, with the N(R) bound."""
from ...serializers import HelicityReportSerializer
from ...services.fields import bound_N, energy, helicity, support_radius
from ._common import RibbonCommand, as_field, fixed


class Command(RibbonCommand):
    help = 'Helicity H(v) of a field and the bound N(R)·|v|²'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--outer', type=int, help='Monte-Carlo subsample size for the outer sum')
        parser.add_argument('--seed', type=int, help='Seed for the subsample and random presets')
        parser.add_argument('--cut', type=float, help='Exclusion radius for coincident pairs')

    def run(self, **options):
        field = as_field(self.load_source(options))
        value = helicity(field, options['format'], cut=options.get('cut'),
                         outer_points=options.get('outer'), seed=options.get('seed'),
                         cfg=self.quadrature(options))
        field_energy = energy(field)
        volume = field.volume
        radius = support_radius(field)
        bound = bound_N(field.space, radius) * field_energy
        self.stdout.write(f"H = {fixed(value)}")
        self.stdout.write(f"energy = {fixed(field_energy)}")
        self.stdout.write(f"N(R)·|v|² = {fixed(bound)} (R = {radius:.6f})")
        self.write_report(options, HelicityReportSerializer({
            'space': field.space.value,
            'format': options['format'],
            'samples': len(field),
            'outer_points': options.get('outer'),
            'helicity': value,
            'energy': field_energy,
            'volume': volume,
            'equivalent_radius': radius,
            'bound': bound,
        }).data)
