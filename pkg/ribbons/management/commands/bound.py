"""The geometric bound N(R) and the curl-eigenvalue bound 1/N(R)."""
import math

from ...serializers import BoundReportSerializer
from ...services.export_service import bound_sweep, write_sweep_csv
from ...services.fields import ball_volume, bound_N, curl_eigenvalue_lower_bound, equivalent_ball_radius
from ._common import RibbonCommand, fixed


class Command(RibbonCommand):
    help = 'Evaluate N(R) for a radius or volume, or sweep R over (0, π] for all three spaces as CSV'

    def add_arguments(self, parser):
        parser.add_argument('--space', choices=['r3', 's3', 'h3'], default='r3')
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument('--radius', type=float, help='Ball radius R')
        group.add_argument('--volume', type=float, help='Domain volume; R is the volume-equivalent radius')
        group.add_argument('--sweep', action='store_true', help='Emit the N(R) table as CSV')
        parser.add_argument('--steps', type=int, default=200, help='Rows of the sweep')
        parser.add_argument('--r-max', type=float, default=math.pi, help='Largest radius of the sweep')
        parser.add_argument('--out', help='Output path (CSV for --sweep, JSON otherwise)')

    def run(self, **options):
        if options['sweep']:
            rows = bound_sweep(options['steps'], options['r_max'])
            if options.get('out'):
                write_sweep_csv(rows, options['out'])
                self.stdout.write(f"Sweep of {len(rows)} radii written to {options['out']}")
            else:
                write_sweep_csv(rows, self.stdout)
            return

        space = options['space']
        if options.get('volume') is not None:
            radius = equivalent_ball_radius(space, options['volume'])
            self.stdout.write(f"R = {fixed(radius, 9)}")
        else:
            radius = options['radius']
        n = bound_N(space, radius)
        self.stdout.write(f"N(R) = {fixed(n)}")
        self.stdout.write(f"1/N(R) = {fixed(1.0 / n)}")
        self.write_report(options, BoundReportSerializer({
            'space': space,
            'radius': radius,
            'volume': ball_volume(space, radius),
            'n': n,
            'curl_eigenvalue_lower_bound': curl_eigenvalue_lower_bound(space, radius),
        }).data)
