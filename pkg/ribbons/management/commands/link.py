"""Linking number of two closed curves."""
from ...serializers import LinkingResultSerializer
from ...services.linkage import linking_report
from ._common import RibbonCommand, as_pair, fixed


class Command(RibbonCommand):
    help = 'Linking integral Lk(K1, K2) of two disjoint closed curves'
    files = '*'

    def run(self, **options):
        k1, k2 = as_pair(self.load_source(options))
        result = linking_report(k1, k2, options['format'], self.quadrature(options))
        self.stdout.write(f"Lk = {fixed(result.lk)}")
        self.stdout.write(f"rounded = {result.lk_rounded} (distance {result.distance_to_integer:.3e})")
        self.stdout.write(f"nodes = {result.n_outer} x {result.n_inner}, min distance = {result.min_distance:.6f}")
        self.write_report(options, LinkingResultSerializer(result).data)
