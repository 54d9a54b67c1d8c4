"""Check LINK = TWIST + WRITHE for a ribbon."""
from ...serializers import LtwReportSerializer
from ...services.linkage import ltw_verify
from ._common import RibbonCommand, as_ribbon, fixed


class Command(RibbonCommand):
    help = 'Evaluate Lk(K, K_eps), Tw(v) and Wr(K) and report the residual'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--eps', type=float, help='Ribbon width')

    def run(self, **options):
        ribbon = as_ribbon(self.load_source(options), options.get('eps'))
        report = ltw_verify(ribbon, options['format'], self.quadrature(options))
        self.stdout.write(f"Lk = {fixed(report.lk)}")
        self.stdout.write(f"Tw = {fixed(report.tw)}")
        self.stdout.write(f"Wr = {fixed(report.wr)}")
        self.stdout.write(f"residual = {report.residual:.3e}")
        self.write_report(options, LtwReportSerializer(report).data)
