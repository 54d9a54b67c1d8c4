"""Biot-Savart field of a sampled vector field at one point."""
import numpy as np

from ...serializers import EvaluationPointSerializer
from ...services.fields import biot_savart_at
from ._common import RibbonCommand, as_field


class Command(RibbonCommand):
    help = 'Evaluate BS(v) at a point (parallel-transport format)'
    uses_format = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--at', required=True, help='Comma-separated coordinates x,y,z[,w]')

    def run(self, **options):
        field = as_field(self.load_source(options))
        serializer = EvaluationPointSerializer(data={'at': options['at'].split(',')})
        serializer.is_valid(raise_exception=True)
        value = biot_savart_at(field, np.asarray(serializer.validated_data['at']),
                               cfg=self.quadrature(options))
        self.stdout.write("BS = [" + ", ".join(f"{c:.9g}" for c in value) + "]")
        self.write_report(options, {'space': field.space.value, 'at': serializer.validated_data['at'],
                                    'bs': value.tolist()})
