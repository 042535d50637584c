"""
Django command checking the metric identities near the exceptional curves
"""
from core.management.labcommand import LabCommand
from core.serializers import MetricConfigSerializer
from metric.identities import verify_metric_identities


class Command(LabCommand):
    help = (
        'Metric on the blown-up charts: checks Q(1/v) = |v|^4 Q(v), the '
        'bounds mu^-2 <= cstar <= mu^2 and that k does not depend on the '
        'chart, on sampled points.'
    )
    serializer_class = MetricConfigSerializer
    headline = ('passed', 'cstar_min', 'cstar_max')

    def add_run_arguments(self, parser):
        parser.add_argument('--mu', type=float, help='Rate mu > 1')
        parser.add_argument('--samples', type=int,
                            help='Number of sampled points')

    def run(self, data, writer):
        report = verify_metric_identities(data['mu'], data['samples'],
                                          seed=data['seed'])
        return report.as_dict()
