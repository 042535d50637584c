"""
Django command for the partial hyperbolicity of the total map
"""
from dataclasses import asdict

from django.conf import settings

from core.management.labcommand import LabCommand, add_map_arguments
from core.serializers import PinchingConfigSerializer
from hyperbolic.pinching import pinching_search
from hyperbolic.star import domination_check, verify_star
from skewprod.model import SkewParams


class Command(LabCommand):
    help = (
        'Partial hyperbolicity: searches the smallest scale d and horizon N '
        'at which the adapted metric pinches every sampled one-step ratio '
        'into (lambda^-2, lambda^2), then checks the rate inequalities and '
        'the domination for the fiber automorphism diag(B^2, I_{k-2}).'
    )
    serializer_class = PinchingConfigSerializer
    headline = ('smallest',)

    def add_run_arguments(self, parser):
        add_map_arguments(parser)
        parser.add_argument('--samples', type=int,
                            help='Sampled points per scale')
        parser.add_argument('--scales', type=int, nargs='+',
                            help='Scales d to search, smallest first')
        parser.add_argument('--horizons', type=int, nargs='+',
                            help='Averaging horizons N')
        parser.add_argument('--k', type=int, help='Fiber rank k in [2, 22]')

    def run(self, data, writer):
        search = pinching_search(
            data['params'], data['samples'], scales=data['scales'],
            horizons=data['horizons'], seed=data['seed'], jobs=data['jobs'],
            chunk_size=settings.DYNLAB['CHUNK_SIZE'],
        )
        writer.write_csv(
            'pinching.csv', ('d', 'horizon', 'fraction', 'worst_ratio'),
            [
                (report.d, horizon, fraction, worst)
                for report in search.reports
                for horizon, fraction, worst in zip(
                    report.horizons, report.fractions, report.worst_ratios
                )
            ],
        )
        summary = {
            'smallest': list(search.smallest) if search.passed else None,
            'reports': [report.as_dict() for report in search.reports],
            'failures': [],
        }
        if not search.passed:
            summary['failures'].append(
                f'No scale in {sorted(data["scales"])} pinches every '
                f'sample; worst offenders are listed in the report'
            )
            return summary

        report = search.reports[-1]
        k = data['k']
        A = SkewParams(k=k, base=data['params']).fiber_automorphism()
        star = verify_star(A, (1, k - 2, 1), report.m_f, report.norm_Df)
        rates = (star.lambda_s, star.mu_s, star.lambda_u, star.mu_u)
        domination = domination_check((report.m_f, report.norm_Df), rates)
        summary['star'] = star.as_dict()
        summary['domination'] = asdict(domination)
        summary['failures'].extend(star.failures)
        if not domination.dominated:
            summary['failures'].append('Fiber rates do not dominate the base')
        return summary
