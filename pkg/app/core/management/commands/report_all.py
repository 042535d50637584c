"""
Django command running the acceptance suite
"""
from django.conf import settings

from core.acceptance import run_acceptance
from core.management.labcommand import LabCommand
from core.serializers import AcceptanceConfigSerializer


class Command(LabCommand):
    help = (
        'Acceptance suite: eigenvalue anchors, blow-up chart identities, '
        'metric identities, Lyapunov anchors, the pinching search, bundle '
        'algebra, the graph transform, ergodicity diagnostics and the '
        'ledger of known discrepancies.'
    )
    serializer_class = AcceptanceConfigSerializer
    headline = ('passed_count', 'total')

    def add_run_arguments(self, parser):
        parser.add_argument('--quick', action='store_true', default=None,
                            help='Scaled-down sample sizes')

    def run(self, data, writer):
        results = run_acceptance(
            quick=data['quick'], seed=data['seed'], jobs=data['jobs'],
            docs_dir=settings.DYNLAB['DOCS_DIR'],
        )
        for criterion in results:
            style = self.style.SUCCESS if criterion.passed \
                else self.style.ERROR
            verdict = 'pass' if criterion.passed else 'FAIL'
            self.stdout.write(style(f'{criterion.name}: {verdict}'))
        return {
            'criteria': [criterion.as_dict() for criterion in results],
            'passed_count': sum(criterion.passed for criterion in results),
            'total': len(results),
            'failures': [
                f'{criterion.name} failed' for criterion in results
                if not criterion.passed
            ],
        }
