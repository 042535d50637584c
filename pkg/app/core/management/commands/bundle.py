"""
Django command for the bundle algebra over the Kummer surface
"""
from bundlealg.bundles import amap_exists, simply_connected
from bundlealg.serializers import IntMatSerializer
from core.management.labcommand import (
    LabCommand,
    json_argument,
    matrix_argument,
)
from core.serializers import BundleConfigSerializer


class Command(LabCommand):
    help = (
        'Torus bundles over the Kummer surface: checks that the fiber '
        'automorphism A admits an A-map (A H = H F for the base action F) '
        'and that the total space is simply connected (H onto, by the '
        'Smith normal form).'
    )
    serializer_class = BundleConfigSerializer
    headline = ('amap_exists', 'simply_connected')

    def add_run_arguments(self, parser):
        parser.add_argument(
            '--A', dest='A', type=matrix_argument,
            help="Fiber automorphism: 'B2' for diag(B^2, I), 'I', "
                 "or JSON rows",
        )
        parser.add_argument('--k', type=int, help='Fiber rank')
        parser.add_argument('--m', type=int,
                            help='Rank of the second cohomology of the base')
        parser.add_argument('--H', dest='H', type=json_argument,
                            help='k x m matrix as JSON rows')
        parser.add_argument('--F', dest='F', type=json_argument,
                            help='m x m base action as JSON rows')

    def run(self, data, writer):
        A, H, F = data['matrices']
        amap = amap_exists(A, H, F)
        connected = simply_connected(H)
        failures = []
        if not amap:
            failures.append('A H != H F: no A-map for this configuration')
        if not connected:
            failures.append(
                f'H is not onto; invariant factors '
                f'{list(H.invariant_factors())}'
            )
        return {
            'amap_exists': amap,
            'simply_connected': connected,
            'invariant_factors': list(H.invariant_factors()),
            'A': IntMatSerializer.describe(A),
            'H': IntMatSerializer.describe(H),
            'F': IntMatSerializer.describe(F),
            'failures': failures,
        }
