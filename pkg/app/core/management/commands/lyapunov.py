"""
Django command estimating Lyapunov spectra
"""
import numpy as np

from core.management.labcommand import (
    LabCommand,
    add_map_arguments,
    add_skew_arguments,
    skew_point,
)
from core.serializers import LyapunovConfigSerializer
from hyperbolic.lyapunov import TorusSystem, lyapunov_spectrum
from skewprod.model import skew_lyapunov


SUM_TOL = 1e-6


class Command(LabCommand):
    help = (
        'Lyapunov spectrum by QR re-orthonormalisation of the perturbed '
        'torus map, or with --k of the (4 + k)-dimensional skew product; '
        'checks the exponent sum against the mean log-Jacobian and writes '
        'lyapunov.csv.'
    )
    serializer_class = LyapunovConfigSerializer
    headline = ('exponents',)

    def add_run_arguments(self, parser):
        add_map_arguments(parser)
        add_skew_arguments(parser)
        parser.add_argument('--iters', type=int, help='Number of iterations')
        parser.add_argument('--transient', type=int,
                            help='Iterations discarded before averaging')

    def run(self, data, writer):
        if data['skew'] is None:
            report = lyapunov_spectrum(
                TorusSystem(data['params']), np.asarray(data['start']),
                data['iters'], transient=data['transient'],
            )
        else:
            report = skew_lyapunov(data['skew'], skew_point(data),
                                   data['iters'],
                                   transient=data['transient'])
        size = len(report.exponents)
        writer.write_csv(
            'lyapunov.csv',
            ('iteration_block',
             *(f'exponent_{index + 1}' for index in range(size))),
            report.trace_rows(),
        )
        sum_error = abs(report.exponent_sum - report.log_jacobian_mean)
        failures = []
        if sum_error > SUM_TOL:
            failures.append(
                f'Exponent sum differs from the mean log-Jacobian by '
                f'{sum_error:.3e}'
            )
        return {
            'exponents': list(report.exponents),
            'residuals': list(report.residuals),
            'exponent_sum': report.exponent_sum,
            'log_jacobian_mean': report.log_jacobian_mean,
            'iters': report.n_iters,
            'failures': failures,
        }
