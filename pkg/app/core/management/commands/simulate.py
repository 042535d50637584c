"""
Django command writing orbits of the base map or of the skew product
"""
import numpy as np

from core.management.labcommand import (
    LabCommand,
    add_map_arguments,
    add_skew_arguments,
    skew_point,
)
from core.serializers import SimulateConfigSerializer
from dyncore.maps import orbit
from skewprod.model import SkewSystem


BASE_COLUMNS = ('x1', 'y1', 'x2', 'y2')


class Command(LabCommand):
    help = (
        'Orbits of the perturbed torus map B_{eps,d} (+) B_{eps,d} on T^4, '
        'or with --k of the skew product F(x, y) = (f(x), B^2 y1 + '
        'alpha(x), y2 + beta(x) + omega); writes orbit.csv.'
    )
    serializer_class = SimulateConfigSerializer
    headline = ('steps', 'final_point')

    def add_run_arguments(self, parser):
        add_map_arguments(parser)
        add_skew_arguments(parser)
        parser.add_argument('--steps', type=int, help='Number of iterates')

    def run(self, data, writer):
        steps = data['steps']
        skew = data['skew']
        if skew is None:
            path = orbit(data['params'], data['start'], steps)
            header = ('n', *BASE_COLUMNS)
        else:
            system = SkewSystem(skew)
            path = np.empty((steps + 1, skew.dim))
            path[0] = skew_point(data).as_array()
            for step in range(steps):
                path[step + 1] = system.apply(path[step])
            fiber = tuple(f'fiber_{index + 1}' for index in range(skew.k))
            header = ('n', *BASE_COLUMNS, *fiber)
        writer.write_csv(
            'orbit.csv', header,
            ((n, *point) for n, point in enumerate(path.tolist())),
        )
        return {
            'steps': steps,
            'final_point': path[-1].tolist(),
            'failures': [],
        }
