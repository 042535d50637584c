"""
Django command for Birkhoff averages of fiber characters
"""
from core.management.labcommand import (
    LabCommand,
    add_map_arguments,
    add_skew_arguments,
    skew_point,
)
from core.serializers import ErgodicityConfigSerializer
from skewprod.ergodicity import Verdict, birkhoff_characters


def character_label(m):
    return '_'.join(str(value) for value in m)


class Command(LabCommand):
    help = (
        'Ergodicity diagnostics of the skew product rotated by omega: '
        'running Birkhoff averages of exp(2 pi i <m, y2>) for each '
        'character m, with a decay verdict; writes one ergodicity CSV per '
        'character.'
    )
    serializer_class = ErgodicityConfigSerializer
    headline = ('verdicts',)

    def add_run_arguments(self, parser):
        add_map_arguments(parser)
        add_skew_arguments(parser)
        parser.add_argument('--character', dest='characters', type=int,
                            nargs='+', action='append',
                            help='Character m (k - 2 integers); repeatable')
        parser.add_argument('--n', type=int, help='Orbit length')

    def run(self, data, writer):
        reports = birkhoff_characters(
            data['skew'], data['characters'], skew_point(data), data['n'],
            seed=data['seed'],
        )
        verdicts = {}
        failures = []
        for report in reports:
            label = character_label(report.character)
            writer.write_csv(f'ergodicity_{label}.csv',
                             ('n', 're_avg', 'im_avg', 'abs_avg'),
                             report.trace_rows())
            verdicts[label] = report.verdict.value
            if any(report.character) \
                    and report.verdict is not Verdict.DECAYING:
                failures.append(
                    f'Character {list(report.character)} is '
                    f'{report.verdict.value}'
                )
        return {
            'omega': list(data['skew'].omega),
            'verdicts': verdicts,
            'characters': [report.as_dict() for report in reports],
            'failures': failures,
        }
