"""
Shared base for the laboratory commands.

A command declares a DRF serializer for its run configuration and a
``run`` method returning a summary dict. The base merges the JSON config
file with the flags, validates, runs, writes ``<command>.json`` and maps
the outcome to the exit code: 0 when every check passed, 1 when a check
failed (after the report is written) and 2 for configuration errors.
"""
import argparse
import json
import logging

import numpy as np

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import LabError
from core.models import ExperimentRun
from core.reports import ReportWriter, plain_json
from skewprod.model import SkewPoint


logger = logging.getLogger(__name__)

CHECK_FAILED = 1
CONFIG_ERROR = 2


def json_argument(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise argparse.ArgumentTypeError(f'invalid JSON: {error.msg}')


def matrix_argument(text):
    """A named matrix ('B2', 'I') or JSON rows"""
    if text in ('B2', 'I'):
        return text
    return json_argument(text)


def format_errors(errors, prefix=''):
    """Flatten nested serializer errors into 'field: message' strings"""
    if isinstance(errors, dict):
        return [
            message
            for key, value in errors.items()
            for message in format_errors(
                value, f'{prefix}.{key}' if prefix else str(key)
            )
        ]
    if isinstance(errors, list):
        return [
            message
            for value in errors
            for message in format_errors(value, prefix)
        ]
    return [f'{prefix}: {errors}' if prefix else str(errors)]


def add_map_arguments(parser):
    """Flags of the perturbed torus map"""
    parser.add_argument('--epsilon', type=float,
                        help='Perturbation size eps >= 0')
    parser.add_argument('--d', type=int, help='Bump scale d >= 1')
    parser.add_argument('--delta', type=float,
                        help='Linear zone half-width, in (0, 1/8)')
    parser.add_argument('--kind', help='Bump profile kind')
    parser.add_argument('--direction', type=int, nargs=2,
                        help='Perturbation direction (a, b)')
    parser.add_argument('--B', dest='B', type=json_argument,
                        help='2x2 unimodular matrix as JSON rows')


def add_skew_arguments(parser):
    """Flags of the skew product and its starting point"""
    parser.add_argument('--k', type=int, help='Fiber rank k in [2, 22]')
    parser.add_argument('--omega', nargs='+',
                        help='Rotation of the translation fiber; '
                             'numbers or fractions such as 1/3')
    parser.add_argument('--start', type=float, nargs=4,
                        help='Base point (x1, y1, x2, y2)')
    parser.add_argument('--fiber', type=float, nargs='+',
                        help='Fiber point (k coordinates)')


def skew_point(data):
    """Starting point of the skew product from validated data"""
    k = data['skew'].k
    fiber = np.asarray(data.get('fiber') or np.zeros(k), dtype=float)
    return SkewPoint(np.asarray(data['start'], dtype=float),
                     fiber[:2], fiber[2:])


class LabCommand(BaseCommand):
    """Configure, validate, run and report one laboratory experiment"""
    serializer_class = None
    headline = ()

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def add_arguments(self, parser):
        parser.add_argument(
            '--config',
            help='JSON file with run parameters; flags override its values',
        )
        parser.add_argument('--seed', type=int, help='Root random seed')
        parser.add_argument('--output', help='Directory for report files')
        parser.add_argument('--jobs', type=int,
                            help='Worker processes for sampled ensembles')
        parser.add_argument('--record', action='store_true',
                            help='Archive the run as an ExperimentRun')
        self.add_run_arguments(parser)

    def add_run_arguments(self, parser):
        """Command flags; their dest names match the serializer fields"""

    def load_config(self, options):
        """The JSON config file overridden by every flag that was given"""
        config = {}
        path = options.get('config')
        if path:
            try:
                with open(path) as handle:
                    config = json.load(handle)
            except OSError as error:
                raise CommandError(
                    f'Cannot read config {path}: {error.strerror}',
                    returncode=CONFIG_ERROR,
                )
            except json.JSONDecodeError as error:
                raise CommandError(
                    f'{path}: line {error.lineno}, column {error.colno}: '
                    f'{error.msg}',
                    returncode=CONFIG_ERROR,
                )
            if not isinstance(config, dict):
                raise CommandError(f'{path}: expected a JSON object',
                                   returncode=CONFIG_ERROR)
        fields = self.serializer_class().fields
        unknown = sorted(set(config) - set(fields))
        if unknown:
            raise CommandError(
                f'{path}: unknown fields {", ".join(unknown)}',
                returncode=CONFIG_ERROR,
            )
        for name in fields:
            if options.get(name) is not None:
                config[name] = options[name]
        return config

    def validate(self, config):
        serializer = self.serializer_class(data=config)
        if not serializer.is_valid():
            raise CommandError(
                'Invalid config: ' + '; '.join(format_errors(
                    serializer.errors
                )),
                returncode=CONFIG_ERROR,
            )
        return serializer

    def run(self, data, writer):
        """Run the experiment; return a summary with a 'failures' list"""
        raise NotImplementedError

    def handle(self, *args, **options):
        serializer = self.validate(self.load_config(options))
        data = serializer.validated_data
        writer = ReportWriter(data['output'])
        logger.info('Running %s with seed %d', self.command_name,
                    data['seed'])
        try:
            summary = self.run(data, writer)
        except LabError as error:
            logger.error('%s failed: %s', self.command_name, error)
            summary = {'failures': [f'{type(error).__name__}: {error}']}
        except ValueError as error:
            raise CommandError(str(error), returncode=CONFIG_ERROR)

        failures = summary.setdefault('failures', [])
        exit_code = CHECK_FAILED if failures else 0
        summary['exit_code'] = exit_code
        summary = plain_json(summary)
        config = plain_json(serializer.data)
        writer.write_json(f'{self.command_name}.json',
                          {'config': config, 'summary': summary})
        if options.get('record'):
            run = ExperimentRun.objects.create(
                command=self.command_name,
                seed=data['seed'],
                config=config,
                exit_code=exit_code,
                summary=summary,
            )
            self.stdout.write(f'Recorded {run}')

        for key in self.headline:
            self.stdout.write(f'{key}={json.dumps(summary.get(key))}')
        if failures:
            for failure in failures:
                self.stdout.write(self.style.ERROR(f'FAILED: {failure}'))
            raise CommandError(
                f'{self.command_name}: {len(failures)} check(s) failed',
                returncode=CHECK_FAILED,
            )
        self.stdout.write(self.style.SUCCESS(
            f'{self.command_name}: all checks passed'
        ))
