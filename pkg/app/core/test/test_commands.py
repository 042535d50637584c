"""
Test django management commands.
"""
import csv
import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from core.acceptance import Criterion
from core.models import ExperimentRun
from hyperbolic.pinching import PinchingReport, PinchingSearch


def create_pinching_report(d=4, fractions=(0.9, 1.0), m_f=0.05,
                           norm_Df=18.0):
    return PinchingReport(
        d=d, epsilon=0.05, lam=17.94, sample_count=100, horizons=(1, 2),
        fractions=fractions, worst_ratios=(400.0, 300.0),
        transitions={'G->G': (0.06, 17.0, 100)}, collar_K=1.0,
        m_f=m_f, norm_Df=norm_Df,
    )


class CommandTestCase(SimpleTestCase):
    """Run commands into a temporary output directory"""

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.output = Path(directory.name)

    def call(self, name, **options):
        out = StringIO()
        call_command(name, output=str(self.output), stdout=out, **options)
        return out.getvalue()

    def call_failing(self, name, **options):
        with self.assertRaises(CommandError) as context:
            self.call(name, **options)
        return context.exception

    def read_summary(self, name):
        return json.loads((self.output / f'{name}.json').read_text())

    def read_csv(self, name):
        with (self.output / name).open() as handle:
            return list(csv.reader(handle))


class BundleCommandTests(CommandTestCase):
    """Test the bundle command"""

    def test_kummer_configuration(self):
        """Test A = B2, k = 2, m = 22 passes both checks"""
        out = self.call('bundle', A='B2', k=2, m=22)
        self.assertIn('amap_exists=true', out)
        self.assertIn('simply_connected=true', out)
        summary = self.read_summary('bundle')['summary']
        self.assertEqual(summary['exit_code'], 0)
        self.assertEqual(summary['H']['k'], 2)
        self.assertEqual(summary['A']['rows'], [[233, 144], [144, 89]])

    def test_identity_has_no_amap(self):
        """Test A = I fails with exit code 1 after writing the report"""
        error = self.call_failing('bundle', A='I', k=3)
        self.assertEqual(error.returncode, 1)
        summary = self.read_summary('bundle')['summary']
        self.assertFalse(summary['amap_exists'])
        self.assertEqual(summary['exit_code'], 1)

    def test_explicit_matrices(self):
        """Test H = 2 I is not onto"""
        error = self.call_failing('bundle', A=[[1, 0], [0, 1]], k=2, m=2,
                                  H=[[2, 0], [0, 2]], F=[[1, 0], [0, 1]])
        self.assertEqual(error.returncode, 1)
        summary = self.read_summary('bundle')['summary']
        self.assertTrue(summary['amap_exists'])
        self.assertEqual(summary['invariant_factors'], [2, 2])

    def test_config_errors(self):
        """Test bad shapes and a lone H exit with code 2"""
        error = self.call_failing('bundle', k=2, m=5)
        self.assertEqual(error.returncode, 2)
        self.assertIn('m:', str(error))
        error = self.call_failing('bundle', k=2, m=2, H=[[1, 0], [0, 1]])
        self.assertEqual(error.returncode, 2)
        self.assertIn('F:', str(error))
        error = self.call_failing('bundle', A=[[2, 0], [0, 1]], k=2)
        self.assertEqual(error.returncode, 2)


class SimulateCommandTests(CommandTestCase):
    """Test orbit output"""

    def test_torus_orbit(self):
        self.call('simulate', steps=10)
        rows = self.read_csv('orbit.csv')
        self.assertEqual(rows[0], ['n', 'x1', 'y1', 'x2', 'y2'])
        self.assertEqual(len(rows), 12)
        self.assertEqual(rows[1], ['0', '0.1234', '0.5678', '0.9012',
                                   '0.3456'])

    def test_skew_orbit(self):
        """Test k = 3 adds three fiber columns"""
        self.call('simulate', steps=5, k=3, omega=['1/3'])
        rows = self.read_csv('orbit.csv')
        self.assertEqual(len(rows[0]), 1 + 4 + 3)
        self.assertEqual(rows[0][-1], 'fiber_3')

    def test_byte_identical(self):
        """Test the same config writes the same bytes"""
        self.call('simulate', steps=50, epsilon=0.1, k=4)
        first = (self.output / 'orbit.csv').read_bytes()
        self.call('simulate', steps=50, epsilon=0.1, k=4)
        self.assertEqual((self.output / 'orbit.csv').read_bytes(), first)


class LyapunovCommandTests(CommandTestCase):
    """Test the Lyapunov command"""

    def test_torus_spectrum(self):
        """Test the trace CSV header and the sum check"""
        out = self.call('lyapunov', epsilon=0.0, iters=2000)
        self.assertIn('exponents=', out)
        rows = self.read_csv('lyapunov.csv')
        self.assertEqual(rows[0], ['iteration_block', 'exponent_1',
                                   'exponent_2', 'exponent_3', 'exponent_4'])
        self.assertEqual(rows[-1][0], '2000')
        summary = self.read_summary('lyapunov')['summary']
        self.assertAlmostEqual(summary['exponents'][0], 2.8873, places=2)
        self.assertLess(
            abs(summary['exponent_sum'] - summary['log_jacobian_mean']), 1e-6
        )

    def test_skew_needs_long_orbit(self):
        error = self.call_failing('lyapunov', k=2, iters=2000)
        self.assertEqual(error.returncode, 2)
        self.assertIn('iters', str(error))

    def test_byte_identical(self):
        self.call('lyapunov', epsilon=0.1, iters=1000, seed=3)
        first = (self.output / 'lyapunov.csv').read_bytes()
        self.call('lyapunov', epsilon=0.1, iters=1000, seed=3)
        self.assertEqual((self.output / 'lyapunov.csv').read_bytes(), first)


class VerifyMetricCommandTests(CommandTestCase):
    """Test the metric identity command and config handling"""

    def test_passes(self):
        out = self.call('verify_metric', mu=1.5, samples=500)
        self.assertIn('passed=true', out)

    def test_invalid_mu(self):
        error = self.call_failing('verify_metric', mu=1.0)
        self.assertEqual(error.returncode, 2)
        self.assertIn('mu: mu must exceed 1', str(error))

    def test_flags_override_config_file(self):
        """Test file values are read and flags win"""
        config = self.output / 'config.json'
        config.write_text(json.dumps({'mu': 2.0, 'samples': 300}))
        self.call('verify_metric', config=str(config), samples=100)
        summary = self.read_summary('verify_metric')
        self.assertEqual(summary['config']['mu'], 2.0)
        self.assertEqual(summary['summary']['samples'], 100)

    def test_bad_config_file(self):
        """Test malformed JSON and unknown fields exit with code 2"""
        config = self.output / 'config.json'
        config.write_text('{"mu": 1.5,\n "samples": }')
        error = self.call_failing('verify_metric', config=str(config))
        self.assertEqual(error.returncode, 2)
        self.assertIn('line 2', str(error))
        config.write_text(json.dumps({'nu': 1.5}))
        error = self.call_failing('verify_metric', config=str(config))
        self.assertEqual(error.returncode, 2)
        self.assertIn('nu', str(error))


class VerifyPHCommandTests(CommandTestCase):
    """Test the partial hyperbolicity command with a stubbed search"""

    @patch('core.management.commands.verify_ph.pinching_search')
    def test_passing_search(self, patched_search):
        report = create_pinching_report()
        patched_search.return_value = PinchingSearch((report,), (4, 2))
        out = self.call('verify_ph', epsilon=0.05, direction=[8, 5],
                        samples=100, scales=[4])
        self.assertIn('smallest=[4, 2]', out)
        summary = self.read_summary('verify_ph')['summary']
        self.assertTrue(summary['star']['pass'])
        self.assertTrue(summary['domination']['dominated'])
        rows = self.read_csv('pinching.csv')
        self.assertEqual(rows[0], ['d', 'horizon', 'fraction',
                                   'worst_ratio'])
        self.assertEqual(len(rows), 3)

    @patch('core.management.commands.verify_ph.pinching_search')
    def test_failing_search(self, patched_search):
        """Test no passing scale exits with code 1"""
        report = create_pinching_report(fractions=(0.5, 0.9))
        patched_search.return_value = PinchingSearch((report,))
        error = self.call_failing('verify_ph', samples=100, scales=[4])
        self.assertEqual(error.returncode, 1)
        summary = self.read_summary('verify_ph')['summary']
        self.assertIsNone(summary['smallest'])

    @patch('core.management.commands.verify_ph.pinching_search')
    def test_center_fiber(self, patched_search):
        """Test k = 4 splits diag(B^2, I_2) as (1, 2, 1)"""
        patched_search.return_value = PinchingSearch(
            (create_pinching_report(),), (4, 2)
        )
        self.call('verify_ph', samples=100, scales=[4], k=4)
        star = self.read_summary('verify_ph')['summary']['star']
        self.assertAlmostEqual(star['lambda_c'], 1.0)
        self.assertAlmostEqual(star['mu_c'], 1.0)


class ErgodicityCommandTests(CommandTestCase):
    """Test Birkhoff average output"""

    def test_trivial_character(self):
        """Test m = 0 is reported but never counted as a failure"""
        out = self.call('ergodicity', k=3, n=10 ** 4, characters=[[0]])
        self.assertIn('"0": "non-decaying"', out)
        rows = self.read_csv('ergodicity_0.csv')
        self.assertEqual(rows[0], ['n', 're_avg', 'im_avg', 'abs_avg'])
        self.assertEqual(rows[-1], ['10000', '1.0', '0.0', '1.0'])

    def test_character_length(self):
        error = self.call_failing('ergodicity', k=4, n=10 ** 4,
                                  characters=[[1]])
        self.assertEqual(error.returncode, 2)
        self.assertIn('characters', str(error))

    def test_short_orbit(self):
        error = self.call_failing('ergodicity', k=3, n=100)
        self.assertEqual(error.returncode, 2)


class ReportAllCommandTests(CommandTestCase):
    """Test the acceptance command with stubbed criteria"""

    @patch('core.management.commands.report_all.run_acceptance')
    def test_all_pass(self, patched_run):
        patched_run.return_value = [Criterion('eigenvalues', True),
                                    Criterion('charts', True)]
        out = self.call('report_all', quick=True)
        self.assertIn('passed_count=2', out)
        self.assertTrue(patched_run.call_args.kwargs['quick'])

    @patch('core.management.commands.report_all.run_acceptance')
    def test_failure_exit_code(self, patched_run):
        patched_run.return_value = [Criterion('eigenvalues', True),
                                    Criterion('charts', False)]
        error = self.call_failing('report_all')
        self.assertEqual(error.returncode, 1)
        summary = self.read_summary('report_all')['summary']
        self.assertEqual(summary['failures'], ['charts failed'])


class RecordRunTests(TestCase):
    """Test --record archives the run"""

    def test_record(self):
        with tempfile.TemporaryDirectory() as directory:
            call_command('verify_metric', samples=200, output=directory,
                         record=True, seed=11, stdout=StringIO())
        run = ExperimentRun.objects.get()
        self.assertEqual(run.command, 'verify_metric')
        self.assertEqual(run.seed, 11)
        self.assertEqual(run.exit_code, 0)
        self.assertTrue(run.summary['passed'])
        self.assertEqual(run.config['samples'], 200)

    def test_failed_run_is_recorded(self):
        with tempfile.TemporaryDirectory() as directory:
            with self.assertRaises(CommandError):
                call_command('bundle', A='I', output=directory, record=True,
                             stdout=StringIO())
        self.assertEqual(ExperimentRun.objects.get().exit_code, 1)
