"""
Tests for the acceptance suite checks
"""
import tempfile
from pathlib import Path
from unittest.mock import patch

import numpy as np

from django.test import SimpleTestCase

from bundlealg.intmat import IntMat
from core import acceptance
from core.acceptance import (
    Criterion,
    check_bundles,
    check_charts,
    check_eigenvalues,
    check_graph_transform,
    check_ledger,
    onto_by_minors,
    run_acceptance,
)


LEDGER_TEXT = '## Known discrepancies\n\nQ1: determinant.\nQ2: alpha.\n'


class CriterionTests(SimpleTestCase):
    """Test the fast criteria directly"""

    def test_eigenvalues(self):
        criterion = check_eigenvalues()
        self.assertTrue(criterion.passed, criterion.details)

    def test_charts(self):
        criterion = check_charts(np.random.default_rng(1), 100)
        self.assertTrue(criterion.passed, criterion.details)
        self.assertEqual(criterion.details['eta_modulus'], [0.5, 0.5])

    def test_graph_transform(self):
        criterion = check_graph_transform(np.random.default_rng(2), 10)
        self.assertTrue(criterion.passed, criterion.details)
        self.assertEqual(criterion.details['converged'], 10)

    def test_bundles(self):
        criterion = check_bundles(np.random.default_rng(3), 30)
        self.assertTrue(criterion.passed, criterion.details)

    def test_onto_by_minors(self):
        self.assertTrue(onto_by_minors(IntMat([[2, 3]])))
        self.assertFalse(onto_by_minors(IntMat([[2, 4]])))
        self.assertTrue(onto_by_minors(IntMat([[1, 0, 0], [0, 2, 3]])))
        self.assertFalse(onto_by_minors(IntMat([[1, 0], [0, 1], [1, 1]])))


class LedgerTests(SimpleTestCase):
    """Test the known-discrepancy ledger"""

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.docs = Path(directory.name)

    def test_documented(self):
        """Test the derived facts hold and both documents flag them"""
        for name in ('README.md', 'DESIGN.md'):
            (self.docs / name).write_text(LEDGER_TEXT)
        criterion = check_ledger(self.docs)
        self.assertTrue(criterion.passed, criterion.details)
        self.assertAlmostEqual(criterion.details['eigenvalue_product'], 1.15)
        self.assertGreater(criterion.details['verbatim_residual'], 1e-3)

    def test_missing_documentation(self):
        """Test a document without the ledger fails the check"""
        (self.docs / 'README.md').write_text(LEDGER_TEXT)
        (self.docs / 'DESIGN.md').write_text('Q1 only\n')
        criterion = check_ledger(self.docs)
        self.assertFalse(criterion.passed)
        self.assertIn('DESIGN.md: Known discrepancies',
                      criterion.details['missing_documentation'])
        self.assertIn('DESIGN.md: Q2',
                      criterion.details['missing_documentation'])

    def test_repository_documents(self):
        """Test the repository's own README and DESIGN keep the ledger"""
        root = Path(acceptance.__file__).resolve().parents[2]
        criterion = check_ledger(root)
        self.assertEqual(criterion.details['missing_documentation'], [])


class RunAcceptanceTests(SimpleTestCase):
    """Test the suite driver with the slow criteria stubbed"""

    @patch('core.acceptance.check_ergodicity')
    @patch('core.acceptance.check_pinching')
    @patch('core.acceptance.check_lyapunov')
    @patch('core.acceptance.check_metric')
    def test_order_and_sizes(self, metric, lyapunov, pinching, ergodicity):
        for name, stub in (('metric', metric), ('lyapunov', lyapunov),
                           ('pinching', pinching),
                           ('ergodicity', ergodicity)):
            stub.return_value = Criterion(name, True)
        with tempfile.TemporaryDirectory() as directory:
            for name in ('README.md', 'DESIGN.md'):
                (Path(directory) / name).write_text(LEDGER_TEXT)
            results = run_acceptance(quick=True, seed=4, docs_dir=directory)
        self.assertEqual([result.name for result in results], [
            'eigenvalues', 'charts', 'metric', 'lyapunov', 'pinching',
            'bundles', 'graph_transform', 'ergodicity', 'discrepancy_ledger',
        ])
        self.assertTrue(all(result.passed for result in results))
        lyapunov.assert_called_once_with(acceptance.QUICK.lyapunov_iters)
        self.assertEqual(pinching.call_args.args[1],
                         acceptance.QUICK.pinching_samples)
