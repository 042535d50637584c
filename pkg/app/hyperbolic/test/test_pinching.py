"""
Tests for the pinching report and search
"""
from unittest.mock import patch

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import PinchingFailure
from dyncore.bump import BumpProfile
from dyncore.maps import PerturbedMapParams
from hyperbolic.pinching import (
    PinchingReport,
    pinching_check,
    pinching_score,
    pinching_search,
    require_pinching,
)
from metric.norms import MetricSpec


LAMBDA = 9 + 4 * np.sqrt(5)


def create_setup(epsilon=0.05, d=4, direction=(8, 5)):
    """Create and return (params, spec)"""
    bump = BumpProfile(epsilon=epsilon, d=d)
    params = PerturbedMapParams(bump=bump, direction=direction)
    return params, MetricSpec.for_params(params)


def create_report(d=1, fractions=(0.5, 1.0), worst=(400.0, 300.0)):
    return PinchingReport(
        d=d, epsilon=0.05, lam=LAMBDA, sample_count=10,
        horizons=(1, 2), fractions=fractions, worst_ratios=worst,
        transitions={}, collar_K=1.0, m_f=0.05, norm_Df=18.0,
    )


class PinchingCheckTests(SimpleTestCase):
    """Test the sampled pinching report"""

    def test_score(self):
        """Test the score is negative strictly inside the window"""
        self.assertLess(pinching_score(1.0, LAMBDA), 0)
        self.assertLess(pinching_score(LAMBDA, LAMBDA), 0)
        self.assertGreaterEqual(pinching_score(LAMBDA ** 2, LAMBDA), -1e-12)
        self.assertGreater(pinching_score(LAMBDA ** -3, LAMBDA), 0)

    def test_linear_map_good_region(self):
        """Test eps = 0 never has a G -> G offender"""
        params, spec = create_setup(epsilon=0.0, d=1)
        report = pinching_check(spec, params, 64, horizons=(1,),
                                blowup_fraction=0.0)
        self.assertEqual(report.sample_count, 64)
        for offender in report.offenders:
            self.assertNotEqual((offender.tag, offender.next_tag),
                                ('G', 'G'))
        low, high, _ = report.transitions['G->G']
        self.assertGreater(low, 1 / (LAMBDA * 1.001))
        self.assertLess(high, LAMBDA * 1.001)

    def test_report_contents(self):
        """Test fractions, extrema and blow-up samples are reported"""
        params, spec = create_setup()
        report = pinching_check(spec, params, 48, horizons=(1, 4),
                                blowup_fraction=0.5, chunk_size=16)
        self.assertEqual(report.horizons, (1, 4))
        self.assertEqual(len(report.fractions), 2)
        self.assertTrue(all(0 <= value <= 1 for value in report.fractions))
        self.assertIn('V->V', report.transitions)
        self.assertLessEqual(report.m_f, report.norm_Df)
        self.assertGreaterEqual(report.collar_K, 1.0)
        self.assertEqual(report.as_dict()['d'], 4)

    def test_deterministic_across_jobs(self):
        """Test one worker and two workers give the same report"""
        params, spec = create_setup()
        serial = pinching_check(spec, params, 32, horizons=(1, 2), seed=7,
                                chunk_size=8, jobs=1)
        parallel = pinching_check(spec, params, 32, horizons=(1, 2), seed=7,
                                  chunk_size=8, jobs=2)
        self.assertEqual(serial.fractions, parallel.fractions)
        self.assertEqual(serial.worst_ratios, parallel.worst_ratios)
        self.assertEqual(serial.offenders, parallel.offenders)


class RequirePinchingTests(SimpleTestCase):
    """Test the failure report"""

    def test_passing_horizon(self):
        """Test the smallest fully pinched horizon is reported"""
        report = create_report()
        self.assertEqual(report.passing_horizon, 2)
        self.assertIs(require_pinching(report), report)

    def test_failure_carries_worst_ratio(self):
        """Test PinchingFailure carries the worst ratio"""
        report = create_report(fractions=(0.5, 0.9))
        with self.assertRaises(PinchingFailure) as context:
            require_pinching(report)
        self.assertEqual(context.exception.worst_ratio, 300.0)


class PinchingSearchTests(SimpleTestCase):
    """Test the scale search"""

    @patch('hyperbolic.pinching.pinching_check')
    def test_stops_at_first_pass(self, patched_check):
        """Test the search returns the smallest passing (d, N)"""
        def fake_check(spec, params, sample_count, horizons, **kwargs):
            passing = spec.d >= 4
            return create_report(
                d=spec.d, fractions=(0.9, 1.0 if passing else 0.9)
            )

        patched_check.side_effect = fake_check
        params, _ = create_setup(d=1)
        search = pinching_search(params, 10, scales=(1, 2, 4, 8))
        self.assertTrue(search.passed)
        self.assertEqual(search.smallest, (4, 2))
        self.assertEqual(len(search.reports), 3)
        self.assertEqual(patched_check.call_count, 3)

    @patch('hyperbolic.pinching.pinching_check')
    def test_reports_failure(self, patched_check):
        """Test a search without a pass keeps every report"""
        patched_check.return_value = create_report(fractions=(0.5, 0.5))
        params, _ = create_setup(d=1)
        search = pinching_search(params, 10, scales=(1, 2))
        self.assertFalse(search.passed)
        self.assertEqual(len(search.reports), 2)
