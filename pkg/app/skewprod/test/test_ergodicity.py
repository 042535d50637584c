"""
Tests for Birkhoff averages of fiber characters
"""
import math
from fractions import Fraction

import numpy as np
from scipy.special import j0

from django.test import SimpleTestCase

from dyncore.maps import PerturbedMapParams
from skewprod.ergodicity import (
    ErgodicityReport,
    Verdict,
    birkhoff_character,
    birkhoff_characters,
    decay_verdict,
    rotation_bound,
)
from skewprod.model import SkewParams, SkewPoint, coboundary_beta, rotate
from skewprod.trig import COS, TrigPolynomial


START = SkewPoint(np.array([0.1234, 0.5678, 0.9012, 0.3456]),
                  np.array([0.31, 0.77]), np.array([0.2, 0.45]))
IRRATIONAL = (math.sqrt(2) - 1, math.sqrt(3) - 1)


def create_point(rank):
    return SkewPoint(START.x, START.y1, START.y2[:rank])


class BirkhoffTests(SimpleTestCase):
    """Test the character averages"""

    def test_trivial_character(self):
        """Test m = 0 averages to exactly 1"""
        params = SkewParams.standard(3)
        report = birkhoff_character(params, (0,), create_point(1), 10 ** 4)
        self.assertIsInstance(report, ErgodicityReport)
        self.assertTrue(all(value == 1 for value in report.averages))
        self.assertEqual(report.verdict, Verdict.NON_DECAYING)

    def test_pure_rotation(self):
        """Test beta = 0 with an irrational rotation meets the sum bound"""
        params = rotate(SkewParams(k=3), [IRRATIONAL[0]])
        n = 10 ** 4
        for m in ((1,), (3,), (-2,)):
            report = birkhoff_character(params, m, create_point(1), n)
            bound = rotation_bound(m, params.omega, n)
            self.assertLessEqual(abs(report.final_average), bound + 1e-12)
            self.assertEqual(report.verdict, Verdict.DECAYING)

    def test_coboundary_does_not_decay(self):
        """Test beta = xi o f - xi keeps the average near J0(pi / 4)"""
        xi = TrigPolynomial(4, 1, [((1, 0, 0, 0), COS, [Fraction(1, 8)])])
        base = PerturbedMapParams()
        params = SkewParams(k=3, base=base, beta=coboundary_beta(xi, base))
        self.assertEqual(params.beta.mean, (0,))
        report = birkhoff_character(params, (1,), create_point(1), 10 ** 4)
        self.assertEqual(report.verdict, Verdict.NON_DECAYING)
        self.assertLess(abs(abs(report.final_average) - j0(np.pi / 4)), 0.1)

    def test_rotated_configuration_decays(self):
        """Test omega != 0 makes five nonzero characters decay"""
        params = rotate(SkewParams.standard(4), IRRATIONAL)
        characters = [(1, 0), (0, 1), (1, 1), (2, -1), (1, -2)]
        reports = birkhoff_characters(params, characters, START, 2 * 10 ** 4)
        self.assertEqual([report.character for report in reports],
                         characters)
        for report in reports:
            self.assertEqual(report.verdict, Verdict.DECAYING,
                             report.character)
            self.assertTrue(all(abs(value) <= 1 + 1e-12
                                for value in report.averages))
        integral = reports[0].beta_integral
        np.testing.assert_allclose(integral, IRRATIONAL, atol=1e-3)

    def test_trace_rows(self):
        params = SkewParams.standard(3)
        report = birkhoff_character(params, (1,), create_point(1), 10 ** 4)
        rows = report.trace_rows()
        self.assertEqual(rows[-1][0], 10 ** 4)
        self.assertEqual(len(rows[-1]), 4)
        self.assertAlmostEqual(rows[-1][3], abs(report.final_average))

    def test_validation(self):
        """Test short orbits and wrong character sizes are rejected"""
        params = SkewParams.standard(3)
        with self.assertRaises(ValueError):
            birkhoff_character(params, (1,), create_point(1), 1000)
        with self.assertRaises(ValueError):
            birkhoff_character(params, (1, 0), create_point(1), 10 ** 4)


class DecayVerdictTests(SimpleTestCase):
    """Test the final-decade rule"""

    def test_verdicts(self):
        steps = [50, 500, 1000]
        self.assertEqual(decay_verdict(steps, [0.9, 0.1, 0.1]),
                         Verdict.DECAYING)
        self.assertEqual(decay_verdict(steps, [0.01, 0.5, 0.5]),
                         Verdict.NON_DECAYING)
        self.assertEqual(decay_verdict(steps, [0.1, 0.1, 0.3]),
                         Verdict.INCONCLUSIVE)

    def test_rotation_bound(self):
        self.assertEqual(rotation_bound((1,), (0.25,), 10), 0.2)
        self.assertEqual(rotation_bound((2,), (0.5,), 10), math.inf)
