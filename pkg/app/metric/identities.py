"""
Sampled checks of the metric identities on the exceptional curve
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from kummer.atlas import ChartId, KummerPoint, realify, transition_jacobian
from metric.norms import cstar_ratio, k_norm, q_factor


logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-12
V_RANGE = (0.01, 100.0)
TRANSITION_SAMPLES = 1000


@dataclass(frozen=True)
class MetricCheckReport:
    mu: float
    samples: int
    q_error: float
    cstar_min: float
    cstar_max: float
    transition_error: float

    @property
    def cstar_inside(self):
        return (self.cstar_min >= self.mu ** -2 * (1 - IDENTITY_TOL)
                and self.cstar_max <= self.mu ** 2 * (1 + IDENTITY_TOL))

    @property
    def failures(self):
        failures = []
        if self.q_error > IDENTITY_TOL:
            failures.append('Q(1/v) != |v|^4 Q(v)')
        if not self.cstar_inside:
            failures.append('cstar ratio outside [mu^-2, mu^2]')
        if self.transition_error > IDENTITY_TOL:
            failures.append('k depends on the chart')
        return failures

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return {
            'mu': self.mu,
            'samples': self.samples,
            'q_error': self.q_error,
            'cstar_min': self.cstar_min,
            'cstar_max': self.cstar_max,
            'transition_error': self.transition_error,
            'passed': self.passed,
            'failures': self.failures,
        }


def _random_v(rng, count, low, high):
    return rng.uniform(low, high, count) * np.exp(
        2j * np.pi * rng.random(count)
    )


def verify_metric_identities(mu, samples, seed=0):
    """Relative Q error, cstar extrema and the psi1/psi2 mismatch of k"""
    rng = np.random.default_rng(seed)
    v = _random_v(rng, samples, *V_RANGE)
    q_error = float(np.max(np.abs(
        q_factor(1 / v) / (np.abs(v) ** 4 * q_factor(v)) - 1
    )))
    ratio_ev, ratio_ew = cstar_ratio(_random_v(rng, samples, 0.0, 50.0), mu)
    ratios = np.concatenate([ratio_ev, ratio_ew])

    transition_error = 0.0
    for value in _random_v(rng, min(samples, TRANSITION_SAMPLES), 0.5, 2.0):
        psi1 = KummerPoint.blowup(ChartId('psi1', 0), value, 0j)
        psi2 = KummerPoint.blowup(ChartId('psi2', 0), 1 / value, 0j)
        components = rng.normal(size=4)
        pulled = realify(transition_jacobian(value, 0j)) @ components
        mismatch = abs(k_norm(psi1, components) / k_norm(psi2, pulled) - 1)
        transition_error = max(transition_error, mismatch)

    report = MetricCheckReport(
        mu=float(mu),
        samples=int(samples),
        q_error=q_error,
        cstar_min=float(ratios.min()),
        cstar_max=float(ratios.max()),
        transition_error=transition_error,
    )
    logger.info('Metric identities at mu=%s: %s', mu,
                'pass' if report.passed else report.failures)
    return report
