"""
Birkhoff averages of the characters exp(2 pi i <m, y2>) of the translation
fiber. Along an orbit y2_j = y2_0 + beta(x_0) + ... + beta(x_{j-1}) + j omega,
so the fiber coordinate is a cumulative sum over the base orbit.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import qmc

from dyncore.maps import orbit
from skewprod.model import BASE_DIM


logger = logging.getLogger(__name__)

MIN_STEPS = 10 ** 4
TRACE_POINTS = 100
INTEGRAL_POINTS_LOG2 = 14


class Verdict(str, Enum):
    DECAYING = 'decaying'
    NON_DECAYING = 'non-decaying'
    INCONCLUSIVE = 'inconclusive'


@dataclass(frozen=True)
class ErgodicityReport:
    character: tuple
    steps: tuple
    averages: tuple
    beta_integral: tuple
    verdict: Verdict

    @property
    def final_average(self):
        return self.averages[-1]

    def trace_rows(self):
        """(n, re_avg, im_avg, abs_avg) rows for CSV output"""
        return [(step, value.real, value.imag, abs(value))
                for step, value in zip(self.steps, self.averages)]

    def as_dict(self):
        return {
            'character': list(self.character),
            'final_abs_average': abs(self.final_average),
            'beta_integral': list(self.beta_integral),
            'verdict': self.verdict.value,
        }


def beta_integral(params, seed=0, log2_points=INTEGRAL_POINTS_LOG2):
    """Scrambled Sobol estimate of the integral of beta + omega over T^4"""
    if not params.rank:
        return ()
    sampler = qmc.Sobol(d=BASE_DIM, scramble=True, seed=seed)
    points = sampler.random_base2(log2_points)
    means = params.beta.evaluate(points).mean(axis=0) + params.omega_vector
    return tuple(float(value) for value in means)


def decay_verdict(steps, averages):
    """Compare |a_j| with j^(-1/4) over the final decade of checkpoints"""
    final = [(step, abs(value)) for step, value in zip(steps, averages)
             if step >= steps[-1] / 10]
    if all(size < step ** -0.25 for step, size in final):
        return Verdict.DECAYING
    if all(size >= 2 * step ** -0.25 for step, size in final):
        return Verdict.NON_DECAYING
    return Verdict.INCONCLUSIVE


def _checkpoints(n):
    marks = np.linspace(0, n, TRACE_POINTS + 1).astype(int)[1:]
    return np.unique(marks)


def translation_path(params, pt, n):
    """y2_0, ..., y2_{n-1} along the orbit of pt, without reduction mod 1"""
    path = orbit(params.base, pt.x, n - 1)
    increments = params.beta.evaluate(path[:-1]) + params.omega_vector
    y2 = np.empty((n, params.rank))
    y2[0] = pt.y2
    y2[1:] = pt.y2 + np.cumsum(increments, axis=0)
    return y2


def birkhoff_characters(params, characters, pt, n, seed=0):
    """One report per character, sharing a single orbit"""
    if n < MIN_STEPS:
        raise ValueError(f'Birkhoff averages need n >= {MIN_STEPS}')
    characters = [tuple(int(value) for value in m) for m in characters]
    for m in characters:
        if len(m) != params.rank:
            raise ValueError(
                f'Character {m} must have {params.rank} coordinates'
            )
    y2 = translation_path(params, pt, n)
    integral = beta_integral(params, seed=seed)
    steps = _checkpoints(n)
    reports = []
    for m in characters:
        phase = y2 @ np.array(m, dtype=float) if params.rank \
            else np.zeros(n)
        running = np.cumsum(np.exp(2j * np.pi * phase))
        averages = tuple(complex(running[step - 1] / step) for step in steps)
        verdict = decay_verdict(steps, averages)
        logger.info('Character %s: |average| %.3g after %d steps, %s',
                    m, abs(averages[-1]), n, verdict.value)
        reports.append(ErgodicityReport(
            character=m,
            steps=tuple(int(step) for step in steps),
            averages=averages,
            beta_integral=integral,
            verdict=verdict,
        ))
    return reports


def birkhoff_character(params, m, pt, n, seed=0):
    """Running averages of exp(2 pi i <m, y2>) along the orbit of pt"""
    return birkhoff_characters(params, [m], pt, n, seed=seed)[0]


def rotation_bound(m, omega, n):
    """Geometric-sum bound 1 / (2 n dist(<m, omega>, Z)) for pure rotation"""
    theta = sum(a * float(w) for a, w in zip(m, omega))
    distance = abs(theta - round(theta))
    if distance == 0:
        return math.inf
    return 1 / (2 * n * distance)
