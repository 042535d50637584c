"""
Finite-average adapted metric

    ||v||'^2 = sum_{j < N} c^(-2j) ||Df^j v||^2,    c = lambda^2 (1 - margin)

evaluated from the logarithms of the g_{d,X} norms along the vector orbit
so that large horizons neither overflow nor underflow.
"""
import logging

import numpy as np
from scipy.special import logsumexp

from dyncore.matrices import eig_sym2
from kummer.atlas import TangentVec
from kummer.dynamics import kummer_diff
from metric.norms import gdx_norm, region_classify


logger = logging.getLogger(__name__)


def averaging_rate(spec, params):
    """c = lambda^2 (1 - margin)"""
    lam = eig_sym2(params.B)[0]
    return lam ** 2 * (1.0 - spec.margin)


def vector_orbit(spec, params, vec, steps):
    """log ||Df^j vec|| for j = 0..steps, and the region tag of each base.

    The vector is renormalised after every step; the logarithms carry the
    accumulated growth.
    """
    logs = np.empty(steps + 1)
    tags = []
    size = gdx_norm(spec, vec)
    if size == 0:
        raise ValueError('Zero tangent vector')
    total = np.log(size)
    logs[0] = total
    tags.append(region_classify(spec, vec.base))
    current = TangentVec(vec.base, tuple(vec.array / size))
    for j in range(1, steps + 1):
        pushed = kummer_diff(params, current)
        size = gdx_norm(spec, pushed)
        total += np.log(size)
        logs[j] = total
        tags.append(region_classify(spec, pushed.base))
        current = TangentVec(pushed.base, tuple(pushed.array / size))
    return logs, tags


def _log_weighted_sum(logs, log_rate):
    weights = 2.0 * np.arange(len(logs)) * log_rate
    return logsumexp(2.0 * logs - weights)


def adapted_ratios(logs, rate, horizons):
    """One-step adapted ratios ||Df v||' / ||v||' for each horizon N.

    logs must hold at least max(horizons) + 1 entries.
    """
    horizons = list(horizons)
    if not horizons or min(horizons) < 1:
        raise ValueError('Horizons must be at least 1')
    if max(horizons) + 1 > len(logs):
        raise ValueError('Vector orbit too short for the largest horizon')
    log_rate = np.log(rate)
    ratios = []
    for horizon in horizons:
        before = _log_weighted_sum(logs[:horizon], log_rate)
        after = _log_weighted_sum(logs[1:horizon + 1], log_rate)
        ratios.append(float(np.exp(0.5 * (after - before))))
    return np.array(ratios)


def adapted_norm(spec, params, vec, horizon):
    """The adapted norm of vec with averaging horizon N"""
    if horizon < 1:
        raise ValueError('Horizon must be at least 1')
    logs, _ = vector_orbit(spec, params, vec, horizon - 1)
    log_rate = np.log(averaging_rate(spec, params))
    return float(np.exp(0.5 * _log_weighted_sum(logs, log_rate)))


def adapted_ratio(spec, params, vec, horizon):
    """||Df vec||' / ||vec||' for the adapted norm with horizon N"""
    logs, _ = vector_orbit(spec, params, vec, horizon)
    rate = averaging_rate(spec, params)
    return float(adapted_ratios(logs, rate, [horizon])[0])
