"""
Sampled pinching of the adapted metric,

    lambda^-2 ||u|| < ||Df u||' < lambda^2 ||u||',

and the search for the smallest scale d and horizon N that achieve it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import qmc

from core.exceptions import ExceptionalInput, PinchingFailure
from core.parallel import chunk_sizes, run_chunks, spawn_seeds
from dyncore.maps import linear_block
from dyncore.matrices import eig_sym2
from kummer.atlas import (
    ChartId,
    ChartKind,
    KummerAtlas,
    KummerPoint,
    TangentVec,
    _project,
)
from metric.adapted import adapted_ratios, averaging_rate, vector_orbit
from metric.norms import MetricSpec, transition_kind


logger = logging.getLogger(__name__)

DEFAULT_HORIZONS = (1, 2, 4, 8, 16, 32)
DEFAULT_SCALES = (1, 2, 4, 8, 16, 32, 64)
BLOWUP_FRACTION = 0.25
CHUNK_SIZE = 512
MAX_OFFENDERS = 10


@dataclass(frozen=True)
class Offender:
    chart: str
    coords: tuple
    tag: str
    next_tag: str
    ratio: float


@dataclass(frozen=True)
class PinchingReport:
    d: int
    epsilon: float
    lam: float
    sample_count: int
    horizons: tuple
    fractions: tuple
    worst_ratios: tuple
    transitions: dict
    collar_K: float
    m_f: float
    norm_Df: float
    offenders: tuple = field(default=())

    @property
    def passing_horizon(self):
        """Smallest horizon at which every sample is pinched"""
        for horizon, fraction in zip(self.horizons, self.fractions):
            if fraction == 1.0:
                return horizon
        return None

    @property
    def passed(self):
        return self.passing_horizon is not None

    @property
    def worst_ratio(self):
        return self.worst_ratios[-1]

    def as_dict(self):
        return {
            'd': self.d,
            'epsilon': self.epsilon,
            'sample_count': self.sample_count,
            'horizons': list(self.horizons),
            'fractions': list(self.fractions),
            'worst_ratios': list(self.worst_ratios),
            'passing_horizon': self.passing_horizon,
            'transitions': {
                kind: list(values) for kind, values in self.transitions.items()
            },
            'collar_K': self.collar_K,
            'm_f': self.m_f,
            'norm_Df': self.norm_Df,
            'offenders': [vars(offender) for offender in self.offenders],
        }


@dataclass(frozen=True)
class PinchingSearch:
    reports: tuple
    smallest: tuple = None

    @property
    def passed(self):
        return self.smallest is not None


def pinching_score(ratio, lam):
    """log distance beyond the window (lambda^-2, lambda^2); < 0 inside"""
    return abs(math.log(ratio)) - 2 * math.log(lam)


def _torus_samples(rng, count):
    if count == 0:
        return np.zeros((0, 4))
    sampler = qmc.Sobol(d=4, scramble=True, seed=rng)
    return sampler.random_base2(max(0, math.ceil(math.log2(count))))[:count]


def _blowup_sample(rng, atlas):
    kind = ChartKind.PSI1 if rng.random() < 0.5 else ChartKind.PSI2
    v = math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    limit = atlas.chart_radius ** 2 / (1 + abs(v) ** 2)
    w = 0.999 * limit * rng.random() * np.exp(2j * np.pi * rng.random())
    chart = ChartId(kind, int(rng.integers(16)))
    return KummerPoint.blowup(chart, complex(v), complex(w), atlas)


def _sample_points(rng, atlas, count, blowup_fraction):
    blowups = int(round(count * blowup_fraction))
    points = []
    for t in _torus_samples(rng, count - blowups):
        try:
            points.append(_project(atlas, t)[0])
        except ExceptionalInput:
            continue
    points.extend(_blowup_sample(rng, atlas) for _ in range(blowups))
    return points


def _pinching_chunk(task):
    """Vector orbits for one chunk of samples; top level for pickling"""
    spec, params, atlas, seed, count, horizon, blowup_fraction = task
    rng = np.random.default_rng(seed)
    records = []
    for point in _sample_points(rng, atlas, count, blowup_fraction):
        vec = TangentVec(point, rng.normal(size=4))
        logs, tags = vector_orbit(spec, params, vec, horizon)
        records.append((point, logs, tags[0], tags[1]))
    return records


def _linear_singular_values(params):
    values = np.linalg.svd(linear_block(params), compute_uv=False)
    return float(values.min()), float(values.max())


def pinching_check(spec, params, sample_count, horizons=DEFAULT_HORIZONS,
                   seed=0, jobs=1, atlas=None,
                   blowup_fraction=BLOWUP_FRACTION, chunk_size=CHUNK_SIZE):
    """Fraction of sampled one-step adapted ratios inside the window.

    Samples are scrambled Sobol points on T^4 plus, for blowup_fraction of
    them, uniform points of the blow-up balls; tangent vectors are
    Gaussian in the chart frame.
    """
    horizons = tuple(sorted(set(horizons)))
    atlas = atlas or KummerAtlas.standard(
        params.B, params.bump.d, params.bump.delta
    )
    lam = eig_sym2(params.B)[0]
    rate = averaging_rate(spec, params)
    sizes = chunk_sizes(sample_count, chunk_size)
    tasks = [
        (spec, params, atlas, child, size, horizons[-1], blowup_fraction)
        for child, size in zip(spawn_seeds(seed, len(sizes)), sizes)
    ]
    records = [
        record
        for chunk in run_chunks(_pinching_chunk, tasks, jobs)
        for record in chunk
    ]

    inside = np.zeros(len(horizons))
    worst = [None] * len(horizons)
    transitions = {}
    one_step = []
    scored = []
    for point, logs, tag, next_tag in records:
        ratio = float(np.exp(logs[1] - logs[0]))
        one_step.append(ratio)
        kind = transition_kind(tag, next_tag)
        low, high, count = transitions.get(kind, (np.inf, 0.0, 0))
        transitions[kind] = (min(low, ratio), max(high, ratio), count + 1)
        ratios = adapted_ratios(logs, rate, horizons)
        scores = [pinching_score(value, lam) for value in ratios]
        for index, (value, score) in enumerate(zip(ratios, scores)):
            if score < 0:
                inside[index] += 1
            if worst[index] is None \
                    or score > pinching_score(worst[index], lam):
                worst[index] = float(value)
        if scores[-1] >= 0:
            scored.append((scores[-1], Offender(
                chart=str(point.chart),
                coords=point.coords,
                tag=tag.value,
                next_tag=next_tag.value,
                ratio=float(ratios[-1]),
            )))

    low, high = _linear_singular_values(params)
    other = transitions.get('other')
    collar_K = max(other[1], 1 / other[0]) if other else 1.0
    scored.sort(key=lambda item: -item[0])
    total = max(len(records), 1)
    report = PinchingReport(
        d=spec.d,
        epsilon=spec.epsilon,
        lam=lam,
        sample_count=len(records),
        horizons=horizons,
        fractions=tuple(float(value) for value in inside / total),
        worst_ratios=tuple(worst),
        transitions=transitions,
        collar_K=float(collar_K),
        m_f=min(min(one_step, default=low), low),
        norm_Df=max(max(one_step, default=high), high),
        offenders=tuple(item[1] for item in scored[:MAX_OFFENDERS]),
    )
    logger.info('Pinching at d=%d: fractions %s over horizons %s',
                spec.d, report.fractions, horizons)
    return report


def require_pinching(report):
    """Raise PinchingFailure unless some horizon pinches every sample"""
    if not report.passed:
        raise PinchingFailure(
            f'No horizon in {report.horizons} pinches every sample at '
            f'd={report.d}; worst ratio {report.worst_ratio:.6g}',
            worst_ratio=report.worst_ratio,
        )
    return report


def pinching_search(params, sample_count, scales=DEFAULT_SCALES,
                    horizons=DEFAULT_HORIZONS, seed=0, jobs=1,
                    chunk_size=CHUNK_SIZE):
    """Scan d upward and stop at the first scale that pinches.

    Returns every report computed and the smallest passing (d, N).
    """
    reports = []
    for d in sorted(scales):
        scaled = replace(params, bump=replace(params.bump, d=d))
        spec = MetricSpec.for_params(scaled)
        logger.info('Pinching search: d=%d', d)
        report = pinching_check(spec, scaled, sample_count, horizons,
                                seed=seed, jobs=jobs, chunk_size=chunk_size)
        reports.append(report)
        if report.passed:
            return PinchingSearch(tuple(reports),
                                  (d, report.passing_horizon))
    logger.warning('No scale in %s pinches every sample', tuple(scales))
    return PinchingSearch(tuple(reports))
