"""
The metric family g_{d,X} on the Kummer surface.

Far from the exceptional set g_{d,X} is the flat metric scaled by d. Inside
a blow-up ball it blends, with the weight rho(|w|), the flat metric with
the Hermitian metric

    h = Q(v) dv dv* + Q(v)^-1 dw dw*,    Q(v) = (1 + |v|^2)^-2

whose real part k is invariant under the chart transition along w = 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import groupby

import numpy as np

from dyncore.bump import smooth_step
from dyncore.maps import linear_eigenvalues
from dyncore.matrices import eig_sym2
from kummer.atlas import KummerAtlas, lift_jacobian, realify
from kummer.dynamics import kummer_diff


logger = logging.getLogger(__name__)

INNER_FRACTION = 0.25
OUTER_FRACTION = 0.5


class RegionTag(str, Enum):
    V = 'V'
    B = 'B'
    G = 'G'


@dataclass(frozen=True)
class MetricSpec:
    """Parameters of g_{d,X}.

    v1_radius < v2_radius bound the regions V and B by |w| in the blow-up
    charts; mu_bar lies strictly between mu_eps and lambda.
    """
    d: int
    epsilon: float
    v1_radius: float
    v2_radius: float
    mu_bar: float
    margin: float = 0.05

    def __post_init__(self):
        if not 0 < self.v1_radius < self.v2_radius:
            raise ValueError('Need 0 < v1_radius < v2_radius')
        if self.mu_bar <= 1:
            raise ValueError('mu_bar must exceed 1')
        if not 0 <= self.margin < 1:
            raise ValueError('margin must lie in [0, 1)')

    @classmethod
    def for_params(cls, params, atlas=None):
        """Default radii 0.25 R^2, 0.5 R^2 and mu_bar = sqrt(mu_eps lambda)"""
        atlas = atlas or KummerAtlas.standard(
            params.B, params.bump.d, params.bump.delta
        )
        lam = eig_sym2(params.B)[0]
        mu_eps, _ = linear_eigenvalues(params)
        if mu_eps > lam * (1 + 1e-12):
            raise ValueError(
                f'mu_eps = {mu_eps:.6g} must not exceed lambda = {lam:.6g}'
            )
        # eps = 0 collapses the interval (mu_eps, lambda) to lambda
        mu_eps = min(mu_eps, lam)
        handoff = atlas.chart_radius ** 2
        return cls(
            d=atlas.d,
            epsilon=params.epsilon,
            v1_radius=INNER_FRACTION * handoff,
            v2_radius=OUTER_FRACTION * handoff,
            mu_bar=float(np.sqrt(mu_eps * lam)),
        )


def q_factor(v):
    """Q(v) = 1 / (1 + |v|^2)^2"""
    return 1.0 / (1.0 + np.abs(v) ** 2) ** 2


def k_norm(pt, components):
    """Norm of (dv, dw) in the metric k at a blow-up point"""
    dv = complex(components[0], components[1])
    dw = complex(components[2], components[3])
    q = q_factor(pt.v)
    return float(np.sqrt(q * abs(dv) ** 2 + abs(dw) ** 2 / q))


def cstar_ratio(v, mu):
    """Squared k-ratios of the chart map on e_v and e_w at (v, 0)"""
    if mu <= 1:
        raise ValueError('mu must exceed 1')
    size = np.abs(v) ** 2
    ratio = (mu ** 2 + mu ** 2 * size) / (1 + mu ** 4 * size)
    return ratio, 1.0 / ratio


def region_classify(spec, pt):
    if not pt.chart.is_blowup:
        return RegionTag.G
    size = abs(pt.w)
    if size < spec.v1_radius:
        return RegionTag.V
    if size < spec.v2_radius:
        return RegionTag.B
    return RegionTag.G


def blend_weight(spec, pt):
    """rho: 1 on V, 0 on G, smooth across the collar B"""
    if not pt.chart.is_blowup:
        return 0.0
    width = spec.v2_radius - spec.v1_radius
    return float(1.0 - smooth_step((abs(pt.w) - spec.v1_radius) / width))


def flat_norm(vec):
    """d times the flat norm of the tangent vector on T^4"""
    pt = vec.base
    if not pt.chart.is_blowup:
        return pt.atlas.d * float(np.linalg.norm(vec.array))
    lift = lift_jacobian(pt.chart.kind, pt.v, pt.w)
    jac = realify(pt.atlas.frame_matrix @ lift)
    return float(np.linalg.norm(jac @ vec.array))


def gdx_norm(spec, vec):
    """Norm of vec in g_{d,X}"""
    pt = vec.base
    rho = blend_weight(spec, pt)
    if rho == 0.0:
        return flat_norm(vec)
    k_part = k_norm(pt, vec.components)
    if rho == 1.0:
        return k_part
    flat = flat_norm(vec)
    return float(np.sqrt(rho * k_part ** 2 + (1.0 - rho) * flat ** 2))


def expansion_ratio(spec, params, vec):
    """||Df vec|| / ||vec|| in g_{d,X}"""
    return gdx_norm(spec, kummer_diff(params, vec)) / gdx_norm(spec, vec)


def transition_kind(source, target):
    """'G->G', 'V->V' or 'other' for one step of an orbit"""
    if source is RegionTag.G and target is RegionTag.G:
        return 'G->G'
    if source is RegionTag.V and target is RegionTag.V:
        return 'V->V'
    return 'other'


def count_collar_visits(tags):
    """Number of B tags in each passage (maximal run of non-G tags)"""
    tags = [RegionTag(tag) for tag in tags]
    return [
        sum(1 for tag in run if tag is RegionTag.B)
        for outside, run in groupby(tags, key=lambda tag: tag is RegionTag.G)
        if not outside
    ]
