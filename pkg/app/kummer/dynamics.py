"""
The map f_{eps,d} induced on the Kummer surface, its differential and its
inverse.

Torus chart points are lifted, moved by B_{eps,d} (+) B_{eps,d} and
projected again. Blow-up chart points lie inside the linear zone, where
the torus map is zeta -> L zeta with L = F^-1 M_eps F; in a chart this
acts by the exact Moebius formula

    psi1 -> psi1: v' = A / C, w' = C^2 w,  with (A, C) = L (v, 1)

and the analogous formulas for the other source and target charts. The
target chart is the one with |v'| <= 1.

When the linear zone is narrower than the blow-up ball (the analytic-sin
profile), points off the exceptional curve are blown down, moved on the
torus and projected again; the curve itself moves by Df_p.
"""
import logging

import numpy as np

from dyncore.maps import (
    linear_block,
    perturbed_apply,
    perturbed_diff,
    perturbed_inverse,
    reduce_mod1,
    signed_offset,
)
from kummer.atlas import (
    EXCEPTIONAL_POINTS,
    TORUS_CHART,
    TORUS_TO_COMPLEX,
    ChartId,
    ChartKind,
    KummerPoint,
    TangentVec,
    _project,
    blow_down,
    canonical_representative,
    chart_direction,
    lift_jacobian,
    lift_zeta,
    real_offset,
    realify,
)


logger = logging.getLogger(__name__)


def _covers_ball(params, atlas):
    return params.bump.linear_zone >= atlas.radius


def _moebius_step(pt, L):
    """Image of a blow-up point under zeta -> L zeta, with its Jacobian.

    Returns (KummerPoint, real 4x4 Jacobian in the chart frames).
    """
    atlas = pt.atlas
    kind, v, w = pt.chart.kind, pt.v, pt.w
    direction = chart_direction(kind, v)
    slope = chart_direction(kind, 1.0) - chart_direction(kind, 0.0)
    image, image_slope = L @ direction, L @ slope
    A, C = image
    if abs(A) <= abs(C):
        target, lead, lead_slope = ChartKind.PSI1, C, image_slope[1]
        other, other_slope = A, image_slope[0]
    else:
        target, lead, lead_slope = ChartKind.PSI2, A, image_slope[0]
        other, other_slope = C, image_slope[1]
    v_new = other / lead
    w_new = lead * lead * w

    center = EXCEPTIONAL_POINTS[pt.chart.point]
    zeta_new = np.sqrt(w_new) * chart_direction(target, v_new)
    dz = atlas.frame_matrix @ zeta_new / atlas.d
    if w_new != 0 and np.linalg.norm(dz) >= atlas.radius:
        return _leave_chart(pt, L, center)

    jac = np.array([
        [(other_slope * lead - other * lead_slope) / lead ** 2, 0.0],
        [2 * lead * lead_slope * w, lead ** 2],
    ], dtype=complex)
    point = KummerPoint.blowup(
        ChartId(target, pt.chart.point), v_new, w_new, atlas
    )
    return point, realify(jac)


def _leave_chart(pt, L, center):
    """Image that left the blow-up ball, as a torus chart point"""
    atlas = pt.atlas
    dz = atlas.frame_matrix @ L @ lift_zeta(pt) / atlas.d
    representative, sign = canonical_representative(
        reduce_mod1(center + real_offset(dz))
    )
    lift = lift_jacobian(pt.chart.kind, pt.v, pt.w)
    jac = atlas.frame_matrix @ L @ lift / atlas.d
    point = KummerPoint(TORUS_CHART, tuple(representative), atlas)
    return point, sign * TORUS_TO_COMPLEX.T @ realify(jac)


def _chart_to_torus(pt):
    """Real Jacobian from the chart frame of pt to torus offsets, w != 0"""
    lift = lift_jacobian(pt.chart.kind, pt.v, pt.w)
    jac = pt.atlas.frame_matrix @ lift / pt.atlas.d
    return TORUS_TO_COMPLEX.T @ realify(jac)


def _blowdown_step(params, pt):
    """Blow down, apply the torus map and project again"""
    t = blow_down(pt)
    point, projection = _project(pt.atlas, perturbed_apply(params, t))
    jac = projection @ perturbed_diff(params, t) @ _chart_to_torus(pt)
    return point, jac


def _torus_step(pt, apply, diff):
    t = np.array(pt.coords)
    image = apply(t)
    point, projection = _project(pt.atlas, image)
    return point, projection @ diff(t)


def _step(params, pt):
    if not pt.chart.is_blowup:
        return _torus_step(
            pt,
            lambda t: perturbed_apply(params, t),
            lambda t: perturbed_diff(params, t),
        )
    if not _covers_ball(params, pt.atlas) and pt.w != 0:
        return _blowdown_step(params, pt)
    # h' = eps at every half-lattice point, so Df_p is the linear block
    return _moebius_step(pt, pt.atlas.chart_matrix(linear_block(params)))


def kummer_apply(params, pt):
    """Image of pt under the induced map f_{eps,d}"""
    return _step(params, pt)[0]


def kummer_diff(params, vec):
    """Push a tangent vector forward; the base point moves to its image"""
    point, jac = _step(params, vec.base)
    return TangentVec(point, tuple(jac @ vec.array))


def kummer_jacobian(params, pt):
    """(image, real 4x4 differential in the chart frames)"""
    return _step(params, pt)


def kummer_inverse(params, pt):
    """Preimage of pt under f_{eps,d}"""
    atlas = pt.atlas
    if not pt.chart.is_blowup:
        return _project(atlas, perturbed_inverse(params, pt.coords))[0]
    if not _covers_ball(params, atlas) and pt.w != 0:
        preimage = perturbed_inverse(params, blow_down(pt))
        return _project(atlas, preimage)[0]
    L_inverse = np.linalg.inv(atlas.chart_matrix(linear_block(params)))
    candidate, _ = _moebius_step(pt, L_inverse)
    if candidate.chart.is_blowup:
        return candidate
    # the linear formula is exact only if the preimage is in the zone
    center = EXCEPTIONAL_POINTS[pt.chart.point]
    offset = np.abs(signed_offset(candidate.coords, center))
    if max(offset[0], offset[2]) < params.bump.linear_zone:
        return candidate
    logger.debug('Preimage left the linear zone; inverting on the torus')
    preimage = perturbed_inverse(params, blow_down(pt))
    return _project(atlas, preimage)[0]


def lift_tangent(vec):
    """Torus offset (x1, y1, x2, y2) of a blow-up tangent vector, w != 0"""
    return _chart_to_torus(vec.base) @ vec.array
