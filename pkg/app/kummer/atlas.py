"""
Atlas of the Kummer surface: the quotient T^4 / (t ~ -t) with its 16
singular points blown up.

Away from the exceptional set a point is carried by its canonical torus
representative. Near an exceptional point p the local complex coordinates
are zeta = F^-1 (d * dz), where dz = (dz1, dz2) is the signed offset from
p and F is the atlas eigenframe. The blow-up charts are

    psi1: v = zeta1 / zeta2, w = zeta2 ** 2
    psi2: v = zeta2 / zeta1, w = zeta1 ** 2

so (v, w) do not depend on the sign of zeta.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from core.exceptions import ExceptionalInput, PoleAtZero
from dyncore.maps import (
    half_lattice_points,
    linear_block,
    reduce_mod1,
    signed_offset,
)
from dyncore.matrices import DEFAULT_B, Mat2Int, eig_sym2


logger = logging.getLogger(__name__)

MAX_RADIUS = 0.1
EXCEPTIONAL_TOL = 1e-15

# (x1, y1, x2, y2) <-> (Re z1, Im z1, Re z2, Im z2)
TORUS_TO_COMPLEX = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])

EXCEPTIONAL_POINTS = half_lattice_points()


class ChartKind(str, Enum):
    TORUS = 'torus'
    PSI1 = 'psi1'
    PSI2 = 'psi2'


@dataclass(frozen=True)
class ExceptionalPoint:
    """One of the 16 fixed points of t -> -t, with its eigenframe"""
    index: int
    eigenframe: tuple

    def __post_init__(self):
        if not 0 <= self.index < 16:
            raise ValueError('Exceptional point index must be in 0..15')

    @property
    def coords(self):
        return EXCEPTIONAL_POINTS[self.index]


@dataclass(frozen=True)
class ChartId:
    kind: ChartKind
    point: int = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', ChartKind(self.kind))
        if self.kind is ChartKind.TORUS:
            if self.point is not None:
                raise ValueError('The torus chart has no exceptional point')
        elif self.point is None or not 0 <= self.point < 16:
            raise ValueError('Blow-up charts need a point index in 0..15')

    @property
    def is_blowup(self):
        return self.kind is not ChartKind.TORUS

    def __str__(self):
        if self.is_blowup:
            return f'{self.kind.value}[{self.point}]'
        return self.kind.value


TORUS_CHART = ChartId(ChartKind.TORUS)


def _frame_tuple(frame):
    frame = np.asarray(frame, dtype=float)
    return tuple(tuple(float(entry) for entry in row) for row in frame)


def _normalized_columns(vectors):
    columns = []
    for vec in np.asarray(vectors, dtype=float).T:
        vec = vec / np.linalg.norm(vec)
        pivot = vec[np.flatnonzero(np.abs(vec) > 0)[0]]
        columns.append(vec if pivot > 0 else -vec)
    return np.column_stack(columns)


@dataclass(frozen=True)
class KummerAtlas:
    """Chart configuration shared by every point of one experiment.

    The blow-up ball around each exceptional point has torus radius
    min(delta / d, MAX_RADIUS); in chart coordinates its radius is
    d times that, so the balls look the same for every d.
    """
    B: Mat2Int = DEFAULT_B
    d: int = 1
    delta: float = 1 / 16
    frame: tuple = ((1.0, 0.0), (0.0, 1.0))

    def __post_init__(self):
        if self.d < 1:
            raise ValueError('d must be a positive integer')
        if not 0 < self.delta < 1 / 8:
            raise ValueError('delta must lie in the open interval (0, 1/8)')
        frame = np.asarray(self.frame, dtype=float)
        if frame.shape != (2, 2) or abs(np.linalg.det(frame)) < 1e-12:
            raise ValueError('Atlas frame must be an invertible 2x2 matrix')
        object.__setattr__(self, 'frame', _frame_tuple(frame))

    @classmethod
    def standard(cls, B=DEFAULT_B, d=1, delta=1 / 16):
        """Orthonormal eigenframe of the symmetric matrix B"""
        _, _, plus, minus = eig_sym2(B)
        return cls(B=B, d=d, delta=delta,
                   frame=np.column_stack([plus, minus]))

    @classmethod
    def for_params(cls, params):
        """Eigenframe of the linear-zone block, expanding direction first"""
        values, vectors = np.linalg.eig(linear_block(params))
        if np.any(np.abs(values.imag) > 1e-12):
            raise ValueError('Linear-zone block has complex eigenvalues')
        order = np.argsort(-np.abs(values.real))
        frame = _normalized_columns(vectors.real[:, order])
        return cls(B=params.B, d=params.bump.d, delta=params.bump.delta,
                   frame=frame)

    @property
    def radius(self):
        """Torus radius r_d of the blow-up balls"""
        return min(self.delta / self.d, MAX_RADIUS)

    @property
    def chart_radius(self):
        return self.d * self.radius

    @property
    def frame_matrix(self):
        return np.array(self.frame)

    @property
    def frame_inverse(self):
        return np.linalg.inv(self.frame_matrix)

    def chart_matrix(self, block):
        """L = F^-1 M F for a 2x2 block M acting on (z1, z2)"""
        return self.frame_inverse @ np.asarray(block) @ self.frame_matrix

    def exceptional_point(self, index):
        return ExceptionalPoint(index=index, eigenframe=self.frame)

    def exceptional_points(self):
        return [self.exceptional_point(index) for index in range(16)]


DEFAULT_ATLAS = KummerAtlas.standard()


@dataclass(frozen=True)
class KummerPoint:
    """A chart and four real coordinates.

    Torus chart coordinates are the canonical representative (x1, y1, x2,
    y2); blow-up chart coordinates are (Re v, Im v, Re w, Im w).
    """
    chart: ChartId
    coords: tuple
    atlas: KummerAtlas = field(default=DEFAULT_ATLAS, compare=False)

    def __post_init__(self):
        coords = tuple(float(value) for value in self.coords)
        if len(coords) != 4:
            raise ValueError('KummerPoint needs 4 coordinates')
        object.__setattr__(self, 'coords', coords)

    @classmethod
    def blowup(cls, chart, v, w, atlas=DEFAULT_ATLAS):
        return cls(chart, (v.real, v.imag, w.real, w.imag), atlas)

    @property
    def v(self):
        self._require_blowup()
        return complex(self.coords[0], self.coords[1])

    @property
    def w(self):
        self._require_blowup()
        return complex(self.coords[2], self.coords[3])

    @property
    def on_exceptional_curve(self):
        return self.chart.is_blowup and self.w == 0

    def _require_blowup(self):
        if not self.chart.is_blowup:
            raise ValueError('Torus chart points have no (v, w) coordinates')

    def isclose(self, other, tol=1e-10):
        """Same chart and coordinates within tol (circle distance on T^4)"""
        if self.chart != other.chart:
            return False
        delta = np.subtract(self.coords, other.coords)
        if not self.chart.is_blowup:
            delta = signed_offset(self.coords, other.coords)
        return bool(np.max(np.abs(delta)) <= tol)


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector in the chart frame of its base point.

    Torus chart components follow the (x1, y1, x2, y2) order; blow-up
    components are (Re dv, Im dv, Re dw, Im dw).
    """
    base: KummerPoint
    components: tuple

    def __post_init__(self):
        components = tuple(float(value) for value in self.components)
        if len(components) != 4:
            raise ValueError('TangentVec needs 4 components')
        object.__setattr__(self, 'components', components)

    @property
    def array(self):
        return np.array(self.components)


def realify(jac):
    """Real 4x4 matrix of a complex 2x2 matrix on (Re, Im, Re, Im)"""
    jac = np.asarray(jac, dtype=complex)
    real = np.empty((4, 4))
    for row in range(2):
        for col in range(2):
            entry = jac[row, col]
            real[2 * row:2 * row + 2, 2 * col:2 * col + 2] = [
                [entry.real, -entry.imag],
                [entry.imag, entry.real],
            ]
    return real


def complex_offset(offset):
    """(dz1, dz2) from a real offset in (x1, y1, x2, y2) order"""
    offset = np.asarray(offset, dtype=float)
    return np.array([
        complex(offset[0], offset[2]),
        complex(offset[1], offset[3]),
    ])


def real_offset(dz):
    """Inverse of complex_offset"""
    return np.array([dz[0].real, dz[1].real, dz[0].imag, dz[1].imag])


def canonical_representative(t):
    """Lexicographically smaller of t and -t mod 1, and the sign used"""
    t = reduce_mod1(t)
    negated = reduce_mod1(-t)
    if tuple(negated) < tuple(t):
        return negated, -1.0
    return t, 1.0


def nearest_exceptional(t):
    """Index of the half-lattice point nearest t, and the signed offset"""
    t = reduce_mod1(t)
    halves = np.mod(np.rint(2 * t), 2).astype(int)
    index = int(halves @ (8, 4, 2, 1))
    return index, signed_offset(t, EXCEPTIONAL_POINTS[index])


def chart_coordinates(zeta):
    """Blow-up chart and (v, w) for local coordinates zeta != 0"""
    zeta1, zeta2 = zeta
    if abs(zeta1) <= abs(zeta2):
        return ChartKind.PSI1, zeta1 / zeta2, zeta2 * zeta2
    return ChartKind.PSI2, zeta2 / zeta1, zeta1 * zeta1


def chart_coordinates_jacobian(kind, zeta):
    """Complex Jacobian of (v, w) with respect to zeta"""
    zeta1, zeta2 = zeta
    if kind is ChartKind.PSI1:
        return np.array([
            [1 / zeta2, -zeta1 / zeta2 ** 2],
            [0.0, 2 * zeta2],
        ])
    return np.array([
        [-zeta2 / zeta1 ** 2, 1 / zeta1],
        [2 * zeta1, 0.0],
    ])


def chart_direction(kind, v):
    """(a, b) with zeta = s * (a, b) and w = s ** 2"""
    if kind is ChartKind.PSI1:
        return np.array([v, 1.0 + 0j])
    return np.array([1.0 + 0j, v])


def lift_zeta(pt):
    """Local coordinates of a blow-up point, principal branch of sqrt(w)"""
    s = np.sqrt(pt.w)
    return s * chart_direction(pt.chart.kind, pt.v)


def lift_jacobian(kind, v, w):
    """Complex Jacobian of zeta with respect to (v, w), for w != 0"""
    if w == 0:
        raise ExceptionalInput('The exceptional curve has no torus lift')
    s = np.sqrt(w)
    if kind is ChartKind.PSI1:
        return np.array([[s, v / (2 * s)], [0.0, 1 / (2 * s)]])
    return np.array([[0.0, 1 / (2 * s)], [s, v / (2 * s)]])


def blow_down(pt):
    """A torus representative of pt (the exceptional point if w = 0)"""
    if not pt.chart.is_blowup:
        return np.array(pt.coords)
    center = EXCEPTIONAL_POINTS[pt.chart.point]
    if pt.w == 0:
        return center.copy()
    dz = pt.atlas.frame_matrix @ lift_zeta(pt) / pt.atlas.d
    return reduce_mod1(center + real_offset(dz))


def sigma_project(t, atlas=None):
    """Project a torus point to the Kummer surface.

    Points within the atlas radius of an exceptional point land in the
    blow-up chart with |v| <= 1; all others in the torus chart.
    """
    atlas = atlas or DEFAULT_ATLAS
    return _project(atlas, t)[0]


def _project(atlas, t):
    """(KummerPoint, Jacobian from torus tangents at t to chart frame)"""
    t = reduce_mod1(t)
    index, offset = nearest_exceptional(t)
    if np.all(np.abs(offset) < EXCEPTIONAL_TOL):
        raise ExceptionalInput(
            f'{tuple(t)} is the exceptional point {index}; '
            'enter its blow-up chart with explicit (v, w)'
        )
    if np.linalg.norm(offset) >= atlas.radius:
        representative, sign = canonical_representative(t)
        point = KummerPoint(TORUS_CHART, tuple(representative), atlas)
        return point, sign * np.eye(4)
    scaled_inverse = atlas.d * atlas.frame_inverse
    zeta = scaled_inverse @ complex_offset(offset)
    kind, v, w = chart_coordinates(zeta)
    point = KummerPoint.blowup(ChartId(kind, index), v, w, atlas)
    jac = chart_coordinates_jacobian(kind, zeta) @ scaled_inverse
    return point, realify(jac) @ TORUS_TO_COMPLEX


def blowup_chart_map(source, target, coords):
    """Transition (v, w) -> (1/v, v^2 w) between the charts over one point"""
    v, w = coords
    source, target = ChartId(*_chart_args(source)), \
        ChartId(*_chart_args(target))
    if not (source.is_blowup and target.is_blowup):
        raise ValueError('Transitions are defined between blow-up charts')
    if source.point != target.point:
        raise ValueError('Charts belong to different exceptional points')
    if source.kind is target.kind:
        return v, w
    if v == 0:
        raise PoleAtZero(f'{source} -> {target} is undefined at v = 0')
    return 1 / v, v * v * w


def _chart_args(chart):
    if isinstance(chart, ChartId):
        return chart.kind, chart.point
    return tuple(chart)


def transition_jacobian(v, w):
    """Complex Jacobian of (v, w) -> (1/v, v^2 w); its determinant is -1"""
    if v == 0:
        raise PoleAtZero('Transition Jacobian is undefined at v = 0')
    return np.array([[-1 / v ** 2, 0.0], [2 * v * w, v ** 2]],
                    dtype=complex)


def switch_chart(pt):
    """The same blow-up point written in the other chart"""
    other = ChartKind.PSI2 if pt.chart.kind is ChartKind.PSI1 \
        else ChartKind.PSI1
    target = ChartId(other, pt.chart.point)
    v, w = blowup_chart_map(pt.chart, target, (pt.v, pt.w))
    return KummerPoint.blowup(target, v, w, pt.atlas)


def eta_coefficient(pt):
    """Coefficient of the holomorphic 2-form in the chart frame of pt.

    dz1 ^ dz2 on the torus chart, 1/2 dv ^ dw in psi1 and -1/2 dv ^ dw in
    psi2; the transition determinant -1 relates the two blow-up charts.
    """
    if pt.chart.kind is ChartKind.PSI1:
        return 0.5 + 0j
    if pt.chart.kind is ChartKind.PSI2:
        return -0.5 + 0j
    return 1.0 + 0j
