"""
Trivialized skew products over the perturbed torus map,

    F(x, y1, y2) = (f(x), B^2 y1 + alpha(x), y2 + beta(x) + omega),

with x in T^4, y1 in T^2 and y2 in T^(k-2). The constant rotation omega is
stored apart from beta.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from bundlealg.intmat import IntMat
from dyncore.maps import (
    PerturbedMapParams,
    perturbed_apply,
    perturbed_diff,
    perturbed_inverse,
    reduce_mod1,
)
from dyncore.matrices import eig_sym2
from hyperbolic.lyapunov import lyapunov_spectrum
from skewprod.trig import SIN, TrigPolynomial, coerce_coefficient


logger = logging.getLogger(__name__)

BASE_DIM = 4
MIN_RANK = 2
MAX_RANK = 22
KILL_TERMS = 8
MIN_SKEW_ITERS = 10 ** 4
DEFAULT_AMPLITUDE = Fraction(1, 10)


def default_alpha():
    """alpha(x) = (sin 2 pi x_1, sin 2 pi y_1) / 10"""
    return TrigPolynomial(BASE_DIM, 2, [
        ((1, 0, 0, 0), SIN, [DEFAULT_AMPLITUDE, 0]),
        ((0, 1, 0, 0), SIN, [0, DEFAULT_AMPLITUDE]),
    ])


def default_beta(rank):
    """Component j is sin(2 pi x_j') / 10, cycling through the base axes"""
    terms = []
    for j in range(rank):
        freq = [0] * BASE_DIM
        freq[(j + 2) % BASE_DIM] = 1
        coefficients = [0] * rank
        coefficients[j] = DEFAULT_AMPLITUDE
        terms.append((freq, SIN, coefficients))
    return TrigPolynomial(BASE_DIM, rank, terms)


@dataclass(frozen=True)
class SkewParams:
    k: int = 2
    base: PerturbedMapParams = field(default_factory=PerturbedMapParams)
    alpha: TrigPolynomial = None
    beta: TrigPolynomial = None
    omega: tuple = None

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) \
                or not MIN_RANK <= self.k <= MAX_RANK:
            raise ValueError(
                f'Fiber rank k must lie in [{MIN_RANK}, {MAX_RANK}]'
            )
        rank = self.k - 2
        if self.alpha is None:
            object.__setattr__(self, 'alpha',
                               TrigPolynomial.zero(BASE_DIM, 2))
        if self.beta is None:
            object.__setattr__(self, 'beta',
                               TrigPolynomial.zero(BASE_DIM, rank))
        omega = self.omega if self.omega is not None else (0,) * rank
        object.__setattr__(self, 'omega', tuple(
            coerce_coefficient(value) % 1 for value in omega
        ))
        if (self.alpha.dim_in, self.alpha.dim_out) != (BASE_DIM, 2):
            raise ValueError('alpha must map T^4 to T^2')
        if (self.beta.dim_in, self.beta.dim_out) != (BASE_DIM, rank):
            raise ValueError(f'beta must map T^4 to T^{rank}')
        if len(self.omega) != rank:
            raise ValueError(f'omega must have {rank} coordinates')

    @classmethod
    def standard(cls, k, base=None):
        """Default alpha and beta over the given base"""
        return cls(k=k, base=base or PerturbedMapParams(),
                   alpha=default_alpha(), beta=default_beta(k - 2))

    @property
    def rank(self):
        return self.k - 2

    @property
    def dim(self):
        return BASE_DIM + self.k

    @property
    def omega_vector(self):
        return np.array([float(value) for value in self.omega])

    @property
    def is_linear(self):
        return self.base.epsilon == 0

    def fiber_matrix(self):
        return self.base.B.squared().as_array()

    def fiber_automorphism(self):
        """diag(B^2, I_{k-2}) acting on the fiber torus"""
        square = IntMat.coerce(self.base.B.squared())
        if self.k == 2:
            return square
        return IntMat.diag(square, IntMat.identity(self.rank))


@dataclass(frozen=True, eq=False)
class SkewPoint:
    x: np.ndarray
    y1: np.ndarray
    y2: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        for name in ('x', 'y1', 'y2'):
            object.__setattr__(self, name, reduce_mod1(getattr(self, name)))
        if self.x.shape != (BASE_DIM,) or self.y1.shape != (2,):
            raise ValueError('SkewPoint needs x in T^4 and y1 in T^2')

    @classmethod
    def from_array(cls, p):
        p = np.asarray(p, dtype=float)
        return cls(p[:BASE_DIM], p[BASE_DIM:BASE_DIM + 2], p[BASE_DIM + 2:])

    def as_array(self):
        return np.concatenate([self.x, self.y1, self.y2])


def base_matrix(B):
    """B (+) B as a 4 x 4 integer matrix on (x1, y1, x2, y2)"""
    return IntMat.diag(B, B)


def _step(params, p):
    x, y1, y2 = p[:BASE_DIM], p[BASE_DIM:BASE_DIM + 2], p[BASE_DIM + 2:]
    return np.concatenate([
        perturbed_apply(params.base, x),
        reduce_mod1(params.fiber_matrix() @ y1 + params.alpha.evaluate(x)),
        reduce_mod1(y2 + params.beta.evaluate(x) + params.omega_vector),
    ])


def skew_apply(params, pt):
    """F(x, y1, y2) = (f(x), B^2 y1 + alpha(x), y2 + beta(x) + omega)"""
    if len(pt.y2) != params.rank:
        raise ValueError(f'Point has {len(pt.y2)} translation coordinates, '
                         f'expected {params.rank}')
    return SkewPoint.from_array(_step(params, pt.as_array()))


class SkewSystem:
    """The skew product as a system for lyapunov_spectrum"""

    def __init__(self, params):
        self.params = params
        self.dim = params.dim

    def apply(self, p):
        return _step(self.params, np.asarray(p, dtype=float))

    def diff(self, p):
        p = np.asarray(p, dtype=float)
        x = p[:BASE_DIM]
        rank = self.params.rank
        out = np.zeros((self.dim, self.dim))
        out[:BASE_DIM, :BASE_DIM] = perturbed_diff(self.params.base, x)
        out[BASE_DIM:BASE_DIM + 2, :BASE_DIM] = self.params.alpha.jacobian(x)
        out[BASE_DIM:BASE_DIM + 2, BASE_DIM:BASE_DIM + 2] = \
            self.params.fiber_matrix()
        if rank:
            out[BASE_DIM + 2:, :BASE_DIM] = self.params.beta.jacobian(x)
            out[BASE_DIM + 2:, BASE_DIM + 2:] = np.eye(rank)
        return out


def skew_lyapunov(params, pt, n, transient=0):
    """Full (4 + k)-dimensional spectrum of the skew product"""
    if n < MIN_SKEW_ITERS:
        raise ValueError(f'skew_lyapunov needs n >= {MIN_SKEW_ITERS}')
    return lyapunov_spectrum(SkewSystem(params), pt.as_array(), n,
                             transient=transient)


def rotate(params, omega):
    """F' = rho o F with rho = (0, omega); beta is left as it is and the
    rotation accumulates in params.omega"""
    omega = [coerce_coefficient(value) for value in omega]
    if len(omega) != params.rank:
        raise ValueError(f'omega must have {params.rank} coordinates')
    total = [a + b for a, b in zip(params.omega, omega)]
    return replace(params, omega=total)


def _fraction_inverse(rows):
    (a, b), (c, d) = rows
    det = Fraction(a * d - b * c)
    if det == 0:
        raise ValueError('Id - B^2 is singular')
    return [[d / det, -b / det], [-c / det, a / det]]


def _identity_minus_square(B):
    S = B.squared()
    return [[1 - S.a, -S.b], [-S.c, 1 - S.d]]


def verbatim_change(params):
    """u(x) = (Id - B^2)^-1 alpha(x), exact for constant alpha only"""
    return params.alpha.act(_fraction_inverse(
        _identity_minus_square(params.base.B)
    ))


def _split_projectors(B):
    grow, shrink, e_grow, e_shrink = eig_sym2(B.squared())
    return grow, shrink, np.outer(e_grow, e_grow), np.outer(e_shrink, e_shrink)


def _split_series(params, alpha, terms):
    """Solve B^2 u - u o f = -alpha along the expanding and contracting
    directions of B^2 separately; the residual is O(lambda^(-2 terms))."""
    B = params.base.B
    L = base_matrix(B)
    L_inverse = base_matrix(B.inverse())
    grow, shrink, P_grow, P_shrink = _split_projectors(B)
    forward = alpha
    backward = alpha.compose_linear(L_inverse)
    u = TrigPolynomial.zero(BASE_DIM, 2)
    for j in range(terms):
        u = u - forward.act(P_grow * grow ** -(j + 1))
        u = u + backward.act(P_shrink * shrink ** j)
        forward = forward.compose_linear(L)
        backward = backward.compose_linear(L_inverse)
    return u


@dataclass(frozen=True, eq=False)
class OrbitSeriesChange:
    """The split series summed along actual orbits of a perturbed base,

        u(x) = c - sum_j grow^-(j+1) P_grow alpha(f^j x)
                 + sum_j shrink^j P_shrink alpha(f^-(j+1) x),

    where c is the constant part of the change."""
    base: PerturbedMapParams
    alpha: TrigPolynomial
    constant: TrigPolynomial
    terms: int = KILL_TERMS

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        points = np.atleast_2d(x)
        grow, shrink, P_grow, P_shrink = _split_projectors(self.base.B)
        total = self.constant.evaluate(points)
        forward = backward = points
        for j in range(self.terms):
            total = total - grow ** -(j + 1) * (
                self.alpha.evaluate(forward) @ P_grow.T
            )
            backward = perturbed_inverse(self.base, backward)
            total = total + shrink ** j * (
                self.alpha.evaluate(backward) @ P_shrink.T
            )
            forward = perturbed_apply(self.base, forward)
        return total if x.ndim > 1 else total[0]


def kill_alpha(params, terms=KILL_TERMS):
    """Conjugate by y1 -> y1 - u(x) so that alpha' = alpha + B^2 u - u o f
    vanishes. Returns (params with alpha = 0, u).

    Over the linear base u is a trig polynomial. Over a perturbed base the
    oscillating part of u is an OrbitSeriesChange."""
    alpha = params.alpha
    if alpha.is_zero():
        return params, TrigPolynomial.zero(BASE_DIM, 2)
    inverse = _fraction_inverse(_identity_minus_square(params.base.B))
    u = TrigPolynomial.constant(BASE_DIM, alpha.mean).act(inverse)
    oscillating = alpha.oscillating_part()
    if not oscillating.is_zero():
        if params.is_linear:
            u = u + _split_series(params, oscillating, terms)
            logger.debug('kill_alpha: %d terms in u', len(u))
        else:
            u = OrbitSeriesChange(params.base, oscillating, u, terms)
            logger.debug('kill_alpha: %d orbit terms over eps = %g',
                         terms, params.base.epsilon)
    return replace(params, alpha=TrigPolynomial.zero(BASE_DIM, 2)), u


def _torus_distance(values):
    return np.abs(values - np.round(values))


def alpha_residual(params, u, points):
    """sup over points of |alpha + B^2 u - u o f| measured on T^2; u is a
    TrigPolynomial or an OrbitSeriesChange"""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    images = perturbed_apply(params.base, points)
    values = (
        params.alpha.evaluate(points)
        + u.evaluate(points) @ params.fiber_matrix().T
        - u.evaluate(images)
    )
    return float(_torus_distance(values).max())


def coboundary_beta(xi, base):
    """beta = xi o f - xi for the linear base f = B (+) B"""
    if base.epsilon != 0:
        raise ValueError('coboundary_beta needs the linear base, eps = 0')
    return xi.compose_linear(base_matrix(base.B)) - xi
