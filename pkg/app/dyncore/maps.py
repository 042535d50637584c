"""
Perturbed torus automorphisms B_{eps,d} (+) B_{eps,d} on T^4.

Points are float arrays with trailing axis (x1, y1, x2, y2); the complex
coordinates are z1 = x1 + i x2 and z2 = y1 + i y2, so one copy of
B_{eps,d} acts on (x1, y1) and the other on (x2, y2). Every function
accepts a single point of shape (4,) or a batch of shape (n, 4).
"""
from __future__ import annotations

import itertools
import math
import logging
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import NonConvergence
from dyncore.bump import BumpProfile, bump_eval
from dyncore.matrices import DEFAULT_B, Mat2Int


logger = logging.getLogger(__name__)

NEWTON_STEPS = 50
NEWTON_TOL = 1e-14


@dataclass(frozen=True)
class PerturbedMapParams:
    B: Mat2Int = DEFAULT_B
    bump: BumpProfile = field(default_factory=BumpProfile)
    direction: tuple = (1, 1)

    def __post_init__(self):
        if self.B.det not in (1, -1):
            raise ValueError('B must be unimodular')
        a, b = self.direction
        object.__setattr__(self, 'direction', (int(a), int(b)))
        limit = epsilon_limit(self.B, self.direction)
        if self.epsilon >= limit:
            raise ValueError(
                f'epsilon must be below {limit:.6g} for direction '
                f'{self.direction}, or the map is not a diffeomorphism'
            )

    @classmethod
    def area_preserving(cls, B=DEFAULT_B, bump=None):
        """Direction (B12, B22), for which the factor Jacobian is det B"""
        return cls(B=B, bump=bump or BumpProfile(), direction=(B.b, B.d))

    @property
    def epsilon(self):
        return self.bump.epsilon

    @property
    def inverse_gain(self):
        """Coefficient k of h(x) in x = (B^-1 row 0).(X, Y) + k h(x)"""
        inv = self.B.inverse()
        a, b = self.direction
        return inv.a * a + inv.b * b


def epsilon_limit(B, direction):
    """Sup of eps for which 1 - k h' > 0 whenever |h'| <= eps, k the
    inverse gain; infinite when direction is B^-1-orthogonal to e1"""
    inv = B.inverse()
    gain = abs(inv.a * direction[0] + inv.b * direction[1])
    return 1 / gain if gain else math.inf


def reduce_mod1(p):
    """Canonical representative in [0, 1)"""
    p = np.asarray(p, dtype=float)
    reduced = p - np.floor(p)
    return np.where(reduced >= 1.0, 0.0, reduced)


def torus_point(coords):
    coords = reduce_mod1(coords)
    if coords.shape[-1] != 4:
        raise ValueError('Torus4Point needs 4 coordinates')
    return coords


def circle_dist(p, q):
    """Coordinatewise distance on the circle R/Z"""
    delta = np.mod(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
                   + 0.5, 1.0) - 0.5
    return np.abs(delta)


def signed_offset(p, q):
    """Representative of p - q in [-1/2, 1/2)"""
    return np.mod(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
                  + 0.5, 1.0) - 0.5


def half_lattice_points():
    """The 16 points with coordinates in {0, 1/2}, index = binary digits"""
    return np.array(
        list(itertools.product((0.0, 0.5), repeat=4)), dtype=float
    )


def _factor(params, x, y):
    B = params.B
    a, b = params.direction
    h, _ = bump_eval(params.bump, x)
    return B.a * x + B.b * y - a * h, B.c * x + B.d * y - b * h


def perturbed_apply(params, p):
    """Image of p under B_{eps,d} (+) B_{eps,d}, reduced mod 1"""
    p = np.asarray(p, dtype=float)
    x1, y1, x2, y2 = np.moveaxis(p, -1, 0)
    u1, v1 = _factor(params, x1, y1)
    u2, v2 = _factor(params, x2, y2)
    return reduce_mod1(np.stack([u1, v1, u2, v2], axis=-1))


def factor_block(params, x):
    """The 2x2 differential of one factor at first coordinate x"""
    B = params.B
    a, b = params.direction
    _, h_prime = bump_eval(params.bump, x)
    h_prime = np.asarray(h_prime)
    block = np.empty(h_prime.shape + (2, 2))
    block[..., 0, 0] = B.a - a * h_prime
    block[..., 0, 1] = B.b
    block[..., 1, 0] = B.c - b * h_prime
    block[..., 1, 1] = B.d
    return block


def perturbed_diff(params, p):
    """4x4 differential, block diagonal in (x1, y1) and (x2, y2)"""
    p = np.asarray(p, dtype=float)
    jac = np.zeros(p.shape[:-1] + (4, 4))
    jac[..., 0:2, 0:2] = factor_block(params, p[..., 0])
    jac[..., 2:4, 2:4] = factor_block(params, p[..., 2])
    return jac


def jacobian_det(params, x):
    """Determinant of the 2x2 factor block at x"""
    return np.linalg.det(factor_block(params, x))


def linear_block(params):
    """Constant factor block on the linear zone U_d, where h' = eps"""
    return factor_block(params, 0.0)


def linear_eigenvalues(params):
    """(mu_hat, mu_check): eigenvalues of the linear-zone block.

    No reciprocity is assumed; for direction (1, 1) their product is
    1 + 3 eps, not 1.
    """
    values = np.linalg.eigvals(linear_block(params))
    if np.any(np.abs(values.imag) > 1e-12):
        raise ValueError('Linear-zone block has complex eigenvalues')
    values = np.sort(values.real)
    return float(values[1]), float(values[0])


def perturbed_inverse(params, q):
    """Preimage of q; Newton on the first coordinate of each factor"""
    q = reduce_mod1(q)
    X1, Y1, X2, Y2 = np.moveaxis(q, -1, 0)
    x1, y1 = _invert_factor(params, X1, Y1)
    x2, y2 = _invert_factor(params, X2, Y2)
    return reduce_mod1(np.stack([x1, y1, x2, y2], axis=-1))


def _invert_factor(params, X, Y):
    inv = params.B.inverse()
    a, b = params.direction
    gain = params.inverse_gain
    base = reduce_mod1(inv.a * X + inv.b * Y)
    x = np.array(base, dtype=float)
    if gain != 0 and params.epsilon > 0:
        for _ in range(NEWTON_STEPS):
            h, h_prime = bump_eval(params.bump, x)
            residual = x - base - gain * h
            if np.all(np.abs(residual) < NEWTON_TOL):
                break
            x = x - residual / (1.0 - gain * h_prime)
        else:
            h, _ = bump_eval(params.bump, x)
            worst = float(np.max(np.abs(x - base - gain * h)))
            logger.warning('Newton inversion stalled, residual %.3e', worst)
            raise NonConvergence(
                f'Inverse did not converge in {NEWTON_STEPS} steps '
                f'(residual {worst:.3e})'
            )
    h, _ = bump_eval(params.bump, x)
    y = inv.c * (X + a * h) + inv.d * (Y + b * h)
    return x, y


def orbit(params, p, n):
    """Array of shape (n + 1, 4) holding p and its first n images"""
    path = np.empty((n + 1, 4))
    path[0] = torus_point(p)
    for step in range(n):
        path[step + 1] = perturbed_apply(params, path[step])
    return path
