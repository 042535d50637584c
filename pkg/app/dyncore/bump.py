"""
Odd, half-periodic bump functions h_{eps,d} on the circle.

The smooth-glued profile is built from its derivative. On a half period,
folded to r in [0, 1/4], h' equals eps on [0, delta], bridges down to a
negative plateau -kappa*eps over [delta, 1/8] with an exp(-1/x)
mollifier step, and stays on the plateau up to 1/4. kappa is chosen so
that h' has zero mean, which makes h 1/2-periodic. The d-fold profile is
the lift h_d(x) = h_1(d x) / d.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


_PANELS = 8
_BLOCK = 4096
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(32)


class BumpKind(str, Enum):
    SMOOTH = 'smooth-glued'
    ANALYTIC_SIN = 'analytic-sin'


@dataclass(frozen=True)
class BumpProfile:
    kind: BumpKind = BumpKind.SMOOTH
    epsilon: float = 0.0
    d: int = 1
    delta: float = 1 / 16

    def __post_init__(self):
        object.__setattr__(self, 'kind', BumpKind(self.kind))
        if self.epsilon < 0:
            raise ValueError('epsilon must be >= 0')
        if isinstance(self.d, bool) or not isinstance(self.d, int) \
                or self.d < 1:
            raise ValueError('d must be a positive integer')
        if not 0 < self.delta < 1 / 8:
            raise ValueError('delta must lie in the open interval (0, 1/8)')

    @property
    def bridge_width(self):
        return 1 / 8 - self.delta

    @property
    def kappa(self):
        """Depth of the negative plateau, in units of epsilon"""
        half = self.delta + self.bridge_width / 2
        return half / (1 / 4 - half)

    @property
    def linear_zone(self):
        """Half-width of U_d, the component of 0 where h is linear"""
        if self.epsilon == 0:
            return math.inf
        if self.kind is BumpKind.SMOOTH:
            return self.delta / self.d
        return 0.0


def smooth_step(u):
    """C-infinity step from 0 (u <= 0) to 1 (u >= 1)"""
    u = np.asarray(u, dtype=float)
    left = _flat_exp(u)
    right = _flat_exp(1.0 - u)
    return left / (left + right)


def _flat_exp(u):
    safe = np.where(u > 0, u, 1.0)
    return np.where(u > 0, np.exp(-1.0 / safe), 0.0)


def _step_integral(u):
    """Integral of smooth_step from 0 to u, for u in [0, 1]"""
    u = np.asarray(u, dtype=float)
    if u.size > _BLOCK:
        flat = u.ravel()
        parts = [_step_integral(part)
                 for part in np.array_split(flat, flat.size // _BLOCK + 1)]
        return np.concatenate(parts).reshape(u.shape)
    # composite Gauss-Legendre on _PANELS equal panels of [0, 1]
    panel = (np.arange(_PANELS)[:, None] + 0.5 * (_GAUSS_NODES + 1.0))
    nodes = (panel / _PANELS).ravel()
    weights = np.tile(_GAUSS_WEIGHTS, _PANELS) / (2 * _PANELS)
    samples = smooth_step(np.multiply.outer(u, nodes))
    return u * (samples @ weights)


def _folded_derivative(profile, r):
    width = profile.bridge_width
    step = smooth_step((r - profile.delta) / width)
    return profile.epsilon * (1.0 - (1.0 + profile.kappa) * step)


def _folded_primitive(profile, r):
    """H(r) = integral of h' from 0 to r, for r in [0, 1/4]"""
    shape = np.shape(r)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    eps, delta, kappa = profile.epsilon, profile.delta, profile.kappa
    width = profile.bridge_width
    top = delta + width
    u = np.clip((r - delta) / width, 0.0, 1.0)
    integral = np.zeros_like(u)
    on_bridge = (u > 0) & (u < 1)
    integral[on_bridge] = _step_integral(u[on_bridge])
    bridge = eps * (delta + width * u - (1.0 + kappa) * width * integral)
    at_top = eps * (delta + width - (1.0 + kappa) * width / 2)
    plateau = at_top - kappa * eps * (r - top)
    primitive = np.where(r <= delta, eps * r,
                         np.where(r < top, bridge, plateau))
    return primitive.reshape(shape)


def _smooth_unit(profile, x):
    s = np.mod(x, 0.5)
    upper = s > 0.25
    r = np.where(upper, 0.5 - s, s)
    primitive = _folded_primitive(profile, r)
    h = np.where(upper, -primitive, primitive)
    return h, _folded_derivative(profile, r)


def bump_eval(profile, x):
    """Return (h, h') of the profile at x (scalar or array, taken mod 1)"""
    x = np.asarray(x, dtype=float)
    if profile.epsilon == 0:
        zeros = np.zeros_like(x)
        return zeros, zeros.copy()
    if profile.kind is BumpKind.ANALYTIC_SIN:
        omega = 4 * profile.d * np.pi
        phase = omega * x
        return (
            profile.epsilon * np.sin(phase) / omega,
            profile.epsilon * np.cos(phase),
        )
    lifted = np.mod(profile.d * np.mod(x, 1.0), 1.0)
    h, h_prime = _smooth_unit(profile, lifted)
    return h / profile.d, h_prime
