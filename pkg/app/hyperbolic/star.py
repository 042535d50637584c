"""
The inequality chain for the fiber automorphism A and the base map,

    lambda_s <= mu_s < lambda_c <= mu_c < lambda_u <= mu_u,
    mu_s < m(f),    lambda_u > ||Df||,

and the domination of base rates by fiber rates.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import sympy


logger = logging.getLogger(__name__)

PAIR_TOL = 1e-9


@dataclass(frozen=True)
class StarReport:
    lambda_s: float
    mu_s: float
    lambda_c: float
    mu_c: float
    lambda_u: float
    mu_u: float
    m_f: float
    norm_Df: float
    passed: bool
    failures: tuple = field(default=())

    def as_dict(self):
        return {
            'lambda_s': self.lambda_s, 'mu_s': self.mu_s,
            'lambda_c': self.lambda_c, 'mu_c': self.mu_c,
            'lambda_u': self.lambda_u, 'mu_u': self.mu_u,
            'm_f': self.m_f, 'norm_Df': self.norm_Df,
            'pass': self.passed, 'failures': list(self.failures),
        }


@dataclass(frozen=True)
class DominationReport:
    max_base: float
    min_base: float
    min_fiber_unstable: float
    max_fiber_stable: float
    dominated: bool


def integer_array(A):
    """A square integer matrix as a numpy int array"""
    if hasattr(A, 'as_array'):
        A = A.as_array()
    array = np.asarray(A)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ValueError('A must be a square matrix')
    if not np.all(np.equal(np.mod(array, 1), 0)):
        raise ValueError('A must have integer entries')
    return array.astype(np.int64)


def _invariant_basis(vectors):
    """Orthonormal real basis of the span of complex eigenvectors"""
    if vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], 0))
    real = np.hstack([vectors.real, vectors.imag])
    left, values, _ = np.linalg.svd(real, full_matrices=False)
    rank = int(np.sum(values > PAIR_TOL * values.max()))
    return left[:, :rank]


def _rates(A, basis):
    if basis.shape[1] == 0:
        return None, None
    values = np.linalg.svd(A @ basis, compute_uv=False)
    return float(values.min()), float(values.max())


def verify_star(A, dims, m_f, norm_Df):
    """Check the chain for the splitting of A by eigenvalue modulus.

    dims = (s, c, u) assigns the s smallest moduli to E^s, the next c to
    E^c and the u largest to E^u.
    """
    array = integer_array(A)
    size = array.shape[0]
    s, c, u = dims
    if min(dims) < 0 or s + c + u != size:
        raise ValueError(f'dims {dims} do not add up to {size}')
    if abs(int(sympy.Matrix(array.tolist()).det())) != 1:
        raise ValueError('A must be invertible over the integers')

    values, vectors = np.linalg.eig(array.astype(float))
    order = np.argsort(np.abs(values), kind='stable')
    values, vectors = values[order], vectors[:, order]
    for cut in (s, s + c):
        if 0 < cut < size and abs(values[cut].imag) > PAIR_TOL \
                and abs(values[cut] - np.conj(values[cut - 1])) < PAIR_TOL:
            raise ValueError('The splitting separates a complex pair')

    floating = array.astype(float)
    lambda_s, mu_s = _rates(floating, _invariant_basis(vectors[:, :s]))
    lambda_c, mu_c = _rates(floating, _invariant_basis(vectors[:, s:s + c]))
    lambda_u, mu_u = _rates(floating, _invariant_basis(vectors[:, s + c:]))

    failures = []
    if s == 0 or u == 0:
        failures.append('stable and unstable blocks must be non-trivial')
    else:
        if c:
            if not mu_s < lambda_c:
                failures.append('mu_s < lambda_c')
            if not mu_c < lambda_u:
                failures.append('mu_c < lambda_u')
        elif not mu_s < lambda_u:
            failures.append('mu_s < lambda_u')
        if not mu_s < m_f:
            failures.append('mu_s < m(f)')
        if not lambda_u > norm_Df:
            failures.append('lambda_u > ||Df||')
    if failures:
        logger.info('Inequality chain fails: %s', ', '.join(failures))
    return StarReport(
        lambda_s=lambda_s, mu_s=mu_s,
        lambda_c=lambda_c, mu_c=mu_c,
        lambda_u=lambda_u, mu_u=mu_u,
        m_f=float(m_f), norm_Df=float(norm_Df),
        passed=not failures,
        failures=tuple(failures),
    )


def domination_check(base_ratios, fiber_rates):
    """Fiber rates above 1 must beat, and those below 1 undercut, the base"""
    base = np.asarray(list(base_ratios), dtype=float)
    fiber = np.asarray(list(fiber_rates), dtype=float)
    if base.size == 0 or fiber.size == 0:
        raise ValueError('Need base ratios and fiber rates')
    unstable = fiber[fiber > 1]
    stable = fiber[fiber < 1]
    min_unstable = float(unstable.min()) if unstable.size else np.inf
    max_stable = float(stable.max()) if stable.size else 0.0
    dominated = bool(
        unstable.size and stable.size
        and min_unstable > base.max() and max_stable < base.min()
    )
    return DominationReport(
        max_base=float(base.max()),
        min_base=float(base.min()),
        min_fiber_unstable=min_unstable,
        max_fiber_stable=max_stable,
        dominated=dominated,
    )
