"""
Integer 2x2 matrices and closed-form symmetric eigendata
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mat2Int:
    """Integer matrix (a b; c d)"""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f'Mat2Int entry {name} must be an int')

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def is_symmetric(self):
        return self.b == self.c

    def __matmul__(self, other):
        return Mat2Int(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def squared(self):
        return self @ self

    def adjugate(self):
        return Mat2Int(self.d, -self.b, -self.c, self.a)

    def inverse(self):
        """Exact inverse, defined only for determinant +-1"""
        if self.det not in (1, -1):
            raise ValueError('Only unimodular matrices have integer inverses')
        adj = self.adjugate()
        return Mat2Int(
            adj.a * self.det, adj.b * self.det,
            adj.c * self.det, adj.d * self.det,
        )

    def is_identity_mod(self, modulus):
        return (
            self.a % modulus == 1 % modulus and self.b % modulus == 0
            and self.c % modulus == 0 and self.d % modulus == 1 % modulus
        )

    def as_array(self):
        return np.array(self.rows, dtype=float)


DEFAULT_B = Mat2Int(13, 8, 8, 5)


def eig_sym2(M):
    """Return (lambda_plus, lambda_minus, eigvec_plus, eigvec_minus).

    Eigenvalues come from the quadratic formula on trace and determinant;
    eigenvectors are orthonormal, with the first nonzero entry positive.
    """
    if not M.is_symmetric():
        raise ValueError('eig_sym2 needs a symmetric matrix')
    half_trace = M.trace / 2
    radius = math.hypot((M.a - M.d) / 2, M.b)
    lambda_plus = half_trace + radius
    if half_trace > 0:
        # det / lambda_plus avoids cancellation in the small root
        lambda_minus = M.det / lambda_plus
    else:
        lambda_minus = half_trace - radius
    if M.b == 0:
        if M.a >= M.d:
            plus, minus = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        else:
            plus, minus = np.array([0.0, 1.0]), np.array([1.0, 0.0])
        return lambda_plus, lambda_minus, plus, minus
    plus = _unit(np.array([M.b, lambda_plus - M.a], dtype=float))
    minus = np.array([-plus[1], plus[0]])
    return lambda_plus, lambda_minus, plus, _positive(minus)


def _unit(vec):
    return _positive(vec / np.linalg.norm(vec))


def _positive(vec):
    pivot = vec[np.flatnonzero(np.abs(vec) > 0)[0]]
    return vec if pivot > 0 else -vec
