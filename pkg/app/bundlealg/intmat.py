"""
Exact integer matrices on top of sympy's DomainMatrix over ZZ
"""
from __future__ import annotations

import operator

import numpy as np
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors


def _as_int(value):
    if isinstance(value, bool):
        raise ValueError('Matrix entries must be integers, not booleans')
    try:
        return operator.index(value)
    except TypeError:
        raise ValueError(f'Matrix entry {value!r} is not an integer')


class IntMat:
    """Immutable integer matrix with exact arithmetic"""

    __slots__ = ('_rows',)

    def __init__(self, rows):
        rows = tuple(tuple(_as_int(entry) for entry in row) for row in rows)
        if not rows or not rows[0]:
            raise ValueError('IntMat needs at least one row and one column')
        if any(len(row) != len(rows[0]) for row in rows):
            raise ValueError('IntMat rows must all have the same length')
        self._rows = rows

    @classmethod
    def identity(cls, size):
        return cls([[int(i == j) for j in range(size)] for i in range(size)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_domain(cls, matrix):
        return cls([[int(entry) for entry in row] for row in matrix.to_list()])

    @classmethod
    def coerce(cls, value):
        """Accept an IntMat, anything with integer rows, or a nested list"""
        if isinstance(value, cls):
            return value
        rows = getattr(value, 'rows', value)
        if isinstance(rows, np.ndarray):
            rows = rows.tolist()
        return cls(rows)

    @classmethod
    def diag(cls, *blocks):
        """Block-diagonal matrix of the given square or rectangular blocks"""
        blocks = [cls.coerce(block) for block in blocks]
        rows = sum(block.shape[0] for block in blocks)
        cols = sum(block.shape[1] for block in blocks)
        out = [[0] * cols for _ in range(rows)]
        top = left = 0
        for block in blocks:
            for i, row in enumerate(block.rows):
                out[top + i][left:left + len(row)] = row
            top += block.shape[0]
            left += block.shape[1]
        return cls(out)

    @classmethod
    def hstack(cls, *blocks):
        blocks = [cls.coerce(block) for block in blocks]
        if len({block.shape[0] for block in blocks}) != 1:
            raise ValueError('hstack needs blocks with the same row count')
        return cls([
            sum((block.rows[i] for block in blocks), ())
            for i in range(blocks[0].shape[0])
        ])

    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return len(self._rows), len(self._rows[0])

    @property
    def is_square(self):
        return self.shape[0] == self.shape[1]

    def domain_matrix(self):
        return DomainMatrix(
            [[ZZ(entry) for entry in row] for row in self._rows],
            self.shape, ZZ,
        )

    def __matmul__(self, other):
        other = IntMat.coerce(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(
                f'Cannot multiply {self.shape} by {other.shape} matrices'
            )
        return IntMat.from_domain(self.domain_matrix() * other.domain_matrix())

    def __rmul__(self, scalar):
        scalar = _as_int(scalar)
        return IntMat([[scalar * entry for entry in row]
                       for row in self._rows])

    def __neg__(self):
        return -1 * self

    def __eq__(self, other):
        if not isinstance(other, IntMat):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f'IntMat({[list(row) for row in self._rows]})'

    def transpose(self):
        return IntMat(zip(*self._rows))

    @property
    def T(self):
        return self.transpose()

    def det(self):
        if not self.is_square:
            raise ValueError(f'Determinant of a {self.shape} matrix')
        return int(self.domain_matrix().det())

    def is_unimodular(self):
        return self.is_square and self.det() in (1, -1)

    def inverse(self):
        """Exact inverse, defined only for determinant +-1"""
        if not self.is_unimodular():
            raise ValueError('Only unimodular matrices have integer inverses')
        inverse = self.domain_matrix().convert_to(QQ).inv()
        return IntMat([
            [int(QQ.to_sympy(entry)) for entry in row]
            for row in inverse.to_list()
        ])

    def block(self, rows, cols):
        """Submatrix from a pair of slices"""
        return IntMat(row[cols] for row in self._rows[rows])

    def invariant_factors(self):
        """Smith normal form diagonal, zeros included, min(rows, cols) long"""
        factors = [abs(int(value))
                   for value in invariant_factors(self.domain_matrix())]
        return tuple(factors + [0] * (min(self.shape) - len(factors)))

    def as_array(self):
        return np.array(self._rows, dtype=np.int64)

    def tolist(self):
        return [list(row) for row in self._rows]


def elementary(size, i, j, factor=1):
    """I + factor * E_ij for i != j"""
    if i == j:
        raise ValueError('Elementary transvections need i != j')
    rows = IntMat.identity(size).tolist()
    rows[i][j] = factor
    return IntMat(rows)


def random_unimodular(rng, size, steps=6, spread=2):
    """Product of random transvections and a random sign pattern"""
    result = IntMat.identity(size)
    if size == 1:
        return int(rng.choice((-1, 1))) * result
    for _ in range(steps):
        i, j = rng.choice(size, size=2, replace=False)
        factor = int(rng.integers(-spread, spread + 1))
        result = elementary(size, int(i), int(j), factor) @ result
    signs = IntMat.diag(*[[[int(rng.choice((-1, 1)))]] for _ in range(size)])
    return signs @ result
