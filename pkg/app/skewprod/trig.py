"""
Trigonometric polynomials T^n -> R^r with integer frequencies.

A term is c * cos(2 pi <q, x>) or c * sin(2 pi <q, x>) with q in Z^n and
c in R^r. Frequencies are kept canonical (first nonzero entry positive),
so every polynomial has one representation. Coefficients given as ints,
Fractions or strings stay exact; floats stay floats.
"""
from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np


COS = 'cos'
SIN = 'sin'


def coerce_coefficient(value):
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (numbers.Rational, str)):
        return Fraction(value)
    raise ValueError(f'Coefficient {value!r} is neither rational nor float')


def _canonical(freq, kind):
    """(freq, kind, sign) with the first nonzero entry of freq positive"""
    freq = tuple(int(value) for value in freq)
    nonzero = [value for value in freq if value]
    if not nonzero:
        return freq, COS, (1 if kind == COS else 0)
    if nonzero[0] > 0:
        return freq, kind, 1
    flipped = tuple(-value for value in freq)
    return flipped, kind, (1 if kind == COS else -1)


class TrigPolynomial:
    """Finite Fourier sum with vector coefficients"""

    __slots__ = ('dim_in', 'dim_out', '_terms')

    def __init__(self, dim_in, dim_out, terms=()):
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)
        if self.dim_in < 1 or self.dim_out < 0:
            raise ValueError('TrigPolynomial needs dim_in >= 1, dim_out >= 0')
        self._terms = {}
        for freq, kind, coefficients in terms:
            self._accumulate(freq, kind, coefficients)

    def _accumulate(self, freq, kind, coefficients):
        if kind not in (COS, SIN):
            raise ValueError(f'Unknown term kind {kind!r}')
        if len(freq) != self.dim_in:
            raise ValueError(
                f'Frequency {tuple(freq)} does not live in Z^{self.dim_in}'
            )
        coefficients = [coerce_coefficient(value) for value in coefficients]
        if len(coefficients) != self.dim_out:
            raise ValueError(
                f'Term has {len(coefficients)} coefficients, '
                f'expected {self.dim_out}'
            )
        freq, kind, sign = _canonical(freq, kind)
        if sign == 0:
            return
        key = (freq, kind)
        current = self._terms.get(key, (0,) * self.dim_out)
        total = tuple(a + sign * b for a, b in zip(current, coefficients))
        if any(total):
            self._terms[key] = total
        else:
            self._terms.pop(key, None)

    @classmethod
    def zero(cls, dim_in, dim_out):
        return cls(dim_in, dim_out)

    @classmethod
    def constant(cls, dim_in, values):
        values = list(values)
        return cls(dim_in, len(values), [((0,) * dim_in, COS, values)])

    @classmethod
    def mode(cls, freq, kind, coefficients):
        coefficients = list(coefficients)
        return cls(len(freq), len(coefficients), [(freq, kind, coefficients)])

    @property
    def terms(self):
        """Sorted (freq, kind, coefficients) triples"""
        return [(freq, kind, coefficients)
                for (freq, kind), coefficients in sorted(self._terms.items())]

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return (self.dim_in, self.dim_out, self._terms) \
            == (other.dim_in, other.dim_out, other._terms)

    def __repr__(self):
        return (f'TrigPolynomial({self.dim_in} -> {self.dim_out}, '
                f'{len(self)} terms)')

    def _check_compatible(self, other):
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out):
            raise ValueError('Trig polynomials have different dimensions')

    def __add__(self, other):
        self._check_compatible(other)
        return TrigPolynomial(self.dim_in, self.dim_out,
                              self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = coerce_coefficient(factor)
        return TrigPolynomial(self.dim_in, self.dim_out, [
            (freq, kind, [factor * value for value in coefficients])
            for freq, kind, coefficients in self.terms
        ])

    def shift(self, values):
        """Add a constant vector"""
        return self + TrigPolynomial.constant(self.dim_in, values)

    @property
    def mean(self):
        """Exact integral over the torus"""
        key = ((0,) * self.dim_in, COS)
        return self._terms.get(key, (Fraction(0),) * self.dim_out)

    def oscillating_part(self):
        return TrigPolynomial(self.dim_in, self.dim_out, [
            term for term in self.terms if any(term[0])
        ])

    def max_frequency(self):
        return max((max(map(abs, freq)) for freq, _ in self._terms),
                   default=0)

    def compose_linear(self, M):
        """p o M for an integer matrix M acting on the torus"""
        M = np.asarray(getattr(M, 'rows', M), dtype=object)
        if M.shape != (self.dim_in, self.dim_in):
            raise ValueError(f'Cannot compose with a {M.shape} matrix')
        return TrigPolynomial(self.dim_in, self.dim_out, [
            (tuple(int(value) for value in M.T.dot(np.array(freq,
                                                             dtype=object))),
             kind, coefficients)
            for freq, kind, coefficients in self.terms
        ])

    def act(self, A):
        """A p for a matrix A acting on the output vector"""
        rows = getattr(A, 'rows', A)
        if isinstance(rows, np.ndarray):
            rows = rows.tolist()
        rows = [[coerce_coefficient(value) for value in row] for row in rows]
        if any(len(row) != self.dim_out for row in rows):
            raise ValueError('Output action has the wrong number of columns')
        return TrigPolynomial(self.dim_in, len(rows), [
            (freq, kind, [
                sum((a * c for a, c in zip(row, coefficients)), 0)
                for row in rows
            ])
            for freq, kind, coefficients in self.terms
        ])

    def _arrays(self):
        terms = self.terms
        freqs = np.array([freq for freq, _, _ in terms],
                         dtype=float).reshape(len(terms), self.dim_in)
        is_cos = np.array([kind == COS for _, kind, _ in terms], dtype=bool)
        coefficients = np.array(
            [[float(value) for value in c] for _, _, c in terms],
            dtype=float,
        ).reshape(len(terms), self.dim_out)
        return freqs, is_cos, coefficients

    def evaluate(self, x):
        """Values at x of shape (..., dim_in); returns (..., dim_out)"""
        x = np.asarray(x, dtype=float)
        freqs, is_cos, coefficients = self._arrays()
        phase = 2 * np.pi * (x @ freqs.T)
        basis = np.where(is_cos, np.cos(phase), np.sin(phase))
        return basis @ coefficients

    def jacobian(self, x):
        """Derivative at x; returns (..., dim_out, dim_in)"""
        x = np.asarray(x, dtype=float)
        freqs, is_cos, coefficients = self._arrays()
        phase = 2 * np.pi * (x @ freqs.T)
        slope = 2 * np.pi * np.where(is_cos, -np.sin(phase), np.cos(phase))
        return np.einsum('...t,to,ti->...oi', slope, coefficients, freqs)

    def as_terms(self):
        """JSON-friendly term list, exact coefficients as strings"""
        return [
            {
                'freq': list(freq),
                'kind': kind,
                'coef': [str(value) if isinstance(value, Fraction)
                         else value for value in coefficients],
            }
            for freq, kind, coefficients in self.terms
        ]
