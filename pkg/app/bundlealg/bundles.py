"""
Principal T^k-bundles at the level of integer data.

Everything is stated on H_2 with matrices acting on the left; the H^2
statements are the transposes. A bundle over a simply connected base with
free H_2 is determined by its k x m Chern matrix, a clutching over a wedge
of m two-spheres by its k x m exponent matrix, and a finite cover by a
cocycle of windings in Z^k and rational constants in (Q/Z)^k.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import singledispatch

from core.exceptions import MalformedNerve
from dyncore.matrices import DEFAULT_B, Mat2Int
from bundlealg.intmat import IntMat


logger = logging.getLogger(__name__)

KUMMER_RANK = 22
LATTICE_RANK = 4
EXCEPTIONAL_COUNT = 16


@dataclass(frozen=True)
class ClutchingData:
    """Gluing maps f_j(u) = (u^{a_1j}, ..., u^{a_kj}) over S^2_j"""
    exponents: IntMat

    def __post_init__(self):
        object.__setattr__(self, 'exponents', IntMat.coerce(self.exponents))

    @property
    def k(self):
        return self.exponents.shape[0]

    @property
    def m(self):
        return self.exponents.shape[1]

    @classmethod
    def universal(cls, k):
        """Restriction of the universal bundle to a wedge of k spheres"""
        return cls(IntMat.identity(k))


@dataclass(frozen=True)
class BundleClass:
    """Rows are first Chern classes in a fixed basis of H^2(X)"""
    chern: IntMat

    def __post_init__(self):
        object.__setattr__(self, 'chern', IntMat.coerce(self.chern))

    @property
    def k(self):
        return self.chern.shape[0]

    @property
    def m(self):
        return self.chern.shape[1]


@dataclass(frozen=True)
class EdgeDatum:
    """Transition on an overlap: winding in Z^k and constant in (Q/Z)^k"""
    winding: tuple
    constant: tuple

    def __post_init__(self):
        object.__setattr__(self, 'winding',
                           tuple(int(value) for value in self.winding))
        object.__setattr__(self, 'constant', tuple(
            Fraction(value) % 1 for value in self.constant
        ))

    @classmethod
    def zero(cls, k):
        return cls((0,) * k, (0,) * k)

    def __neg__(self):
        return EdgeDatum(
            tuple(-value for value in self.winding),
            tuple(-value for value in self.constant),
        )

    def __add__(self, other):
        return EdgeDatum(
            tuple(a + b for a, b in zip(self.winding, other.winding)),
            tuple(a + b for a, b in zip(self.constant, other.constant)),
        )

    def is_zero(self):
        return not any(self.winding) and not any(self.constant)


@dataclass(frozen=True)
class CocycleData:
    """Finite-nerve cocycle; edges[(a, b)] is the transition from a to b"""
    k: int
    vertices: tuple
    edges: dict
    triangles: tuple = field(default=())

    def edge(self, a, b):
        """Datum on the oriented edge a -> b; the reverse edge negates it"""
        if (a, b) in self.edges:
            return self.edges[(a, b)]
        if (b, a) in self.edges:
            return -self.edges[(b, a)]
        raise MalformedNerve(f'Edge {a}-{b} is not part of the nerve')

    def validate(self):
        vertices = set(self.vertices)
        if len(vertices) != len(self.vertices):
            raise MalformedNerve('Nerve has duplicate vertices')
        for (a, b), datum in self.edges.items():
            if a not in vertices or b not in vertices:
                raise MalformedNerve(f'Edge {a}-{b} uses an unknown vertex')
            if a == b:
                raise MalformedNerve(f'Edge {a}-{b} is a loop')
            if (b, a) in self.edges:
                raise MalformedNerve(f'Edge {a}-{b} is given twice')
            if not isinstance(datum, EdgeDatum):
                raise MalformedNerve(f'Edge {a}-{b} has no transition datum')
            if len(datum.winding) != self.k or len(datum.constant) != self.k:
                raise MalformedNerve(
                    f'Edge {a}-{b} carries data of the wrong rank'
                )
        for triangle in self.triangles:
            if len(set(triangle)) != 3:
                raise MalformedNerve(f'Triangle {triangle} is degenerate')
            for a, b in itertools.combinations(triangle, 2):
                self.edge(a, b)
        return self


def cocycle_check(cocycle):
    """True iff every triangle of the nerve closes exactly"""
    cocycle.validate()
    for a, b, c in cocycle.triangles:
        total = cocycle.edge(a, b) + cocycle.edge(b, c) + cocycle.edge(c, a)
        if not total.is_zero():
            logger.debug('Triangle %s does not close: %s', (a, b, c), total)
            return False
    return True


def subdivide_edge(cocycle, edge):
    """Refine the nerve by a new vertex on edge, adding zero winding.

    The new vertex n splits (a, b) into a -> n carrying the old datum and
    n -> b carrying zero; each triangle (a, b, c) splits into (a, n, c) and
    (n, b, c) with n -> c carrying the datum of b -> c.
    """
    cocycle.validate()
    a, b = edge
    datum = cocycle.edge(a, b)
    new = (a, b)
    if new in cocycle.vertices:
        raise ValueError(f'Edge {a}-{b} has already been subdivided')
    edges = {
        key: value for key, value in cocycle.edges.items()
        if set(key) != {a, b}
    }
    edges[(a, new)] = datum
    edges[(new, b)] = EdgeDatum.zero(cocycle.k)
    triangles = []
    for triangle in cocycle.triangles:
        if a not in triangle or b not in triangle:
            triangles.append(triangle)
            continue
        (c,) = set(triangle) - {a, b}
        edges[(new, c)] = cocycle.edge(b, c)
        triangles.extend([(a, new, c), (new, b, c)])
    return CocycleData(
        k=cocycle.k,
        vertices=cocycle.vertices + (new,),
        edges=edges,
        triangles=tuple(triangles),
    )


def two_disk_sphere(winding):
    """Cover of S^2 by two disks glued along one overlap"""
    winding = tuple(winding)
    datum = EdgeDatum(winding, (0,) * len(winding))
    return CocycleData(k=len(winding), vertices=('N', 'S'),
                       edges={('N', 'S'): datum})


def require_unimodular(A, k):
    A = IntMat.coerce(A)
    if A.shape != (k, k):
        raise ValueError(f'Automorphism must be {k}x{k}, got {A.shape}')
    if not A.is_unimodular():
        raise ValueError(f'Automorphism has determinant {A.det()}, not +-1')
    return A


def apply_aut(A, x):
    """A(E): compose every transition function with A in GL(k, Z)"""
    return _apply_aut(x, A)


@singledispatch
def _apply_aut(x, A):
    raise TypeError(f'Cannot apply a torus automorphism to {type(x).__name__}')


@_apply_aut.register
def _(x: ClutchingData, A):
    A = require_unimodular(A, x.k)
    return ClutchingData(A @ x.exponents)


@_apply_aut.register
def _(x: BundleClass, A):
    A = require_unimodular(A, x.k)
    return BundleClass(A @ x.chern)


@_apply_aut.register
def _(x: CocycleData, A):
    A = require_unimodular(A, x.k)
    x.validate()

    def act(datum):
        return EdgeDatum(
            [sum(a * w for a, w in zip(row, datum.winding)) for row in A.rows],
            [sum(a * c for a, c in zip(row, datum.constant))
             for row in A.rows],
        )

    return CocycleData(
        k=x.k,
        vertices=x.vertices,
        edges={key: act(datum) for key, datum in x.edges.items()},
        triangles=x.triangles,
    )


def pullback_class(x, g_star):
    """g^*(E) for a base map acting on H_2 of the base by g_star"""
    return _pullback(x, IntMat.coerce(g_star))


def _require_base_shape(g_star, m):
    if g_star.shape != (m, m):
        raise ValueError(
            f'Base action must be {m}x{m}, got {g_star.shape}'
        )


@singledispatch
def _pullback(x, g_star):
    raise TypeError(f'Cannot pull back {type(x).__name__}')


@_pullback.register
def _(x: ClutchingData, g_star):
    _require_base_shape(g_star, x.m)
    return ClutchingData(x.exponents @ g_star)


@_pullback.register
def _(x: BundleClass, g_star):
    _require_base_shape(g_star, x.m)
    return BundleClass(x.chern @ g_star)


def amap_exists(A, H, F):
    """True iff A H = H F, the H_2 form of h o f ~ rho_A o h"""
    H = IntMat.coerce(H)
    F = IntMat.coerce(F)
    k, m = H.shape
    A = require_unimodular(A, k)
    _require_base_shape(F, m)
    return A @ H == H @ F


def simply_connected(H):
    """True iff H: Z^m -> Z^k is onto, i.e. all k invariant factors are 1"""
    H = IntMat.coerce(H)
    k = H.shape[0]
    factors = H.invariant_factors()
    return len(factors) == k and all(value == 1 for value in factors)


def lemma_key_check(A, M, G):
    """True iff A(E) and g^*(E) have the same clutching exponents"""
    return apply_aut(A, M).exponents == pullback_class(M, G).exponents


def _half_lattice_index(bits):
    return int(''.join(str(bit) for bit in bits), 2)


def exceptional_permutation(B):
    """Action of B (+) B on the 16 points of (Z/2)^4 as a permutation matrix.

    Point i has binary digits (x1, y1, x2, y2); column i is its image.
    """
    B = B if isinstance(B, Mat2Int) else Mat2Int.from_rows(B)
    out = [[0] * EXCEPTIONAL_COUNT for _ in range(EXCEPTIONAL_COUNT)]
    for index, bits in enumerate(itertools.product((0, 1), repeat=4)):
        x1, y1, x2, y2 = bits
        image = (
            (B.a * x1 + B.b * y1) % 2, (B.c * x1 + B.d * y1) % 2,
            (B.a * x2 + B.b * y2) % 2, (B.c * x2 + B.d * y2) % 2,
        )
        out[_half_lattice_index(image)][index] = 1
    return IntMat(out)


def kummer_induced_action(B, fixes_exceptional=True):
    """H_2 action diag(B^2, I_4, S_16) of the Kummer map induced by B (+) B.

    With fixes_exceptional the exceptional curves must be fixed one by
    one, which holds when B = I mod 2.
    """
    B = B if isinstance(B, Mat2Int) else Mat2Int.from_rows(B)
    if B.det != 1:
        raise ValueError(f'B must lie in SL(2, Z), det is {B.det}')
    S16 = exceptional_permutation(B)
    if fixes_exceptional and S16 != IntMat.identity(EXCEPTIONAL_COUNT):
        raise ValueError('B (+) B permutes the exceptional curves')
    return IntMat.diag(B.squared(), IntMat.identity(LATTICE_RANK), S16)


def kummer_configuration(k, B=DEFAULT_B):
    """(A, H, F) for the fiber rank k bundle over the Kummer surface"""
    F = kummer_induced_action(B, fixes_exceptional=True)
    if k == KUMMER_RANK:
        return F, IntMat.identity(KUMMER_RANK), F
    if not 2 <= k <= 20:
        raise ValueError(f'Fiber rank must lie in [2, 20] or be 22, got {k}')
    A = IntMat.diag(B.squared(), IntMat.identity(k - 2)) if k > 2 \
        else IntMat.coerce(B.squared())
    H = IntMat.hstack(IntMat.identity(k),
                      IntMat.zeros(k, KUMMER_RANK - k))
    return A, H, F
