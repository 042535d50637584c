"""
Invariant complements by the graph transform.

A cocycle over a periodic orbit x_0, ..., x_{n-1} is a list of square
blocks T_i mapping the fiber at x_i to the fiber at x_{i+1}. When the first
``sub_dim`` coordinates span an invariant subbundle E1,

    T_i = [[T1_i, C_i],
           [0,    T3_i]],

and m(T3_i) > ||T1_i|| at every point, the complement is the graph of the
unique gamma with gamma_{i+1} T3_i = T1_i gamma_i + C_i.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.exceptions import GapViolation, NoConvergence


logger = logging.getLogger(__name__)

MAX_SWEEPS = 50
SWEEP_TOL = 1e-12
INVARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class GraphComplement:
    graphs: tuple
    residual: float
    contraction: float
    sweeps: int

    def basis(self, index):
        """Unit columns spanning the complement at orbit point index"""
        gamma = self.graphs[index]
        columns = np.vstack([gamma, np.eye(gamma.shape[1])])
        return columns / np.linalg.norm(columns, axis=0)


@dataclass(frozen=True)
class SplittingFrame:
    """Per orbit point bases of E^s, E^c and E^u"""
    stable: tuple
    center: tuple
    unstable: tuple
    dims: tuple
    residual: float
    contraction: float

    def __post_init__(self):
        if len(self.dims) != 3 or min(self.dims) < 0:
            raise ValueError('dims must be three non-negative integers')


def _as_blocks(cocycle):
    blocks = [np.asarray(block, dtype=float) for block in cocycle]
    if not blocks:
        raise ValueError('The cocycle needs at least one block')
    size = blocks[0].shape[0]
    for block in blocks:
        if block.shape != (size, size):
            raise ValueError('Cocycle blocks must be equal square matrices')
    return blocks


def _split(block, sub_dim):
    scale = max(1.0, np.abs(block).max())
    if np.abs(block[sub_dim:, :sub_dim]).max() > INVARIANCE_TOL * scale:
        raise ValueError('The first coordinates must span an invariant '
                         'subbundle (lower-left block must vanish)')
    return block[:sub_dim, :sub_dim], block[:sub_dim, sub_dim:], \
        block[sub_dim:, sub_dim:]


def graph_transform_complement(cocycle, sub_dim):
    """The invariant complement of the first sub_dim coordinates"""
    blocks = _as_blocks(cocycle)
    size = blocks[0].shape[0]
    if not 0 < sub_dim < size:
        raise ValueError('sub_dim must lie strictly between 0 and the size')
    parts = [_split(block, sub_dim) for block in blocks]

    ratios = []
    for index, (top, _, bottom) in enumerate(parts):
        norm = np.linalg.norm(top, 2)
        conorm = np.linalg.svd(bottom, compute_uv=False).min()
        ratio = norm / conorm if conorm > 0 else np.inf
        if not ratio < 1:
            raise GapViolation(
                f'm(T3) = {conorm:.6g} does not exceed ||T1|| = '
                f'{norm:.6g} at orbit point {index}',
                index=index, ratio=ratio,
            )
        ratios.append(ratio)
    inverses = [np.linalg.inv(bottom) for _, _, bottom in parts]

    period = len(blocks)
    graphs = [np.zeros((sub_dim, size - sub_dim)) for _ in range(period)]
    for sweep in range(1, MAX_SWEEPS + 1):
        change = 0.0
        for index, (top, corner, _) in enumerate(parts):
            target = (index + 1) % period
            updated = (top @ graphs[index] + corner) @ inverses[index]
            scale = max(1.0, np.abs(updated).max())
            change = max(change,
                         np.abs(updated - graphs[target]).max() / scale)
            graphs[target] = updated
        if change < SWEEP_TOL:
            break
    else:
        logger.warning('Graph transform stalled after %d sweeps', MAX_SWEEPS)
        raise NoConvergence(
            f'No {SWEEP_TOL:g} fixed point after {MAX_SWEEPS} sweeps '
            f'(last change {change:.3g})'
        )

    residual = max(
        np.abs(top @ graphs[index] + corner
               - graphs[(index + 1) % period] @ bottom).max()
        for index, (top, corner, bottom) in enumerate(parts)
    )
    return GraphComplement(
        graphs=tuple(graphs),
        residual=float(residual),
        contraction=float(max(ratios)),
        sweeps=sweep,
    )


def _intersection(first, second, dim):
    """Orthonormal basis of span(first) & span(second), of dimension dim"""
    if dim == 0:
        return np.zeros((first.shape[0], 0))
    stacked = np.hstack([first, -second])
    _, _, vt = np.linalg.svd(stacked)
    null = vt[-dim:].T
    common = first @ null[:first.shape[1]]
    basis, _ = np.linalg.qr(common)
    return basis


def splitting_frame(cocycle, dims):
    """E^s, E^c, E^u along a periodic orbit.

    Coordinates are ordered (s, c, u); E^s is the first s coordinates and
    E^u the last u, both invariant. The complement of E^s comes from the
    cocycle, that of E^u from the inverse cocycle along the reversed orbit,
    and E^c is their intersection.
    """
    blocks = _as_blocks(cocycle)
    s, c, u = dims
    size = blocks[0].shape[0]
    if s + c + u != size or min(dims) < 0:
        raise ValueError(f'dims {dims} do not add up to {size}')
    if s == 0 or u == 0:
        raise ValueError('Stable and unstable dimensions must be positive')
    period = len(blocks)

    stable_side = graph_transform_complement(blocks, s)

    order = list(range(s + c, size)) + list(range(s + c))
    permutation = np.eye(size)[order]
    reversed_blocks = [
        permutation @ np.linalg.inv(blocks[(-k - 1) % period])
        @ permutation.T
        for k in range(period)
    ]
    unstable_side = graph_transform_complement(reversed_blocks, u)

    eye = np.eye(size)
    stable, center, unstable = [], [], []
    for index in range(period):
        hat_s = stable_side.basis(index)
        hat_u = permutation.T @ unstable_side.basis((-index) % period)
        stable.append(eye[:, :s])
        unstable.append(eye[:, s + c:])
        center.append(_intersection(hat_s, hat_u, c))
    return SplittingFrame(
        stable=tuple(stable),
        center=tuple(center),
        unstable=tuple(unstable),
        dims=(s, c, u),
        residual=max(stable_side.residual, unstable_side.residual),
        contraction=max(stable_side.contraction, unstable_side.contraction),
    )


def _random_orthogonal(rng, size):
    q, r = np.linalg.qr(rng.normal(size=(size, size)))
    return q * np.sign(np.diag(r))


def random_gapped_cocycle(rng, period=8, sub_dim=2, size=5, gap=2.0):
    """Random block upper-triangular cocycle with m(T3) >= gap ||T1||"""
    blocks = []
    rest = size - sub_dim
    for _ in range(period):
        top = rng.normal(size=(sub_dim, sub_dim))
        top /= np.linalg.norm(top, 2)
        bottom = _random_orthogonal(rng, rest) @ np.diag(
            rng.uniform(gap + 0.1, 2 * gap + 1, rest)
        ) @ _random_orthogonal(rng, rest)
        block = np.zeros((size, size))
        block[:sub_dim, :sub_dim] = top
        block[:sub_dim, sub_dim:] = rng.normal(size=(sub_dim, rest))
        block[sub_dim:, sub_dim:] = bottom
        blocks.append(block)
    return blocks
