"""
Lyapunov spectra by QR re-orthonormalisation of a tangent frame.

A system is anything with ``dim``, ``apply(p)`` and ``diff(p)``; the frame
is pushed by the differential, re-orthonormalised every step, and the
exponents are running averages of log |diag R|.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import Degenerate
from dyncore.maps import perturbed_apply, perturbed_diff, reduce_mod1


logger = logging.getLogger(__name__)

MIN_ITERS = 1000
TRACE_POINTS = 100


class TorusSystem:
    """B_{eps,d} (+) B_{eps,d} on T^4"""
    dim = 4

    def __init__(self, params):
        self.params = params

    def apply(self, p):
        return perturbed_apply(self.params, p)

    def diff(self, p):
        return perturbed_diff(self.params, p)


class TranslationSystem:
    """p -> p + shift on the torus of dimension len(shift)"""

    def __init__(self, shift):
        self.shift = np.asarray(shift, dtype=float)
        self.dim = len(self.shift)

    def apply(self, p):
        return reduce_mod1(np.asarray(p) + self.shift)

    def diff(self, p):
        return np.eye(self.dim)


@dataclass(frozen=True)
class LyapunovReport:
    exponents: tuple
    n_iters: int
    residuals: tuple
    log_jacobian_mean: float
    trace: list = field(default_factory=list, compare=False)

    @property
    def exponent_sum(self):
        return float(sum(self.exponents))

    def trace_rows(self):
        """(iteration, exponent_1, ..., exponent_n) rows for CSV output"""
        return [(step, *values) for step, values in self.trace]


def _checkpoints(n_iters, count):
    marks = np.unique(np.linspace(0, n_iters, count + 1).astype(int)[1:])
    return set(int(mark) for mark in marks)


def lyapunov_spectrum(system, p, n_iters, transient=0):
    """Estimate the Lyapunov spectrum of system along the orbit of p.

    The first ``transient`` iterates only move the base point. Residuals
    are the standard deviations of the running estimates over the final
    decade [n_iters / 10, n_iters].
    """
    if n_iters < MIN_ITERS:
        raise ValueError(f'n_iters must be at least {MIN_ITERS}')
    p = np.asarray(p, dtype=float)
    for _ in range(transient):
        p = system.apply(p)

    frame = np.eye(system.dim)
    sums = np.zeros(system.dim)
    log_det = 0.0
    checkpoints = _checkpoints(n_iters, TRACE_POINTS)
    trace = []
    for step in range(1, n_iters + 1):
        jac = system.diff(p)
        p = system.apply(p)
        frame, upper = np.linalg.qr(jac @ frame)
        growth = np.abs(np.diag(upper))
        if np.any(growth == 0) or not np.all(np.isfinite(growth)):
            raise Degenerate(
                f'Tangent frame collapsed at iteration {step}'
            )
        # keep the frame orientation continuous
        frame = frame * np.sign(np.diag(upper))
        sums += np.log(growth)
        log_det += np.linalg.slogdet(jac)[1]
        if step in checkpoints:
            trace.append((step, tuple(np.sort(sums / step)[::-1])))

    exponents = np.sort(sums / n_iters)[::-1]
    final_decade = np.array(
        [values for step, values in trace if step >= n_iters / 10]
    )
    residuals = final_decade.std(axis=0)
    logger.debug('Lyapunov exponents after %d iterations: %s',
                 n_iters, exponents)
    return LyapunovReport(
        exponents=tuple(float(value) for value in exponents),
        n_iters=n_iters,
        residuals=tuple(float(value) for value in residuals),
        log_jacobian_mean=float(log_det / n_iters),
        trace=trace,
    )
