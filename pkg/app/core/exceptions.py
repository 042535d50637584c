"""
Errors raised by the laboratory modules
"""


class LabError(Exception):
    """Base class for computational failures of the laboratory."""


class NonConvergence(LabError):
    """Newton inversion of the perturbed torus map did not converge."""


class ExceptionalInput(LabError):
    """A point of the exceptional set was passed where it is undefined."""


class PoleAtZero(LabError):
    """A blow-up chart transition was requested at v = 0."""


class GapViolation(LabError):
    """The conorm/norm gap needed by the graph transform fails."""

    def __init__(self, message, index=None, ratio=None):
        super().__init__(message)
        self.index = index
        self.ratio = ratio


class NoConvergence(LabError):
    """The graph transform did not reach its fixed point."""


class Degenerate(LabError):
    """Tangent orthonormalization collapsed onto a zero vector."""


class MalformedNerve(LabError, ValueError):
    """A cocycle nerve references missing vertices, edges or data."""


class PinchingFailure(LabError):
    """The adapted metric did not pinch every sampled one-step ratio."""

    def __init__(self, message, worst_ratio=None):
        super().__init__(message)
        self.worst_ratio = worst_ratio
