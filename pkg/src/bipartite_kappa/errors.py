"""Exception types raised across the package.

All of them derive from :class:`KappaError` (itself a ``ValueError``) so that
callers and the CLI can separate bad input from genuine bugs.
"""


class KappaError(ValueError):
    pass


class OrderViolation(KappaError):
    pass


class NegativeCoordinate(KappaError):
    pass


class OutOfGrid(KappaError):
    pass


class GridTooSmall(KappaError):
    pass


class DimensionMismatch(KappaError):
    pass


class NonPositiveWidth(KappaError):
    pass


class WidthTooSmall(KappaError):
    pass


class InconsistentEdges(KappaError):
    pass


class PreconditionViolation(KappaError):
    pass


class GroundSetTooLarge(KappaError):
    pass


class InvalidCut(KappaError):
    pass


class DegenerateParameters(KappaError):
    pass


class MissingGamma4(KappaError):
    pass


class ElementOutOfRange(KappaError):
    pass


class NotDecreasing(KappaError):
    pass


class SolverError(RuntimeError):
    """The LP engine ended in a state the caller did not expect."""
