"""Exception hierarchy.

Every error raised on purpose by the library derives from ``AnabeliaError``.
Rejections of a black-box oracle derive from ``OracleRejected`` and carry a
``witness`` dict that pins down the violated identity.
"""


class AnabeliaError(Exception):
    """Base class."""


# algebra
class ZeroInverse(AnabeliaError, ZeroDivisionError):
    pass


class SpecMismatch(AnabeliaError, ValueError):
    pass


class DegreeZero(AnabeliaError, ValueError):
    pass


# function field
class ZeroFunction(AnabeliaError, ValueError):
    pass


class InfinitePlaceInE(AnabeliaError, ValueError):
    pass


class BadAlpha(AnabeliaError, ValueError):
    pass


class NoFreeRationalPlace(AnabeliaError):
    pass


# hyperelliptic / counting
class BudgetExceeded(AnabeliaError):
    pass


class InconsistentCounts(AnabeliaError):
    pass


class LevelMismatch(AnabeliaError, ValueError):
    pass


class OrderMismatch(AnabeliaError):
    pass


class GenusZero(AnabeliaError, ValueError):
    pass


class Mismatch(AnabeliaError):
    """Two independent computations of the same quantity disagree."""


# recovery
class OracleRejected(AnabeliaError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = dict(witness or {})


class OracleInconsistent(OracleRejected):
    pass


class AdditivityViolation(OracleRejected):
    pass


class DecompositionMismatch(OracleRejected):
    pass


class ZeroSearchFailed(AnabeliaError):
    pass


class TowerExhausted(AnabeliaError):
    """Level cap reached without a collision; inconclusive, not a rejection."""


class MalformedTau(AnabeliaError, ValueError):
    pass


# cli
class ParseError(AnabeliaError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(AnabeliaError, ValueError):
    pass
