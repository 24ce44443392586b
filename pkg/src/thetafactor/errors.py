"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ThetaFactorError(Exception):
    """Base class for all engine errors."""


class InvalidParabolicData(ThetaFactorError, ValueError):
    pass


class NonIncreasingWeights(InvalidParabolicData):
    pass


class NonPositiveMultiplicity(InvalidParabolicData):
    pass


class ZeroPolarization(ThetaFactorError, ValueError):
    pass


class NonIntegralSplit(ThetaFactorError, ValueError):
    pass


class UnbalancedSpec(ThetaFactorError, ValueError):
    pass


class MissingFlagData(ThetaFactorError, ValueError):
    pass


class InconsistentFlagDims(ThetaFactorError, ValueError):
    pass


class ZeroRank(ThetaFactorError, ValueError):
    pass


class RankOverflow(ThetaFactorError, ValueError):
    pass


class QImageOverflow(ThetaFactorError, ValueError):
    pass


class PreconditionViolated(ThetaFactorError, ValueError):
    pass


class InfeasibleFiberDim(ThetaFactorError, ValueError):
    pass


class RankOutOfRange(ThetaFactorError, ValueError):
    pass


class LabelOutOfRange(ThetaFactorError, ValueError):
    pass


class NumericallyUnstable(ThetaFactorError, ArithmeticError):
    pass


class UnconvertibleWeights(ThetaFactorError, ValueError):
    pass


class NotInZ(ThetaFactorError, ValueError):
    pass


class TooLarge(ThetaFactorError, ValueError):
    pass


class ParseError(ThetaFactorError, ValueError):
    pass


class InvariantViolation(ThetaFactorError, ValueError):
    """A loaded document breaks a type invariant; ``path`` names the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
