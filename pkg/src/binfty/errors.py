"""Exceptions raised across the package."""


class BInftyError(Exception):
    pass


class DivisionByZero(BInftyError, ZeroDivisionError):
    pass


class InvalidPermutation(BInftyError, ValueError):
    pass


class NotAMorphismDatum(BInftyError, ValueError):
    pass


class NotHomogeneous(BInftyError, ValueError):
    pass


class TruncationUnsound(BInftyError):
    """A computation touched data beyond the truncation cutoffs."""


class NotMaurerCartan(BInftyError, ValueError):
    pass


class NotRepresentable(BInftyError, ValueError):
    pass


class ActionAxiomViolation(BInftyError, ValueError):
    pass


class ActionsDoNotCommute(BInftyError, ValueError):
    pass


class NotAInftyStructure(BInftyError, ValueError):
    pass


class NotAMorphismSolution(BInftyError, ValueError):
    pass


class NotInSubalgebraH(BInftyError, ValueError):
    pass


class InjectivityRequired(BInftyError, ValueError):
    pass


class InvalidAlgebra(BInftyError, ValueError):
    pass


class ParseError(BInftyError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)
