"""Exception hierarchy shared by all subpackages."""


class BiocascadeError(Exception):
    """Base class for every error raised by this package."""


# rfnc
class DivisionByZeroError(BiocascadeError, ZeroDivisionError):
    pass


class DimensionMismatchError(BiocascadeError, ValueError):
    pass


class NegativeConstantError(BiocascadeError, ValueError):
    pass


class RfncSyntaxError(BiocascadeError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


# bayes
class ModelError(BiocascadeError, ValueError):
    """A Bayesian model table violates its probability invariants."""


class ZeroReferenceError(ModelError):
    """The reference state [S=0],[F=0] has zero prior or likelihood."""


# markov
class SpecError(BiocascadeError, ValueError):
    pass


class TimeStepTooLargeError(BiocascadeError, ValueError):
    pass


class NegativeRateError(BiocascadeError, ValueError):
    pass


class ReducibleError(BiocascadeError, ValueError):
    pass


class StateSpaceTooLargeError(BiocascadeError, ValueError):
    pass


class CoefficientViolationError(BiocascadeError, ArithmeticError):
    pass


# cascade
class UnreachableStateError(BiocascadeError, ValueError):
    pass


class NoEquilibriumError(BiocascadeError, ArithmeticError):
    pass


class NetworkError(BiocascadeError, ValueError):
    pass


# sim
class StalledError(BiocascadeError, RuntimeError):
    pass


class UnstableStepError(BiocascadeError, ValueError):
    pass
