"""Exception hierarchy shared by every ldpbayes package."""


class LdpBayesError(Exception):
    """Base class for all ldpbayes errors."""


class InvalidParameterError(LdpBayesError, ValueError):
    """A precondition on an argument does not hold."""


class UnsupportedBudgetError(InvalidParameterError):
    """The privacy budget cannot be met by the requested mechanism."""


class NumericFailureError(LdpBayesError, ArithmeticError):
    """A numerical routine failed to converge or bracket its root."""


class DecompositionError(NumericFailureError):
    """A matrix that must be positive definite is not."""


class SamplingFailureError(LdpBayesError, RuntimeError):
    """The sampler produced no usable transition."""


class ExperimentFailureError(LdpBayesError):
    """An experiment violated its acceptance policy."""


class ConfigError(LdpBayesError):
    """Invalid experiment configuration, optionally tied to a file line."""

    def __init__(self, message, line=None, source=None):
        self.message = message
        self.line = line
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.source and self.line:
            where = f"{self.source}:{self.line}: "
        elif self.line:
            where = f"line {self.line}: "
        return f"{where}{self.message}"
