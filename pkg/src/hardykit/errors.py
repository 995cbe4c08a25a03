"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
:class:`ConfigError` for inputs that violate a hypothesis or side condition,
and :class:`NumericalError` for computations that could not be carried out
to the requested tolerance.
"""


class HardyKitError(Exception):
    pass


class ConfigError(HardyKitError, ValueError):
    pass


class NumericalError(HardyKitError, ArithmeticError):
    pass


class PointOutsideDomain(ConfigError):
    pass


class SingularPoint(ConfigError):
    pass


class NonpositiveBase(ConfigError):
    pass


class ExponentOutOfRange(ConfigError):
    pass


class SideConditionViolated(ConfigError):
    pass


class MissingAuxFunction(ConfigError):
    pass


class ConfigInvalid(ConfigError):
    pass


class ZeroTestFunction(ConfigError):
    pass


class DivergentTail(NumericalError):
    """The cumulative integral is infinite at every interior point."""


class DivergentNorm(NumericalError):
    pass


class ToleranceNotReached(NumericalError):
    def __init__(self, message, estimate=float("nan"), error=float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class MonotonicityViolation(NumericalError):
    pass


class LogNotIntegrable(NumericalError):
    pass


class AllSamplesDegenerate(NumericalError):
    pass
