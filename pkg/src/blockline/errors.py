"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) that the CLI reports
in its machine-readable error object.
"""


class BlocklineError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


class ValidationError(BlocklineError, ValueError):
    """Input does not satisfy a documented precondition."""


class DensityViolation(ValidationError):
    pass


class EndpointViolation(ValidationError):
    """First/last set of a sequence is not the required singleton."""


class CapExceeded(ValidationError):
    pass


class UnsupportedPrimitive(ValidationError):
    pass


class UnlabeledSequence(ValidationError):
    pass


class InfeasiblePattern(ValidationError):
    pass


class EmptySet(ValidationError):
    pass


class BracketFailure(ValidationError):
    pass


class Infeasible(ValidationError):
    pass


class NoElementAbove(BlocklineError, LookupError):
    pass


class NoElementBelow(BlocklineError, LookupError):
    pass


class ExtractionFailure(BlocklineError, RuntimeError):
    pass


class MembershipViolation(BlocklineError, RuntimeError):
    pass
