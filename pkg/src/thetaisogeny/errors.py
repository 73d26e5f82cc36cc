"""Exception hierarchy shared by every module of the package."""


class ThetaError(Exception):
    """Base class for all library errors."""


class MathFailure(ThetaError):
    """A computation could not be carried out on the given data."""


class DivisionByZero(MathFailure, ZeroDivisionError):
    pass


class ContextMismatch(ThetaError, ValueError):
    pass


class NoSuchRoot(MathFailure):
    """The field holds no primitive root of unity of the requested order."""


class NoRoot(MathFailure):
    """The element has no k-th root in the working field."""


class NoSqrt(NoRoot):
    pass


class BothZero(MathFailure):
    pass


class DegenerateData(MathFailure):
    """No admissible index selection exists (degenerate null point or bad input)."""


class Level2Unsupported(MathFailure):
    pass


class GenericityViolation(MathFailure):
    pass


class ScalarExtractionFailure(MathFailure):
    """Two affine points expected to be proportional are not."""


class InconsistentBlocks(MathFailure):
    pass


class NotTorsion(MathFailure):
    pass


class IsotropyViolation(MathFailure):
    pass


class NotSpanning(MathFailure):
    pass


class BudgetExceeded(ThetaError):
    pass


class SchemaError(ThetaError, ValueError):
    """Malformed serialized input."""
