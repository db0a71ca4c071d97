"""Exception hierarchy shared by the numerical modules."""


class SqueezeError(Exception):
    """Base class for all errors raised by pdcsqueeze."""


class ValidationError(SqueezeError, ValueError):
    """An input violates a documented precondition.

    ``field`` names the offending parameter when there is one.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class TruncationError(SqueezeError):
    """A series hit ``max_terms`` before meeting its convergence test."""


class PrecisionError(SqueezeError):
    """Cancellation in an alternating sum exceeds the working precision."""


class QuadratureError(SqueezeError):
    """Gauss-Hermite order escalation failed to converge."""


class FlatFunctionError(SqueezeError):
    """The objective of a maximisation is constant to within tolerance."""


class GridError(SqueezeError):
    """Sampled kernels are incompatible or under-resolved."""
