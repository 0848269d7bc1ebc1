"""Exception types raised by the package."""


class BaseMismatchError(ValueError):
    """Tangent data or tensors attached to different base points were combined."""


class MalformedTensorError(ValueError):
    """A tensor violates a structural invariant beyond tolerance."""


class NonUnimodularError(ValueError):
    """A matrix expected in SL(2, R) has determinant away from 1."""


class DegenerateFrameError(RuntimeError):
    pass


class NonPeriodicError(ValueError):
    pass


class FlowError(RuntimeError):
    """Numerical integration left the domain or produced non-finite values."""
