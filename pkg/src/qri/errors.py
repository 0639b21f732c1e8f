"""Exception types shared across the package."""


class QRIError(Exception):
    pass


class ValidationError(QRIError, ValueError):
    """An input violates a state, basis or distribution invariant."""


class DimensionMismatch(QRIError, ValueError):
    pass


class AbsoluteContinuityViolation(QRIError, ArithmeticError):
    """q_i vanishes where p_i does not, so D(p||q) would be infinite."""
