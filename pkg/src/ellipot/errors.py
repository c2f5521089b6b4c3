"""Exception and warning types raised across the package."""


class EllipotError(ValueError):
    """Base class for domain errors."""


class NonPositiveAxis(EllipotError):
    pass


class DimensionTooSmall(EllipotError):
    pass


class DimensionMismatch(EllipotError):
    pass


class DimensionNotThree(EllipotError):
    pass


class NegativeParameter(EllipotError):
    pass


class NotExterior(EllipotError):
    pass


class NotInterior(EllipotError):
    pass


class NoConvergence(EllipotError):
    pass


class InvalidBound(EllipotError):
    pass


class ParameterOutOfRange(EllipotError):
    pass


class DegenerateAxes(EllipotError):
    pass


class NotProlate(EllipotError):
    pass


class NotOblate(EllipotError):
    pass


class ScaleNotGreaterThanOne(EllipotError):
    pass


class TooFewSamples(EllipotError):
    pass


class InvalidGravityConfig(EllipotError):
    pass


class MalformedLine(EllipotError):
    def __init__(self, line_number, text=""):
        self.line_number = line_number
        super().__init__(f"malformed point on line {line_number}: {text!r}")


class ToleranceNotMet(UserWarning):
    """Emitted when adaptive quadrature exhausts its subdivision budget."""
