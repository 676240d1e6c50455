"""Exception hierarchy shared by every sgauge module."""


class SgaugeError(Exception):
    """Base class for all errors raised by sgauge."""


class DimensionError(SgaugeError, ValueError):
    pass


class MalformedRationalError(SgaugeError, ValueError):
    def __init__(self, text):
        super().__init__(f"malformed rational: {text!r}")
        self.text = text


class CircuitFormatError(SgaugeError, ValueError):
    pass


class SingularMapError(SgaugeError, ValueError):
    pass


class DegenerateError(SgaugeError, ValueError):
    """Input is lower-dimensional, unbounded, empty, or otherwise degenerate."""


class ContainmentError(SgaugeError, ValueError):
    pass


class CandidateLimitError(SgaugeError, RuntimeError):
    pass


class PreconditionError(SgaugeError, ValueError):
    pass


class BoundaryError(SgaugeError, ValueError):
    pass


class BudgetExhausted(SgaugeError, RuntimeError):
    """Witness search ran out of budget before finishing its candidate scan."""

    def __init__(self, scanned):
        super().__init__(f"budget exhausted after {scanned} candidates")
        self.scanned = scanned
