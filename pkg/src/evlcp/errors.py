"""Exception types raised across the package."""


class EvlcpError(Exception):
    """Base class for every error raised by evlcp."""


class ShapeMismatch(EvlcpError, ValueError):
    pass


class SingularMatrix(EvlcpError, ArithmeticError):
    pass


class NotNonnegative(EvlcpError, ValueError):
    pass


class NoConvergence(EvlcpError, RuntimeError):
    pass


class TooLarge(EvlcpError, ValueError):
    """Raised when an exhaustive enumeration would exceed its cap."""

    def __init__(self, size, cap):
        super().__init__(f"enumeration size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class SingularJacobian(EvlcpError, ArithmeticError):
    pass


class MultipleSolutions(EvlcpError):
    """Two feasible active configurations give different solutions."""

    def __init__(self, x1, x2):
        super().__init__("problem has more than one solution (row W-property violated)")
        self.solutions = (x1, x2)


class NoSolution(EvlcpError):
    pass


class NotApplicable(EvlcpError):
    """A bound's hypothesis is not met; ``detail`` carries the diagnostic."""

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail


class EtaTooLarge(EvlcpError, ValueError):
    pass


class MembershipViolated(EvlcpError, ValueError):
    pass


class NotVlcp(EvlcpError, ValueError):
    pass


class SampleSingular(EvlcpError, ArithmeticError):
    pass


class DegenerateSample(EvlcpError, RuntimeError):
    pass


class EmptyInput(EvlcpError, ValueError):
    pass
