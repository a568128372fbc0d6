"""Exception hierarchy shared by every module of the package."""


class HardcoreError(Exception):
    """Base class for all computational failures raised by hardcore2d."""


class PoleError(HardcoreError, ValueError):
    """Argument sits on a pole of gamma or digamma."""


class DomainError(HardcoreError, ValueError):
    """Argument outside the supported domain of a function."""


class ConvergenceError(HardcoreError):
    """A series or iteration did not converge within its cap."""


class RootNotFoundError(HardcoreError):
    """The root scan reached its ceiling before finding enough roots."""


class QuadratureError(HardcoreError):
    """Adaptive quadrature could not reach the requested accuracy."""


class StepTooLargeError(HardcoreError, ValueError):
    """Finite-difference step is too large for reliable state alignment."""
