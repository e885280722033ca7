"""Exception hierarchy for the torus_pusher package."""


class TorusPusherError(Exception):
    """Base class for all package errors."""


class DomainError(TorusPusherError):
    """A point or state falls outside the validity domain of a map or field."""


class DegenerateField(TorusPusherError):
    """The magnetic field magnitude vanishes where it must be positive."""


class MissingPotential(TorusPusherError):
    """The field model does not supply an electrostatic potential."""


class TimeGridMismatch(TorusPusherError):
    """Two trajectories do not share the sample times required for comparison."""


class InsufficientData(TorusPusherError):
    """Not enough data points for the requested estimate."""


class MissingData(TorusPusherError):
    """Expected output files are absent."""


class ParseError(TorusPusherError):
    """Config text could not be parsed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(TorusPusherError):
    """A parsed config violates an invariant."""


class IntegrationError(DomainError):
    """A time-stepping run aborted mid-flight.

    Attributes
    ----------
    time : float
        Simulation time of the failing step.
    partial : Trajectory
        Samples accumulated before the failure.
    """

    def __init__(self, message, time, partial):
        super().__init__(message)
        self.time = time
        self.partial = partial
