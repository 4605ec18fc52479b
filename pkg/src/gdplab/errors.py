"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid grid, solver or experiment configuration.

    ``field`` names the offending parameter when there is a single one.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ConfigValidationError(ConfigurationError):
    """A configuration document failed validation; carries every problem found."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DomainError(ValueError):
    """A quantity is undefined for the given input (e.g. division by a zero norm)."""


class ResourceError(RuntimeError):
    """A requested discretization exceeds the supported size."""


class BlowUpError(FloatingPointError):
    """The time integrator produced non-finite values.

    ``last_time`` is the last time at which the state was finite.
    """

    def __init__(self, message, last_time=None):
        super().__init__(message)
        self.last_time = last_time


class SampleLookupError(LookupError):
    """A time was requested that is not a recorded trajectory sample."""
