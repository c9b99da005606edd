"""Exception types shared across the package."""

__all__ = ["InvalidInput", "NotOrthonormal", "NumericalFailure", "ConfigError", "IoError"]


class InvalidInput(ValueError):
    """An argument violates a documented precondition."""


class NotOrthonormal(InvalidInput):
    """A matrix that must have orthonormal columns does not."""


class NumericalFailure(RuntimeError):
    """An iterative numerical procedure exceeded its safety limits."""


class ConfigError(Exception):
    """Malformed experiment configuration. ``field`` names the offending key."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class IoError(OSError):
    """A file read or write failed."""
