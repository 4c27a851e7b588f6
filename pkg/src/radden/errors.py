"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised when a configuration value or shape combination is invalid."""


class DomainError(ValueError):
    """Raised when a numeric argument is outside the function's domain."""


class FormatError(RuntimeError):
    """Raised when a dataset or weights file is malformed or truncated."""
