"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter, config document, or derived quantity violates its declared range."""


class DegenerateCavityError(ArithmeticError):
    """Reflection denominator vanished (perfect-mirror, zero-phase corner case)."""


class UsageError(Exception):
    """Bad command line (unknown subcommand, conflicting flags)."""
