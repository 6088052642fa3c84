"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: configuration/input problems exit 2,
internal invariant violations exit 3.
"""


class RheakitError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RheakitError, ValueError):
    """A configuration object or file holds invalid values."""


class InputDomainError(RheakitError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class InvariantError(RheakitError, RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
