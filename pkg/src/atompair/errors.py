"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat:
configuration/validation problems, numerical failures, and bad physical
states are separate branches.
"""


class AtompairError(Exception):
    """Base class for all package-specific errors."""


class DomainError(AtompairError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidStateError(AtompairError, ValueError):
    """A density matrix (or X-state record) violates positivity/trace rules."""


class NonConvergenceError(AtompairError, RuntimeError):
    """An iterative numerical scheme failed to stabilise to tolerance."""


class DegenerateGeneratorError(AtompairError, RuntimeError):
    """The population generator's zero eigenvalue is not simple."""


class ComputationError(AtompairError, RuntimeError):
    """A numerical result failed an internal consistency check."""


class ConfigError(AtompairError, ValueError):
    """A run configuration failed schema or physical validation."""
