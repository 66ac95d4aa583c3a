"""Shared exception types.

Exit-code mapping in the CLI: ConfigError -> 2, the numerical failures
(NonAdmissibleError, QuadratureError, DivergenceError) -> 3.
"""


class NuperimError(Exception):
    """Base class for package-specific failures."""


class ConfigError(NuperimError):
    """Malformed or incomplete run configuration."""


class UnsupportedShapeError(NuperimError):
    """Operation requested on a shape kind that has no implementation."""


class NonAdmissibleError(NuperimError):
    """Measure fails the (1 ^ |x|) integrability test."""


class QuadratureError(NuperimError):
    """Quadrature failed to meet its tolerance; carries the residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DivergenceError(NuperimError):
    """A sweep or study detected divergence where a limit was requested."""


class GateFailure(NuperimError):
    """A scaling family's tail mass moved against the regime's direction."""
