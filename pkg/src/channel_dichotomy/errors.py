"""Exception types shared across the package."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ToolkitError, ValueError):
    """Operands have incompatible shapes or factor dimensions."""


class InvalidInput(ToolkitError, ValueError):
    """An input violates a documented invariant; the message names it."""


class SizeGuardExceeded(ToolkitError, ValueError):
    """A tensor-power construction would exceed the configured size guard."""


class NumericalFailure(ToolkitError, RuntimeError):
    """A numerical routine failed to converge or produced an inconsistent result."""
