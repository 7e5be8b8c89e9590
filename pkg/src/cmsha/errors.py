"""Exception types shared across the package."""


class Error(Exception):
    """Base class for all package-specific errors."""


class PrecisionError(Error, ValueError):
    """Requested precision is out of range or not an integer."""


class DomainError(Error, ValueError):
    """A mathematical argument lies outside the function's domain."""


class InputError(Error, ValueError):
    """Structured input is malformed (wrong residue class, mismatched
    discriminant, non-prime q, and so on)."""


class ConductorError(DomainError):
    """An ideal or element is not coprime to the character conductor."""


class ResourceError(Error, RuntimeError):
    """A cutoff, iteration bound, or memory estimate was exceeded."""


class RootNumberUnstable(Error, RuntimeError):
    """The functional-equation solve for the root number disagreed across
    evaluation points by more than the working tolerance."""


class PrecisionExhausted(Error, RuntimeError):
    """A value failed its integrality check by more than the accepted
    tolerance in strict mode."""
