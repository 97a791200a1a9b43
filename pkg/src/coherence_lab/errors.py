"""Exception types shared across the package."""


class CoherenceLabError(Exception):
    """Base class for all errors raised by this package."""


class InvariantViolation(CoherenceLabError, ValueError):
    """A constructed object failed one of its defining numerical invariants."""


class DimensionMismatch(CoherenceLabError, ValueError):
    """Operands have incompatible dimensions."""


class ParseError(CoherenceLabError, ValueError):
    """A JSON document does not match the expected schema."""


class RoofOptimizerError(CoherenceLabError, RuntimeError):
    """The decomposition search failed to produce any usable result."""
