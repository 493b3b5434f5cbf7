"""Exception types shared across the package."""


class StrataError(Exception):
    """Base class for all errors raised by this package."""


class VariableMismatch(StrataError, ValueError):
    """Operands live over different variable lists."""


class InvalidOrder(StrataError, ValueError):
    """A matrix does not define a term order."""


class NotReliable(StrataError):
    """General tails were requested for an order with infinite tails."""


class EmptyStratum(StrataError):
    """An exclusion ideal divides a basis monomial, so no ideal qualifies."""


class UnitIdeal(StrataError):
    """The ideal is the whole ring; it has no dimension."""


class HypothesisViolation(StrataError):
    """The product-structure prediction does not apply to the given data."""


class InvalidSegment(StrataError, ValueError):
    """Segment-family parameters outside their admissible range."""


class ParseError(StrataError):
    """Problem text does not follow the grammar; carries a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SemanticError(StrataError):
    """Problem text parses but does not describe a valid problem."""
