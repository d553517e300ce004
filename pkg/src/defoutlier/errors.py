"""Exception types shared across the package."""


class TheoryError(Exception):
    """Base class for errors raised by this package."""


class ParseError(TheoryError):
    """Syntax or validity error in a theory file, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class ReservedLetterError(ParseError):
    """An identifier uses a letter prefix reserved for generated theories."""


class ScopeError(TheoryError):
    """Operation invoked on a theory outside its supported fragment."""


class BudgetExceededError(TheoryError):
    """Exhaustive search exceeded its node budget; never a wrong answer."""

    def __init__(self, budget: int):
        super().__init__(f"search budget of {budget} nodes exceeded")
        self.budget = budget


class InvalidQueryError(ValueError):
    """Outlier query violates its structural preconditions."""


class InfeasibleProfileError(ValueError):
    """Random theory profile cannot be satisfied (e.g. tightness > letters)."""
