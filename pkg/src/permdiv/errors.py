"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class PermdivError(Exception):
    """Base class for all library errors."""


class InputError(PermdivError, ValueError):
    """Malformed input: bad degree, non-bijection, improper partial permutation."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class HypothesisNotMet(PermdivError):
    """A theorem's hypothesis does not hold for the requested parameters."""


class BudgetExceeded(PermdivError):
    """An exponential search ran past its configured work budget."""

    def __init__(self, what: str, budget: int):
        self.budget = budget
        super().__init__(f"{what}: work budget of {budget} exceeded")


class InvariantError(PermdivError):
    """An output failed a post-condition. Always a bug."""
