"""Exception hierarchy shared by every module of the package."""


class HatPuzzleError(Exception):
    """Base class for all errors raised by hatpuzzle."""


class GroupMismatchError(HatPuzzleError, ValueError):
    """An element or coloring does not belong to the group it is used with."""


class GroupSpecParseError(HatPuzzleError, ValueError):
    """Malformed group spec text. ``position`` is the 0-based offending offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class UnsupportedError(HatPuzzleError):
    """The requested operation is not defined for this configuration."""


class BudgetExceededError(UnsupportedError):
    """An exhaustive check would exceed the configured check budget."""

    def __init__(self, required: int, budget: int, what: str = "checks"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"exhaustive run needs {required} {what} but the budget is {budget}; "
            f"rerun with --budget {required} or a smaller configuration"
        )


class NotAParityFunctionError(HatPuzzleError):
    """Slot inversion found zero or several solutions, so the map is not a parity function."""
