"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad JSON, non-symmetric matrix, ...)."""


class GuardExceeded(RuntimeError):
    """An exact operation was asked to run beyond its configured size guard."""


class BudgetExceeded(RuntimeError):
    """A search ran out of its node budget; distinct from "no solution exists"."""


class IntractableTemplateError(RuntimeError):
    """A polynomial-path operation was invoked on an NP-complete template."""


class OpenRegimeError(RuntimeError):
    """The instance falls in a regime whose complexity is open; only the
    exponential oracle path is available."""
