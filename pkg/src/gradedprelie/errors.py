"""Exception hierarchy shared by all modules."""


class GradedPreLieError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(GradedPreLieError, ZeroDivisionError):
    pass


class MixedVariant(GradedPreLieError, TypeError):
    """Operands mix Gaussian rationals with rational functions."""


class PoleAtPoint(GradedPreLieError, ZeroDivisionError):
    pass


class OutOfWindow(GradedPreLieError, IndexError):
    pass


class InvalidParameter(GradedPreLieError, ValueError):
    pass


class NotInvariant(GradedPreLieError, ValueError):
    pass


class UnsupportedVariant(GradedPreLieError, TypeError):
    pass


class AnnihilatorAtZero(GradedPreLieError, ValueError):
    pass


class RatioUndefined(GradedPreLieError, ZeroDivisionError):
    pass


class BudgetExceeded(GradedPreLieError, RuntimeError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(
            f"search needs about {estimate} defect evaluations, budget is {budget}"
        )
        self.estimate = estimate
        self.budget = budget


class Contradiction(GradedPreLieError, ValueError):
    """A constraint instance cannot be satisfied by the partial assignment."""

    def __init__(self, triple, message: str):
        super().__init__(f"C{triple}: {message}")
        self.triple = triple


class NoInjectionA0(GradedPreLieError, ValueError):
    pass
