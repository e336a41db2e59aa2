"""Exception and warning types shared across the toolkit."""


class CarlemanError(Exception):
    """Base class for toolkit errors."""


class DomainError(CarlemanError, ValueError):
    """A point or angle lies outside the region where a quantity is defined."""


class ParameterError(CarlemanError, ValueError):
    """A weight or solver parameter is outside its admissible range."""


class SingularityError(DomainError):
    """Evaluation at the origin, where radially homogeneous weights are singular."""


class BranchError(DomainError):
    """Evaluation on the branch cut of a non-integer complex power."""


class DegenerateGradientError(CarlemanError, ArithmeticError):
    pass


class NoRootError(CarlemanError, ArithmeticError):
    pass


class BracketError(CarlemanError, ValueError):
    """Bisection endpoints do not bracket a change of the predicate."""


class StiffnessError(CarlemanError, RuntimeError):
    """Step size collapsed during shooting; ``result`` holds the last good trajectory."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConvergenceError(CarlemanError, RuntimeError):
    """Optimizer hit its iteration cap; ``best`` holds (params, margin) found so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NonMonotoneWarning(UserWarning):
    pass


class DegenerateRootWarning(UserWarning):
    pass
