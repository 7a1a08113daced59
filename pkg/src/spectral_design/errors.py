"""Exception hierarchy.

Two families: ``ValidationError`` for bad user input (parameters, domains,
node sets) and ``NumericalError`` for failures inside a computation. The
CLI maps the first to exit code 2 and the second to exit code 1.
"""


class SpectralDesignError(Exception):
    pass


class ValidationError(SpectralDesignError, ValueError):
    pass


class NumericalError(SpectralDesignError, ArithmeticError):
    pass


class ParamError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class DegenerateNodesError(ValidationError):
    pass


class PoleError(NumericalError):
    """Argument sits on a pole of the gamma function."""


class ZeroOffdiagError(NumericalError):
    """A three-term recursion needs to divide by a vanishing off-diagonal."""


class DegenerateRecursionError(ZeroOffdiagError):
    pass


class ConvergenceError(NumericalError):
    pass


class SingularityError(NumericalError):
    """A matrix function is non-finite at some eigenvalue."""


class SingularError(NumericalError):
    """Zero pivot while inverting a tridiagonal matrix."""


class PivotError(NumericalError):
    pass


class NoValidNodesError(NumericalError):
    pass


class DivergenceError(NumericalError):
    """Wavefunction series evaluated off the spectrum."""

    def __init__(self, message, growth_ratio=None):
        super().__init__(message)
        self.growth_ratio = growth_ratio
