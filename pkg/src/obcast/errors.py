"""Exception types shared across the package."""


class SolverFailure(RuntimeError):
    """Iterative solver hit its cap without certifying optimality.

    Carries the best primal/dual pair found so far.
    """

    def __init__(self, message, primal=None, gap=None, povm=None):
        super().__init__(message)
        self.primal = primal
        self.gap = gap
        self.povm = povm


class InternalInconsistency(RuntimeError):
    """Two independent routes to the same quantity disagree beyond tolerance."""
