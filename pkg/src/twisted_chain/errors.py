"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line can map failures
onto its exit-code contract (1 domain, 2 convergence, 3 I/O, 4 verification).
"""


class ChainError(Exception):
    exit_code = 1


class DomainError(ChainError, ValueError):
    """Parameters outside the regime where an operation is defined."""


class SizeLimitError(DomainError):
    pass


class SingularParameterError(DomainError):
    pass


class PoleError(DomainError):
    """Evaluation point sits on (or within tolerance of) a pole."""


class DegenerateError(DomainError):
    """Degenerate input: clustered nodes, colliding roots, vanishing leading term."""


class IllConditionedFitError(DegenerateError):
    pass


class ConvergenceError(ChainError, ArithmeticError):
    exit_code = 2

    def __init__(self, message, best=None, norm=None):
        super().__init__(message)
        self.best = best
        self.norm = norm


class RankError(ConvergenceError):
    pass


class DecompositionError(ConvergenceError):
    def __init__(self, message, residual=None):
        super().__init__(message, norm=residual)
        self.residual = residual


class DivergenceError(ConvergenceError):
    """An integrand does not decay fast enough for the truncated quadrature."""


class ExtractionError(ConvergenceError):
    """Eigenvalue-function extraction from ED data failed its residual checks."""


class VerificationError(ChainError):
    exit_code = 4


class FitError(ConvergenceError):
    """A least-squares fit or root polish missed its residual target."""


class OutputError(ChainError):
    """Reading or writing an artifact failed."""

    exit_code = 3
