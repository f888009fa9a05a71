"""Exception types shared across the package.

The CLI maps these onto process exit codes (domain error -> 2,
verification failure -> 1, non-convergence -> 3).
"""


class DomainError(ValueError):
    """A parameter lies outside the admissible range of an operation."""


class VerificationError(AssertionError):
    """A numerical check of an inequality or identity failed."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration limit without converging."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
