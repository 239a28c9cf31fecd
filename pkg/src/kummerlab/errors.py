"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(OverflowError):
    """A value does not fit the supported 64-bit integer domain."""


class ResourceError(MemoryError):
    """A request exceeds the configured memory budget."""


class PreconditionError(ValueError):
    """Admissibility flags or other stated preconditions are violated."""


class IdentityViolation(ArithmeticError):
    """A numerically evaluated identity failed to land on an integer."""


class CorrespondenceError(ArithmeticError):
    """No Dirichlet character matches a residue symbol pointwise."""


class LiftError(ArithmeticError):
    """Hensel lifting was asked to lift a non-simple root."""


class ConvergenceError(RuntimeError):
    """An iterative estimator did not reach its tolerance."""
