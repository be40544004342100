"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NumericError(ArithmeticError):
    """An iterative scheme failed to reach its accuracy target.

    Raised by the quadrature convergence check, the quantile bracketing and
    the continued-fraction evaluators. The message carries the diagnostics
    (achieved error, iteration count, offending parameters).
    """


class DegenerateModelError(DomainError):
    """The requested distribution collapses to a point mass.

    The one-factor conditional-default law with zero asset correlation is the
    canonical case: the mixing distribution is a point mass at the
    unconditional default probability, so its CDF is a step function and
    continuous-distribution operations on it are refused rather than faked.
    """
