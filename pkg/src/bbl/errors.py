"""Exception types shared across the package."""


class DomainError(ValueError):
    """A quantity left the mathematical domain it is defined on.

    Examples: log utility evaluated at nonpositive wealth, a tail-mass
    cutoff of 0 or 1 on an unbounded distribution, a certainty-equivalent
    request at a zero risky share.
    """


class ConvergenceError(RuntimeError):
    """An iterative routine failed to converge within its iteration cap."""
