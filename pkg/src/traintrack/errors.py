"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """Input lies outside the domain an operation is defined on."""


class SingularityError(DomainError):
    """Evaluation requested exactly on (or too close to) a singularity."""


class BranchTrackingError(DomainError):
    """A branch could not be tracked continuously from the base point."""


class ConvergenceError(RuntimeError):
    """An iteration or series failed to reach the requested tolerance."""


class NonConstantRatioError(RuntimeError):
    """A ratio expected to be sample-independent varied across samples.

    Carries the measured values in ``ratios`` so callers can report them.
    """

    def __init__(self, message, ratios=None):
        super().__init__(message)
        self.ratios = list(ratios) if ratios is not None else []
