"""Exception hierarchy shared by every lorenzkit module."""


class LorenzError(Exception):
    """Base class for all lorenzkit errors."""


class DomainError(LorenzError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(LorenzError, ValueError):
    """Input data failed a structural or consistency check."""


class EstimationInfeasibleError(LorenzError):
    """The data admit no parameter value inside the model's box."""


class DegenerateConfigurationError(EstimationInfeasibleError):
    """The closed-form k equation is 0/0 (or nearly so) for these inputs."""


class KOutOfRangeError(EstimationInfeasibleError):
    """The closed-form k fell outside [0, 1].

    The raw value is kept on ``raw_k`` so the caller can decide whether
    to clamp it.
    """

    def __init__(self, raw_k: float, message: str | None = None):
        self.raw_k = raw_k
        super().__init__(message or f"k = {raw_k:.6g} lies outside [0, 1]")


class NonConvergenceError(LorenzError):
    """No optimizer start converged; ``best`` carries the best attempt."""

    def __init__(self, message: str, best=None):
        self.best = best
        super().__init__(message)
