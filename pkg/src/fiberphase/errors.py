"""Exception hierarchy shared by all fiberphase modules."""


class FiberPhaseError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FiberPhaseError, ValueError):
    """An input value violates a documented precondition or invariant."""


class ResourceLimitError(FiberPhaseError, RuntimeError):
    """A request exceeds a hard synthesis/memory limit."""


class FitError(FiberPhaseError, RuntimeError):
    """A least-squares fit is degenerate (singular design, bad offset)."""


class InsufficientDataError(FiberPhaseError, RuntimeError):
    """Too few samples/increments to compute a requested statistic."""


class EmptySegmentsError(FiberPhaseError, RuntimeError):
    """Phase extraction produced no usable segment (>= 2 samples)."""


class ThresholdNotReachedError(FiberPhaseError, RuntimeError):
    """The mean-phase-change curve never reaches the requested target.

    Carries the largest observed value so callers can report how far
    the curve got.
    """

    def __init__(self, target: float, max_dphi: float):
        self.target = target
        self.max_dphi = max_dphi
        super().__init__(
            f"mean phase change never reaches {target:g} rad "
            f"(maximum observed: {max_dphi:g} rad)"
        )


class TraceParseError(FiberPhaseError, ValueError):
    """A CSV file does not conform to its declared format.

    Carries the 1-based line number at which parsing failed.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
