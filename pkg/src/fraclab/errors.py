"""Exception hierarchy shared by all fraclab modules."""


class FraclabError(Exception):
    """Base class for every error raised by fraclab."""


class ConfigInvalid(FraclabError):
    pass


class UnknownFamily(ConfigInvalid):
    pass


class ParameterOutOfRange(FraclabError, ValueError):
    pass


class OrderOutOfRange(ParameterOutOfRange):
    pass


class PoleOrUnsupported(FraclabError, ValueError):
    pass


class GridMismatch(FraclabError, ValueError):
    pass


class NonPositiveWeight(FraclabError, ValueError):
    pass


class DivergentTail(FraclabError):
    """An improper integral over an infinite tail does not converge."""


# both names are used across the operator docs
TailDivergence = DivergentTail


class EpsilonTooSmall(FraclabError, ValueError):
    pass


class WindowTooNarrow(FraclabError, ValueError):
    pass


class KernelNotMonotone(FraclabError, ValueError):
    pass


class NonPeriodicInput(FraclabError, ValueError):
    pass


class IntegralOverflow(FraclabError):
    """A weight-constant product exceeded the configured cap."""

    def __init__(self, message: str, scale: float | None = None) -> None:
        super().__init__(message)
        self.scale = scale


class NumericalNonConvergence(FraclabError):
    """Base for errors meaning "needs a larger budget" rather than "wrong"."""


class QuadratureNotConverged(NumericalNonConvergence):
    pass


class TruncationBudgetExceeded(NumericalNonConvergence):
    pass
