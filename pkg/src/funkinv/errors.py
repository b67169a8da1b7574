"""Exception hierarchy shared by all funkinv modules."""


class FunkinvError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(FunkinvError, ValueError):
    """An argument is outside the documented range (bad n, resolution, ell, ...)."""


class DomainError(FunkinvError, ValueError):
    """A point or parameter is outside the mathematical domain of the operation."""


class PoleError(FunkinvError, ValueError):
    """The requested parameter sits on (or within tolerance of) a pole.

    The offending pole location, when known, is stored in ``pole``.
    """

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class DivergenceError(FunkinvError, ArithmeticError):
    """A quadrature did not converge under refinement (non-integrable kernel)."""


class UnsupportedGridError(FunkinvError, ValueError):
    """The grid lacks a structural property the operation needs (e.g. antipodal pairing)."""


class ResolutionError(FunkinvError, ValueError):
    """The grid resolution / exactness degree is insufficient for the request."""


class PreconditionError(FunkinvError, ValueError):
    """An enforced analytic precondition (e.g. zero mean) is violated."""


class ExcludedComponentError(FunkinvError, ValueError):
    """The operation is undefined on the requested component (e.g. degree 0)."""


class InsufficientSamplesError(FunkinvError, ValueError):
    """Too few Monte-Carlo samples requested for a meaningful estimate."""
