"""Exception hierarchy shared by the library and the command line."""


class PprfixError(Exception):
    """Base class for all errors raised by pprfix."""


class InputError(PprfixError, ValueError):
    """Malformed or out-of-domain user input (files, vectors, parameters)."""


class PreconditionError(PprfixError, ValueError):
    """An operation was called on an object that violates its precondition."""


class ConvergenceError(PprfixError):
    """An iterative method hit its iteration cap before meeting tolerance.

    The best iterate and its residual are kept so callers can inspect them.
    """

    def __init__(self, message, best=None, residual=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations


class InvariantError(PprfixError):
    """An internal invariant was breached. Indicates a bug, not bad input."""
