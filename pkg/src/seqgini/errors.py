"""Exception types shared across the package."""

from __future__ import annotations


class SeqGiniError(Exception):
    """Base class for all package errors."""


class InvalidObservationError(SeqGiniError, ValueError):
    """An observation is negative, NaN or infinite."""


class InsufficientDataError(SeqGiniError, ValueError):
    """Too few observations for the requested statistic."""


class UndefinedGiniError(SeqGiniError, ZeroDivisionError):
    """The sample mean is zero, so the Gini index is undefined."""


class SourceExhaustedError(SeqGiniError):
    """The observation source ran dry before the stopping rule was met.

    ``n`` is the number of observations consumed and ``threshold`` the last
    evaluated right-hand side of the stopping inequality (``None`` if the
    pilot sample was never completed).
    """

    def __init__(self, n: int, threshold: float | None = None):
        self.n = n
        self.threshold = threshold
        if threshold is None:
            msg = f"source exhausted after {n} observations (pilot sample incomplete)"
        else:
            msg = (
                f"source exhausted after {n} observations; "
                f"stopping threshold {threshold:.4f} not reached"
            )
        super().__init__(msg)


class CapExceededError(SeqGiniError):
    """The sequential run reached ``n_max`` without stopping."""

    def __init__(self, n_max: int):
        self.n_max = n_max
        super().__init__(f"stopping rule not satisfied within n_max={n_max} observations")


class ParseError(SeqGiniError, ValueError):
    """A row of an input file could not be read as a nonnegative real."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MomentExistenceError(SeqGiniError, ValueError):
    """The requested population quantity needs moments the distribution lacks."""
