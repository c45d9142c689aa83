# -*- coding: utf-8 -*-
"""
Exceptions raised by this package.

Every exception derives from :class:`AnnealabError`, and additionally from the
closest built-in exception, so that callers may catch either::

    try:
        Logarithmic(c=0.5, K=0.5)
    except ValueError:
        ...
"""
from typing import Iterable, List, Optional


class AnnealabError(Exception):
    """
    Base class of all errors raised by :mod:`annealab`.
    """


class ZeroVector(AnnealabError, ValueError):
    """
    A vector could not be normalised because its norm vanished.
    """


class DimensionMismatch(AnnealabError, ValueError):
    """
    Two operands do not share a dimension.
    """


class InvalidConfiguration(AnnealabError, ValueError):
    """
    A set of points does not form a valid configuration on the product sphere.
    """


class InvalidInstance(AnnealabError, ValueError):
    """
    A contrastive instance (similarity kind, pair set, anchors) is malformed.
    """


class InvalidSchedule(AnnealabError, ValueError):
    """
    An inverse-temperature schedule violates its constructor invariants.

    Parameters
    ----------
    message : str
        Explanation of the violated constraint.

    field : str
        Name of the offending schedule parameter.
    """

    field: Optional[str]

    def __init__(self, message: str, *, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class InvalidIntegrator(AnnealabError, ValueError):
    """
    An integrator configuration violates its invariants.
    """

    field: Optional[str]

    def __init__(self, message: str, *, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class StepOverflow(AnnealabError, ArithmeticError):
    """
    A Langevin step left the locally geodesic regime of the projection retraction.

    Parameters
    ----------
    message : str
        Explanation of the overflow.

    step : int
        Index of the offending step.

    chain : int | None
        Index of the offending chain, if raised from within an ensemble.
    """

    step: int
    chain: Optional[int]

    def __init__(self, message: str, *, step: int, chain: Optional[int] = None):
        super().__init__(message)
        self.step = step
        self.chain = chain


class DegenerateCritical(AnnealabError, ValueError):
    """
    A critical point is flat (vanishing second derivative) or the landscape is not
    smooth enough for a curvature-based formula.
    """


class AllCensored(AnnealabError, RuntimeError):
    """
    No chain left its starting basin before the horizon.
    """


class InsufficientData(AnnealabError, ValueError):
    """
    Too few usable samples to produce an estimate.
    """


class NotSuboptimal(AnnealabError, ValueError):
    """
    The configuration is already optimal for the requested anchor.
    """


class _FailureList(AnnealabError, ValueError):
    """
    Base for errors that aggregate several failure messages.
    """

    failures: List[str]

    def __init__(self, failures: Iterable[str], *, header: str):
        self.failures = list(failures)
        super().__init__(
            f"{header} ({len(self.failures)} problem(s)):"
            + "".join(f"\n  - {failure}" for failure in self.failures)
        )


class ParseError(_FailureList):
    """
    A configuration file is malformed, has unknown keys or values outside a closed
    enumeration.
    """

    def __init__(self, failures: Iterable[str]):
        super().__init__(failures, header="Malformed configuration")


class ValidationError(_FailureList):
    """
    A configuration file parsed, but breaches one or more invariants.
    """

    def __init__(self, failures: Iterable[str]):
        super().__init__(failures, header="Invalid configuration")
