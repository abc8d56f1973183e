"""
Exceptions raised by harmonic_census.

Two families matter to callers:

- validation errors (also ``ValueError``) mean the request itself was wrong;
- certification errors mean the numerics could not vouch for an answer.

The CLI maps the first family to exit code 2 and the second to exit code 3.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from harmonic_census.models.CensusModels import CensusReport

__all__ = [
    "HarmonicCensusError",
    "InvalidParameterError",
    "DomainError",
    "NotClosed",
    "CertificationError",
    "IndeterminateError",
    "BudgetExceeded",
    "RootSolverFailure",
    "CrossCheckFailure",
    "NearCriticalValue",
    "AtCriticalValue",
    "NoConvergence",
    "SingularJacobian",
    "SingularPoint",
    "SingularZeroSuspected",
    "InconsistentCensus",
]


class HarmonicCensusError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(HarmonicCensusError, ValueError):
    """A parameter lies outside the range an operation accepts."""


class DomainError(InvalidParameterError):
    """The point is outside the domain of f_a (the pole at the origin)."""


class NotClosed(InvalidParameterError):
    """A curve handed to the winding engine does not close."""


class CertificationError(HarmonicCensusError):
    """The computation ran but its result could not be certified."""


class IndeterminateError(CertificationError):
    """A quotient of two vanishing quantities was requested."""


class BudgetExceeded(CertificationError):
    """Adaptive refinement hit its point budget before meeting tolerance."""


class RootSolverFailure(CertificationError):
    """Bracketing or bisection of a real root did not behave as expected."""


class CrossCheckFailure(CertificationError):
    """Two independent routes to the same quantity disagree."""


class NearCriticalValue(CertificationError):
    """The caustic passes too close to the origin to certify a winding number."""


class AtCriticalValue(CertificationError):
    """The parameter sits inside the exclusion window of a critical value."""


class NoConvergence(CertificationError):
    """Newton iteration ran out of iterations."""


class SingularJacobian(CertificationError):
    """Newton iteration met a (numerically) singular Jacobian."""


class SingularPoint(CertificationError):
    """The point lies on the critical set, where the order is undefined."""


class SingularZeroSuspected(CertificationError):
    """A converged zero has a Jacobian too small to assign it an order."""


class InconsistentCensus(CertificationError):
    """The zero census disagrees with the winding identities."""

    def __init__(self, message: str, report: Optional["CensusReport"] = None):
        super().__init__(message)
        self.report = report
